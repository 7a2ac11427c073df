//! Mass matrices from edge lengths alone. The same triangle is described
//! by coordinates and by its squared edge lengths.

use feec::complex::Simplex;
use feec::metric::EdgeMetric;
use feec::rational::{int, rat};
use feec::whitney::whitney;

fn main() -> feec::Result<()> {
    let tri = Simplex::standard(2);
    let pts = vec![vec![int(0), int(0)], vec![int(2), int(0)], vec![rat(1, 2), int(1)]];
    let from_coords = EdgeMetric::from_coordinates(&tri, &pts)?;
    let from_lengths = EdgeMetric::new(&tri, from_coords.squared_lengths().clone())?;
    println!("squared lengths: {:?}", from_lengths.squared_lengths());
    println!("squared area {}", from_lengths.volume_sq());
    println!("gradient products: {:?}", from_lengths.grad_products()?);

    for k in 0..=2 {
        let forms: Vec<_> = tri.faces(k).iter().map(|t| whitney(&tri, t)).collect::<Result<_, _>>()?;
        let m = from_lengths.mass_matrix(&forms)?;
        println!("k={k}:");
        for row in m.to_f64() {
            println!("  {}", row.iter().map(|v| format!("{v:9.5}")).collect::<Vec<_>>().join(" "));
        }
    }
    Ok(())
}
