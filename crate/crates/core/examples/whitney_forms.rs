//! Whitney forms on a tetrahedron: explicit expressions, their exterior
//! derivatives and the duality with face integration.

use feec::complex::Simplex;
use feec::whitney::whitney;

fn main() -> feec::Result<()> {
    let tet = Simplex::standard(3);
    for t in tet.faces(1) {
        let w = whitney(&tet, &t)?;
        println!("λ_{t} = {w}");
        println!("  d = {}", w.d().canonicalize());
    }

    // ∫_S λ_T is 1 when S = T and 0 otherwise.
    let edges = tet.faces(1);
    for t in &edges {
        let w = whitney(&tet, t)?;
        let row: Vec<String> = edges.iter().map(|s| w.integrate_over(s).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        println!("{}", row.join(" "));
    }
    Ok(())
}
