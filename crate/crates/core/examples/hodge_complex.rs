//! Cochains on the boundary of a triangle and the Hodge-type map that
//! sends a k-simplex to its opposite face.

use feec::complex::{coboundary, hodge_matrix, Cochain, Simplex, SimplicialComplex};
use feec::rational::int;

fn main() -> feec::Result<()> {
    let tri = Simplex::standard(2);
    let complex = SimplicialComplex::of_simplex(&tri);
    for k in 0..=2 {
        println!("{} simplices of dimension {k}", complex.count(k));
    }

    // A vertex function and its coboundary on the edges.
    let f = Cochain { degree: 0, values: vec![int(1), int(4), int(9)] };
    let df = coboundary(&complex, &f)?;
    for (e, v) in complex.simplices(1).iter().zip(&df.values) {
        println!("df on {e} = {v}");
    }

    for k in 0..=2 {
        println!("hodge map k={k}: {:?}", hodge_matrix(&tri, k)?);
    }
    Ok(())
}
