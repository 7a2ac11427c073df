//! Canonical and small-simplex degrees of freedom for edge elements on a
//! triangle, and the D matrix at the barycenter.

use feec::complex::Simplex;
use feec::dofs::{canonical_dofs, d_matrix, small_dof_matrix, small_dof_subset, small_simplices};
use feec::rational::rat;
use feec::whitney::dim_pminus;

fn main() -> feec::Result<()> {
    let tri = Simplex::standard(2);
    let (r, k) = (2, 1);
    let canon = canonical_dofs(&tri, r, k)?;
    println!("canonical: {} functionals, rank {}, dim {}", canon.rows.len(), canon.matrix.rank(), dim_pminus(2, r, k));

    let small = small_simplices(&tri, r, k);
    let m = small_dof_matrix(&tri, r, k)?;
    println!("small simplices: {}, rank {}", small.len(), m.rank());
    for s in small.iter().take(4) {
        let pts: Vec<String> = s.vertices.iter().map(|p| format!("({})", p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))).collect();
        println!("  {} in parent {}", pts.join(" "), s.parent);
    }

    for sel in small_dof_subset(&tri, r)? {
        println!("unisolvent subset for k={}: {} of the small simplices", sel.k, sel.selection.nrows());
    }

    let x = vec![rat(1, 3), rat(1, 3), rat(1, 3)];
    for k in 0..=2 {
        let d = d_matrix(&tri, k, &x)?;
        println!("D for k={k}, PSD: {}: {d:?}", d.is_positive_semidefinite());
    }
    Ok(())
}
