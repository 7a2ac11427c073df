//! Builds the resolutions of the trimmed spaces on a triangle and checks
//! exactness stage by stage.

use feec::complex::Simplex;
use feec::resolve::{resolution_diff, resolution_pminus, resolution_pminus0};
use feec::whitney::interior_degree;

fn main() -> feec::Result<()> {
    let tri = Simplex::standard(2);
    let r = 3;
    for k in 0..=2 {
        let mut all = vec![resolution_pminus(&tri, r, k)?];
        if interior_degree(2, r, k).is_some() {
            all.push(resolution_pminus0(&tri, r, k)?);
        }
        if k < 2 {
            all.push(resolution_diff(&tri, r - 1, k)?);
        }
        for res in all {
            let rep = res.verify();
            println!("{} ({})", rep.name, if rep.passed() { "exact" } else { "NOT exact" });
            for s in &rep.stages {
                println!("  {:<12} domain {:>3} rank {:>3}", s.name, s.domain_dim, s.rank);
            }
            println!("  target dimension {}", rep.target_dim);
        }
    }
    Ok(())
}
