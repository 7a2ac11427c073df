//! Polynomial bases from node tables, and evaluation by the generalized
//! de Casteljau recursion.

use std::collections::BTreeMap;

use feec::bases::{basis_family, de_casteljau_eval, NodeTable};
use feec::rational::{int, rat};
use feec::RatMatrix;

fn main() -> feec::Result<()> {
    let (n, r) = (2, 3);
    let nodes = NodeTable::new(vec![
        vec![int(0), rat(1, 4), rat(1, 2)],
        vec![int(0), rat(1, 3), rat(2, 3)],
        vec![rat(-1, 5), int(0), rat(1, 5)],
    ])?;
    let fam = basis_family(&nodes)?;
    println!("{} polynomials of degree {r}, basis: {}", fam.polys.len(), fam.is_basis());

    let coeffs: BTreeMap<_, _> = fam.indices.iter().enumerate().map(|(i, a)| (a.clone(), int(i as i64 - 4))).collect();
    let x = vec![rat(1, 2), rat(1, 3), rat(1, 6)];
    let direct: feec::Rational = fam.scaled().iter().zip(&fam.indices).map(|(p, a)| &coeffs[a] * p.evaluate(&x)).sum();
    println!("de Casteljau {} direct {}", de_casteljau_eval(&coeffs, &x, &nodes)?, direct);

    let bern = basis_family(&NodeTable::bernstein(n, r))?;
    println!("Bernstein change of basis is the identity: {}", bern.change_of_basis() == RatMatrix::identity(bern.polys.len()));

    match NodeTable::new(vec![vec![int(0), int(1)], vec![int(0), int(1)]]) {
        Ok(_) => println!("accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
