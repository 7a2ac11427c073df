//! Interpolates a random 0-form and its gradient and shows that the
//! interpolants commute with d.

use feec::complex::Simplex;
use feec::dofs::Interpolator;
use feec::forms::random_form;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> feec::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tri = Simplex::standard(2);
    let r = 2;
    let f = random_form(&mut rng, &tri, 0, 3, 4);
    println!("f = {f}");

    let i0 = Interpolator::canonical(&tri, r, 0)?;
    let i1 = Interpolator::canonical(&tri, r, 1)?;
    let a = i1.interpolate(&f.d())?;
    let b = i0.interpolate(&f)?.d();
    println!("I(df) = {}", a.canonicalize());
    println!("d(If) = {}", b.canonicalize());
    println!("equal: {}", a.equals(&b));
    Ok(())
}
