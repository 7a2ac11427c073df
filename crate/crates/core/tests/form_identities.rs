use feec::complex::{incidence, Simplex};
use feec::forms::{random_form, random_interior_point, BaryForm};
use feec::linalg::RatMatrix;
use feec::rational::{int, Rational};
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stokes_on_every_face(seed in any::<u64>(), n in 1usize..=3) {
        let mut g = rng(seed);
        let u = Simplex::standard(n);
        for k in 0..n {
            let w = random_form(&mut g, &u, k, 3, 4);
            let dw = w.d();
            for t in u.faces(k + 1) {
                let lhs = dw.integrate_over(&t).unwrap();
                let rhs: Rational = t
                    .faces(k)
                    .iter()
                    .map(|f| int(incidence(&t, f) as i64) * w.integrate_over(f).unwrap())
                    .sum();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut g = rng(seed);
        let u = Simplex::standard(3);
        let k = g.gen_range(0..=2);
        let l = g.gen_range(0..=3 - k - 1);
        let a = random_form(&mut g, &u, k, 2, 3);
        let b = random_form(&mut g, &u, l, 2, 3);
        let lhs = a.wedge(&b).unwrap().d();
        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        let rhs = a.d().wedge(&b).unwrap().add(&a.wedge(&b.d()).unwrap().scale(&sign)).unwrap();
        prop_assert!(lhs.equals(&rhs));
        prop_assert!(a.d().d().canonicalize().is_zero());
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>()) {
        let mut g = rng(seed);
        let u = Simplex::standard(3);
        let (k, l) = (g.gen_range(0..=2), g.gen_range(0..=1));
        let a = random_form(&mut g, &u, k, 2, 3);
        let b = random_form(&mut g, &u, l, 2, 3);
        let sign = if (k * l) % 2 == 0 { Rational::one() } else { -Rational::one() };
        prop_assert!(a.wedge(&b).unwrap().equals(&b.wedge(&a).unwrap().scale(&sign)));
    }

    #[test]
    fn pullback_is_natural(seed in any::<u64>(), n in 1usize..=3) {
        let mut g = rng(seed);
        let u = Simplex::standard(n);
        let target = Simplex::standard(n);
        let points: Vec<Vec<Rational>> = (0..=n).map(|_| random_interior_point(&mut g, n)).collect();
        let k = g.gen_range(0..n);
        let a = random_form(&mut g, &u, k, 2, 3);
        let b = random_form(&mut g, &u, n - k - 1, 1, 2);
        let pa = a.pullback_affine(&points, &target).unwrap();
        let pb = b.pullback_affine(&points, &target).unwrap();
        prop_assert!(pa.d().equals(&a.d().pullback_affine(&points, &target).unwrap()));
        prop_assert!(pa.wedge(&pb).unwrap().equals(&a.wedge(&b).unwrap().pullback_affine(&points, &target).unwrap()));
        // Pointwise: the pulled back scalar agrees with the original at the image point.
        let s = random_form(&mut g, &u, 0, 3, 4);
        let y = random_interior_point(&mut g, n);
        let x: Vec<Rational> = (0..=n).map(|i| (0..=n).map(|j| &points[j][i] * &y[j]).sum()).collect();
        prop_assert_eq!(s.pullback_affine(&points, &target).unwrap().evaluate_scalar(&y).unwrap(), s.evaluate_scalar(&x).unwrap());
    }
}

#[test]
fn pullback_to_vertices_of_a_face_matches_restriction() {
    let mut g = rng(7);
    let u = Simplex::standard(3);
    for k in 0..=2 {
        for f in u.faces(k) {
            let w = random_form(&mut g, &u, k, 3, 5);
            let points: Vec<Vec<Rational>> = f
                .vertices()
                .iter()
                .map(|&v| (0..=3).map(|i| if i == v { int(1) } else { int(0) }).collect())
                .collect();
            let target = Simplex::standard(k);
            let a = w.pullback_affine(&points, &target).unwrap();
            let b = w.pullback_to_face(&f).unwrap();
            assert_eq!(a.integrate().unwrap(), b.integrate().unwrap());
        }
    }
}

#[test]
fn top_form_pullback_scales_by_determinant() {
    let mut g = rng(11);
    for n in 1..=3 {
        let u = Simplex::standard(n);
        let target = Simplex::standard(n);
        let top: Vec<usize> = (1..=n).collect();
        let omega = BaryForm::monomial(&u, &vec![0; n + 1], &top, int(1)).unwrap();
        for _ in 0..5 {
            let points: Vec<Vec<Rational>> = (0..=n).map(|_| random_interior_point(&mut g, n)).collect();
            let det = RatMatrix::from_rows(points.clone()).det();
            let pulled = omega.pullback_affine(&points, &target).unwrap().integrate().unwrap();
            assert_eq!(pulled, det * omega.integrate().unwrap());
        }
    }
}
