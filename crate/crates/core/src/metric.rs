//! Geometry from squared edge lengths: Cayley–Menger volumes, gradient
//! products dλᵢ·dλⱼ and L² products of barycentric forms.

use num_traits::{One, Signed, Zero};

use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::forms::BaryForm;
use crate::linalg::RatMatrix;
use crate::rational::{factorial, int, to_f64, Rational};

/// Squared edge lengths gᵢⱼ on a simplex, indexed by local vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMetric {
    simplex: Simplex,
    g: RatMatrix,
}

/// Squared volume of the simplex spanned by m+1 points with pairwise squared
/// distances `d2`: (−1)^{m+1}/(2^m (m!)²) · det of the bordered matrix.
/// A single point has squared volume 1.
pub fn cayley_menger_volume_sq(d2: &RatMatrix) -> Rational {
    let p = d2.nrows();
    assert_eq!(p, d2.ncols(), "distance matrix must be square");
    if p <= 1 {
        return Rational::one();
    }
    let m = p - 1;
    let mut b = RatMatrix::zeros(p + 1, p + 1);
    for i in 0..p {
        b[(0, i + 1)] = Rational::one();
        b[(i + 1, 0)] = Rational::one();
        for j in 0..p {
            b[(i + 1, j + 1)] = d2[(i, j)].clone();
        }
    }
    let scale = Rational::from_integer(num_bigint::BigInt::from(1u64 << m) * factorial(m) * factorial(m));
    let v = b.det() / scale;
    if m % 2 == 0 {
        -v
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassValue {
    /// Value = coeff · sqrt(vol_sq).
    pub coeff: Rational,
    pub vol_sq: Rational,
}

impl MassValue {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * to_f64(&self.vol_sq).sqrt()
    }
}

/// A mass matrix whose entries are `coeffs[i][j] · sqrt(vol_sq)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassMatrix {
    pub coeffs: RatMatrix,
    pub vol_sq: Rational,
}

impl MassMatrix {
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        let vol = to_f64(&self.vol_sq).sqrt();
        (0..self.coeffs.nrows())
            .map(|i| self.coeffs.row(i).iter().map(|c| to_f64(c) * vol).collect())
            .collect()
    }
}

impl EdgeMetric {
    /// Validates symmetry, zero diagonal, positive off-diagonal entries and
    /// positive squared volume of every face.
    pub fn new(simplex: &Simplex, g: RatMatrix) -> Result<Self> {
        let p = simplex.dim() + 1;
        if g.nrows() != p || g.ncols() != p {
            return Err(Error::InvalidArgument(format!("need a {p}x{p} matrix of squared lengths")));
        }
        for i in 0..p {
            if !g[(i, i)].is_zero() {
                return Err(Error::InvalidArgument("squared lengths must vanish on the diagonal".into()));
            }
            for j in 0..i {
                if g[(i, j)] != g[(j, i)] {
                    return Err(Error::InvalidArgument("squared lengths must be symmetric".into()));
                }
                if !g[(i, j)].is_positive() {
                    return Err(Error::Degenerate(format!("edge ({i},{j}) has nonpositive squared length")));
                }
            }
        }
        let metric = EdgeMetric { simplex: simplex.clone(), g };
        for face in simplex.all_faces() {
            if face.dim() >= 2 && !metric.restrict(&face)?.volume_sq().is_positive() {
                return Err(Error::Degenerate(format!("degenerate metric on face {face}")));
            }
        }
        Ok(metric)
    }

    pub fn from_fn(simplex: &Simplex, f: impl Fn(usize, usize) -> Rational) -> Result<Self> {
        let p = simplex.dim() + 1;
        let mut g = RatMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                if i != j {
                    g[(i, j)] = f(i.min(j), i.max(j));
                }
            }
        }
        Self::new(simplex, g)
    }

    /// Metric induced by rational Cartesian coordinates of the vertices.
    pub fn from_coordinates(simplex: &Simplex, points: &[Vec<Rational>]) -> Result<Self> {
        if points.len() != simplex.dim() + 1 {
            return Err(Error::InvalidArgument("one point per vertex is required".into()));
        }
        Self::from_fn(simplex, |i, j| points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum())
    }

    /// Standard n-simplex with vertices 0, e₁, …, eₙ.
    pub fn unit_right(n: usize) -> Self {
        let pts: Vec<Vec<Rational>> = (0..=n)
            .map(|i| (0..n).map(|c| if i == c + 1 { int(1) } else { int(0) }).collect())
            .collect();
        Self::from_coordinates(&Simplex::standard(n), &pts).expect("unit right simplex is nondegenerate")
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn squared_lengths(&self) -> &RatMatrix {
        &self.g
    }

    pub fn restrict(&self, face: &Simplex) -> Result<EdgeMetric> {
        let local = face.local_indices(&self.simplex)?;
        let g = self.g.select_rows(&local).select_cols(&local);
        Ok(EdgeMetric { simplex: face.clone(), g })
    }

    /// All squared lengths multiplied by `s2`.
    pub fn scaled(&self, s2: &Rational) -> Result<EdgeMetric> {
        let p = self.g.nrows();
        let mut g = self.g.clone();
        for i in 0..p {
            for j in 0..p {
                g[(i, j)] *= s2;
            }
        }
        Self::new(&self.simplex, g)
    }

    pub fn volume_sq(&self) -> Rational {
        cayley_menger_volume_sq(&self.g)
    }

    /// |x − y|² = −½ Σ gᵢⱼ dᵢ dⱼ with d = x − y in barycentric coordinates.
    pub fn squared_distance(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let d: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let mut s = Rational::zero();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if !d[i].is_zero() && !d[j].is_zero() {
                    s += &self.g[(i, j)] * &d[i] * &d[j];
                }
            }
        }
        -s / int(2)
    }

    /// Squared volume of the simplex spanned by barycentric points.
    pub fn points_volume_sq(&self, points: &[Vec<Rational>]) -> Rational {
        let p = points.len();
        let mut d2 = RatMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..i {
                let v = self.squared_distance(&points[i], &points[j]);
                d2[(i, j)] = v.clone();
                d2[(j, i)] = v;
            }
        }
        cayley_menger_volume_sq(&d2)
    }

    /// Matrix of dλᵢ·dλⱼ. For each i, the gradient of λᵢ is Σ_{j≠i} z_{ji}(xⱼ − xᵢ)
    /// with Σⱼ z_{ji} (g_{ji} + g_{ki} − g_{jk})/2 = −1 for every k ≠ i.
    pub fn grad_products(&self) -> Result<RatMatrix> {
        let p = self.g.nrows();
        let mut out = RatMatrix::zeros(p, p);
        if p == 1 {
            return Ok(out);
        }
        for i in 0..p {
            let others: Vec<usize> = (0..p).filter(|&j| j != i).collect();
            let mut a = RatMatrix::zeros(p - 1, p - 1);
            for (r, &j) in others.iter().enumerate() {
                for (c, &k) in others.iter().enumerate() {
                    a[(r, c)] = (&self.g[(j, i)] + &self.g[(k, i)] - &self.g[(j, k)]) / int(2);
                }
            }
            let rhs = RatMatrix::from_cols(p - 1, &[vec![int(-1); p - 1]]);
            let z = a.solve(&rhs).map_err(|_| Error::Degenerate("degenerate metric".into()))?;
            let mut diag = Rational::zero();
            for (r, &j) in others.iter().enumerate() {
                out[(j, i)] = z[(r, 0)].clone();
                diag -= &z[(r, 0)];
            }
            out[(i, i)] = diag;
        }
        Ok(out)
    }

    /// Pointwise scalar product of two k-forms as a scalar barycentric
    /// polynomial, via the Gram determinant det[dλ_a·dλ_b].
    pub fn pointwise_inner(&self, u: &BaryForm, v: &BaryForm) -> Result<BaryForm> {
        if u.degree() != v.degree() || u.ambient().vertices() != self.simplex.vertices() || v.ambient().vertices() != self.simplex.vertices() {
            return Err(Error::InvalidArgument("forms must share the metric's simplex and degree".into()));
        }
        let gp = self.grad_products()?;
        let mut out = BaryForm::zero(&self.simplex, 0);
        let mut gram_cache = std::collections::HashMap::new();
        for (a, ma, ca) in u.terms() {
            for (b, mb, cb) in v.terms() {
                let gram = gram_cache
                    .entry((ma, mb))
                    .or_insert_with(|| {
                        let ia = crate::forms::mask_indices(ma);
                        let ib = crate::forms::mask_indices(mb);
                        gp.select_rows(&ia).select_cols(&ib).det()
                    })
                    .clone();
                if gram.is_zero() {
                    continue;
                }
                let alpha: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.axpy(&(ca * cb * gram), &BaryForm::power(&self.simplex, &alpha))?;
            }
        }
        Ok(out)
    }

    /// L² product ∫_U u·v, as a multiple of vol(U).
    pub fn inner_product(&self, u: &BaryForm, v: &BaryForm) -> Result<MassValue> {
        let coeff = self.pointwise_inner(u, v)?.integrate_density()?;
        Ok(MassValue { coeff, vol_sq: self.volume_sq() })
    }

    /// Mass matrix of a list of k-forms.
    pub fn mass_matrix(&self, forms: &[BaryForm]) -> Result<MassMatrix> {
        let p = forms.len();
        let mut m = RatMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..=i {
                let v = self.inner_product(&forms[i], &forms[j])?.coeff;
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        Ok(MassMatrix { coeffs: m, vol_sq: self.volume_sq() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::whitney::whitney;

    #[test]
    fn volumes() {
        let eq = EdgeMetric::from_fn(&Simplex::standard(2), |_, _| int(1)).unwrap();
        assert_eq!(eq.volume_sq(), rat(3, 16));
        assert_eq!(EdgeMetric::unit_right(3).volume_sq(), rat(1, 36));
        let seg = EdgeMetric::from_fn(&Simplex::standard(1), |_, _| int(7)).unwrap();
        assert_eq!(seg.volume_sq(), int(7));
        assert_eq!(cayley_menger_volume_sq(&RatMatrix::zeros(1, 1)), int(1));
    }

    #[test]
    fn degenerate_metrics() {
        // Collinear: 1 + 1 = 2.
        let g = |i: usize, j: usize| if (i, j) == (0, 2) { int(4) } else { int(1) };
        assert!(matches!(EdgeMetric::from_fn(&Simplex::standard(2), g), Err(Error::Degenerate(_))));
        let g = |i: usize, j: usize| if (i, j) == (0, 2) { int(9) } else { int(1) };
        assert!(EdgeMetric::from_fn(&Simplex::standard(2), g).is_err());
    }

    #[test]
    fn gradient_products() {
        let gp = EdgeMetric::unit_right(2).grad_products().unwrap();
        assert_eq!(gp[(1, 1)], int(1));
        assert_eq!(gp[(1, 2)], int(0));
        assert_eq!(gp[(0, 0)], int(2));
        assert_eq!(gp[(0, 1)], int(-1));
        let eq = EdgeMetric::from_fn(&Simplex::standard(2), |_, _| int(1)).unwrap();
        let gp = eq.grad_products().unwrap();
        for i in 0..3 {
            let row: Rational = gp.row(i).iter().cloned().sum();
            assert!(row.is_zero());
            for j in 0..3 {
                assert_eq!(gp[(i, j)], if i == j { rat(4, 3) } else { rat(-2, 3) });
            }
        }
    }

    #[test]
    fn scalar_mass() {
        let m = EdgeMetric::unit_right(2);
        let u = Simplex::standard(2);
        let l: Vec<BaryForm> = (0..3).map(|i| BaryForm::lambda(&u, i)).collect();
        let mm = m.mass_matrix(&l).unwrap();
        assert_eq!(mm.vol_sq, rat(1, 4));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(mm.coeffs[(i, j)], if i == j { rat(1, 6) } else { rat(1, 12) });
            }
        }
    }

    #[test]
    fn whitney_mass_is_symmetric_positive() {
        let m = EdgeMetric::unit_right(2);
        let u = Simplex::standard(2);
        let w: Vec<BaryForm> = u.faces(1).iter().map(|t| whitney(&u, t).unwrap()).collect();
        let mm = m.mass_matrix(&w).unwrap();
        assert_eq!(mm.coeffs, mm.coeffs.transpose());
        assert!(mm.coeffs.det().is_positive());
        // Lowest-order edge elements on the unit right triangle: λ₀dλ₁ − λ₁dλ₀ has ‖·‖² = 1/3.
        assert_eq!(&mm.coeffs[(0, 0)] * rat(1, 2), rat(1, 3));
    }
}
