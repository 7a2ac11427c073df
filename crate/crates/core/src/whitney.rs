//! Whitney forms and trimmed polynomial spaces P⁻ᵣΛᵏ.

use num_traits::One;

use crate::complex::{opposite, Simplex};
use crate::error::{Error, Result};
use crate::forms::{coordinate_matrix, mask_of, multi_indices, BaryForm, MultiIndex};
use crate::rational::{binomial, factorial, int, Rational};

/// Whitney form λ_T of a face T of U, as a form on U:
/// λ_T = k! Σⱼ (−1)ʲ λ_{tⱼ} dλ_{t₀}∧…ω̂…∧dλ_{tₖ}, times the orientation of T.
pub fn whitney(u: &Simplex, t: &Simplex) -> Result<BaryForm> {
    let local = t.local_indices(u)?;
    let k = t.dim();
    let kf = Rational::from_integer(factorial(k));
    let mut out = BaryForm::zero(u, k);
    for (j, &tj) in local.iter().enumerate() {
        let rest: Vec<usize> = local.iter().copied().filter(|&x| x != tj).collect();
        let mut alpha = vec![0; u.dim() + 1];
        alpha[tj] = 1;
        let mut c = kf.clone();
        if (j % 2 == 1) != (t.sign() < 0) {
            c = -c;
        }
        out.axpy(&Rational::one(), &BaryForm::monomial(u, &alpha, &rest, c)?)?;
    }
    Ok(out)
}

/// μ_T = Π_{i ∈ T̂} λᵢ, the product of the coordinates opposite to T (1 when T = U).
pub fn mu(u: &Simplex, t: &Simplex) -> Result<BaryForm> {
    let local = t.local_indices(u)?;
    let keep = mask_of(&local);
    let alpha: MultiIndex = (0..=u.dim()).map(|i| u32::from(keep & (1 << i) == 0)).collect();
    Ok(BaryForm::power(u, &alpha))
}

/// dim P_rΛᵏ on an n-simplex: C(n+r, r)·C(n, k).
pub fn dim_p(n: usize, r: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    binomial(n + r, r) * binomial(n, k)
}

/// dim P⁻ᵣΛᵏ on an n-simplex: C(r+k−1, k)·C(n+r, n−k); zero for r = 0.
pub fn dim_pminus(n: usize, r: usize, k: usize) -> usize {
    if k > n || r == 0 {
        return 0;
    }
    binomial(r + k - 1, k) * binomial(n + r, n - k)
}

/// Degree q = r − n + k − 1 of the scalar factor in the interior family, if nonnegative.
pub fn interior_degree(n: usize, r: usize, k: usize) -> Option<usize> {
    let q = r as i64 - n as i64 + k as i64 - 1;
    (q >= 0).then_some(q as usize)
}

/// dim P⁻ᵣΛᵏ₀ on an n-simplex, equal to dim P_qΛⁿ⁻ᵏ with q = r − n + k − 1.
pub fn dim_pminus0(n: usize, r: usize, k: usize) -> usize {
    if k > n || r == 0 {
        return 0;
    }
    interior_degree(n, r, k).map_or(0, |q| dim_p(n, q, n - k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    /// P⁻ᵣΛᵏ(U), spanned by λ^α λ_T with |α| = r−1.
    PminusLk,
    /// P⁻ᵣΛᵏ₀(U), spanned by λ^α μ_T λ_T with |α| = r−n+k−1.
    PminusLk0,
    /// P_rΛᵏ(U), monomial basis λ^α dλ_J with |α| = r and 0 ∉ J.
    PLk,
}

/// Index of a generator: a multi-index over the vertices of U and a set of
/// vertex ids (a face of U, or a dλ index set for the PLk basis).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyLabel {
    pub alpha: MultiIndex,
    pub face: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SpanningFamily {
    pub tag: SpaceTag,
    pub ambient: Simplex,
    pub r: usize,
    pub k: usize,
    pub index: Vec<FamilyLabel>,
    pub generators: Vec<BaryForm>,
}

impl SpanningFamily {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Dimension of the span.
    pub fn span_dim(&self) -> usize {
        coordinate_matrix(&self.generators).0.rank()
    }

    /// Deterministic basis: generators at the pivot columns of the
    /// coordinate matrix.
    pub fn basis(&self) -> Vec<BaryForm> {
        let (m, _) = coordinate_matrix(&self.generators);
        let (_, pivots) = m.rref();
        pivots.into_iter().map(|j| self.generators[j].clone()).collect()
    }

    /// Dimension of the tagged space according to the closed formulas.
    pub fn expected_dim(&self) -> usize {
        let n = self.ambient.dim();
        match self.tag {
            SpaceTag::PminusLk => dim_pminus(n, self.r, self.k),
            SpaceTag::PminusLk0 => dim_pminus0(n, self.r, self.k),
            SpaceTag::PLk => dim_p(n, self.r, self.k),
        }
    }
}

/// Labels (α, T) for P_q ⊗ 𝒞ᵏ(U): homogeneous α of weight q, then k-faces T.
pub fn tensor_labels(u: &Simplex, q: usize, k: usize) -> Vec<FamilyLabel> {
    let faces = if k <= u.dim() { u.faces(k) } else { Vec::new() };
    let mut out = Vec::new();
    for alpha in multi_indices(u.dim() + 1, q as u32) {
        for t in &faces {
            out.push(FamilyLabel { alpha: alpha.clone(), face: t.vertices().to_vec() });
        }
    }
    out
}

pub fn spanning_family(u: &Simplex, r: usize, k: usize, tag: SpaceTag) -> Result<SpanningFamily> {
    let n = u.dim();
    if k > n {
        return Err(Error::InvalidArgument(format!("form degree {k} exceeds dimension {n}")));
    }
    let mut index = Vec::new();
    let mut generators = Vec::new();
    match tag {
        SpaceTag::PminusLk => {
            if r < 1 {
                return Err(Error::InvalidArgument("trimmed spaces need r ≥ 1".into()));
            }
            for label in tensor_labels(u, r - 1, k) {
                let t = Simplex::new(&label.face)?;
                let g = BaryForm::power(u, &label.alpha).wedge(&whitney(u, &t)?)?;
                index.push(label);
                generators.push(g);
            }
        }
        SpaceTag::PminusLk0 => {
            if r < 1 {
                return Err(Error::InvalidArgument("trimmed spaces need r ≥ 1".into()));
            }
            if let Some(q) = interior_degree(n, r, k) {
                for label in tensor_labels(u, q, k) {
                    let t = Simplex::new(&label.face)?;
                    let g = BaryForm::power(u, &label.alpha).wedge(&mu(u, &t)?)?.wedge(&whitney(u, &t)?)?;
                    index.push(label);
                    generators.push(g);
                }
            }
        }
        SpaceTag::PLk => {
            for alpha in multi_indices(n + 1, r as u32) {
                for js in crate::complex::combinations(n, k) {
                    let js: Vec<usize> = js.into_iter().map(|j| j + 1).collect();
                    generators.push(BaryForm::monomial(u, &alpha, &js, int(1))?);
                    index.push(FamilyLabel {
                        alpha: alpha.clone(),
                        face: js.iter().map(|&j| u.vertices()[j]).collect(),
                    });
                }
            }
        }
    }
    Ok(SpanningFamily { tag, ambient: u.clone(), r, k, index, generators })
}

/// Deterministic basis of P⁻ᵣΛᵏ(U) selected from the λ^α λ_T family.
pub fn pminus_basis(u: &Simplex, r: usize, k: usize) -> Result<Vec<BaryForm>> {
    Ok(spanning_family(u, r, k, SpaceTag::PminusLk)?.basis())
}

/// Deterministic basis of P⁻ᵣΛᵏ₀(U) selected from the λ^α μ_T λ_T family.
pub fn bubble_basis(u: &Simplex, r: usize, k: usize) -> Result<Vec<BaryForm>> {
    if k > u.dim() {
        return Ok(Vec::new());
    }
    Ok(spanning_family(u, r, k, SpaceTag::PminusLk0)?.basis())
}

/// Membership in P⁻ᵣΛᵏ: u and κu both have polynomial degree at most r,
/// with κ taken relative to `base` (local vertex index).
pub fn is_trimmed(u: &BaryForm, r: usize, base: usize) -> Result<bool> {
    if u.canonicalize().poly_degree() as usize > r {
        return Ok(false);
    }
    if u.degree() == 0 {
        return Ok(true);
    }
    Ok(u.koszul(base)?.canonicalize().poly_degree() as usize <= r)
}

/// The sign s(T) of the opposite-face pairing, re-exported for convenience.
pub fn opposite_sign(u: &Simplex, t: &Simplex) -> Result<i8> {
    Ok(opposite(u, t)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{incidence, Simplex};
    use crate::rational::int;
    use num_traits::Zero;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v).unwrap()
    }

    #[test]
    fn edge_whitney_form() {
        let u = Simplex::standard(2);
        let w = whitney(&u, &s(&[0, 1])).unwrap();
        let l0 = BaryForm::lambda(&u, 0).wedge(&BaryForm::dlambda(&u, 1)).unwrap();
        let l1 = BaryForm::lambda(&u, 1).wedge(&BaryForm::dlambda(&u, 0)).unwrap();
        assert_eq!(w, l0.sub(&l1).unwrap());
        assert!(whitney(&u, &s(&[0, 3])).is_err());
    }

    #[test]
    fn whitney_degrees_of_freedom() {
        let u = Simplex::standard(3);
        for k in 0..=3 {
            for t in u.faces(k) {
                let w = whitney(&u, &t).unwrap();
                for tp in u.faces(k) {
                    let v = w.integrate_over(&tp).unwrap();
                    assert_eq!(v, if tp == t { int(1) } else { int(0) }, "{t} on {tp}");
                }
            }
        }
    }

    #[test]
    fn whitney_dependency_relation() {
        let u = Simplex::standard(2);
        let t = u.clone();
        let mut sum = BaryForm::zero(&u, 1);
        for i in 0..3 {
            let face = t.without(i).unwrap();
            let term = BaryForm::lambda(&u, i).wedge(&whitney(&u, &face).unwrap()).unwrap();
            sum.axpy(&int(incidence(&t, &face) as i64), &term).unwrap();
        }
        assert!(sum.canonicalize().is_zero());
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_pminus(3, 3, 1), 45);
        assert_eq!(dim_pminus(2, 1, 2), 1);
        assert_eq!(dim_p(2, 2, 1), 12);
        assert_eq!(dim_pminus(2, 0, 1), 0);
        assert_eq!(dim_p(2, 2, 3), 0);
        assert_eq!(dim_pminus0(2, 2, 1), 2);
    }

    #[test]
    fn family_examples() {
        let tri = Simplex::standard(2);
        let f = spanning_family(&tri, 1, 1, SpaceTag::PminusLk).unwrap();
        assert_eq!((f.len(), f.span_dim()), (3, 3));
        let tet = Simplex::standard(3);
        let f = spanning_family(&tet, 2, 1, SpaceTag::PminusLk).unwrap();
        assert_eq!((f.len(), f.span_dim()), (24, 20));
        // Three generators μ_T λ_T with one relation (Σ over edges, by duality).
        let f = spanning_family(&tri, 2, 1, SpaceTag::PminusLk0).unwrap();
        assert_eq!((f.len(), f.span_dim()), (3, 2));
        let f = spanning_family(&tri, 1, 0, SpaceTag::PminusLk0).unwrap();
        assert!(f.is_empty());
        assert!(spanning_family(&tri, 0, 1, SpaceTag::PminusLk).is_err());
        let f = spanning_family(&tri, 2, 1, SpaceTag::PLk).unwrap();
        assert_eq!((f.len(), f.span_dim()), (12, 12));
    }

    #[test]
    fn trimmed_membership() {
        let tet = Simplex::standard(3);
        for k in 0..=3 {
            for t in tet.faces(k) {
                let w = whitney(&tet, &t).unwrap();
                for base in 0..=3 {
                    assert!(is_trimmed(&w, 1, base).unwrap());
                }
            }
        }
        let tri = Simplex::standard(2);
        let f = BaryForm::monomial(&tri, &[1, 0, 0], &[1, 2], int(1)).unwrap();
        assert!(is_trimmed(&f, 2, 0).unwrap());
        assert!(!is_trimmed(&f, 1, 0).unwrap());
        assert!(is_trimmed(&BaryForm::zero(&tri, 1), 1, 0).unwrap());
    }

    #[test]
    fn interior_family_vanishes_on_boundary() {
        let tet = Simplex::standard(3);
        for r in 1..=4 {
            for k in 0..=3 {
                let f = spanning_family(&tet, r, k, SpaceTag::PminusLk0).unwrap();
                for g in &f.generators {
                    for face in tet.faces(2) {
                        assert!(g.pullback_to_face(&face).unwrap().canonicalize().is_zero());
                    }
                }
            }
        }
        let _ = Rational::zero();
    }
}
