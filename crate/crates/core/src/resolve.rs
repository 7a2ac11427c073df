//! Resolutions of trimmed spaces, redundancy elimination and geometric
//! decomposition.
//!
//! Tensor spaces P_q ⊗ 𝒞ᵏ(U) use the basis λ^α ⊗ T with |α| = q, so every
//! combinatorial map (δ, δ′, τ) stays inside the monomial basis.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{incidence, SimplicialComplex, Simplex};
use crate::dofs::{canonical_test_forms, DofLabel};
use crate::error::{Error, Result};
use crate::forms::{coordinate_matrix, BaryForm, TermKey};
use crate::linalg::RatMatrix;
use crate::rational::{format_rational, int, Rational};
use crate::whitney::{
    bubble_basis, dim_p, dim_pminus, dim_pminus0, interior_degree, mu, tensor_labels, whitney, FamilyLabel,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Basis of a tensor space, one label per basis vector.
    Labels(Vec<FamilyLabel>),
    /// Canonical monomial × coframe coordinates of a space of forms.
    Coordinates(Vec<TermKey>),
}

impl Axis {
    pub fn len(&self) -> usize {
        match self {
            Axis::Labels(l) => l.len(),
            Axis::Coordinates(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct LinearMapOnFamilies {
    pub name: String,
    pub domain: Axis,
    pub codomain: Axis,
    pub matrix: RatMatrix,
}

impl LinearMapOnFamilies {
    /// Matrix as CSV with `p/q` entries, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.matrix.nrows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(format_rational).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn index_of(labels: &[FamilyLabel]) -> HashMap<&FamilyLabel, usize> {
    labels.iter().enumerate().map(|(i, l)| (l, i)).collect()
}

/// δ on the second factor: P_q⊗𝒞ᵏ → P_q⊗𝒞ᵏ⁺¹.
pub fn coboundary_tensor(u: &Simplex, q: usize, k: usize) -> LinearMapOnFamilies {
    let dom = tensor_labels(u, q, k);
    let cod = tensor_labels(u, q, k + 1);
    let idx = index_of(&cod);
    let mut m = RatMatrix::zeros(cod.len(), dom.len());
    for (j, l) in dom.iter().enumerate() {
        let t = Simplex::new(&l.face).expect("face");
        for &v in u.vertices() {
            if let Some(s) = t.with(v) {
                let key = FamilyLabel { alpha: l.alpha.clone(), face: s.vertices().to_vec() };
                m[(idx[&key], j)] = int(incidence(&s, &t) as i64);
            }
        }
    }
    LinearMapOnFamilies { name: format!("delta(q={q},k={k})"), domain: Axis::Labels(dom), codomain: Axis::Labels(cod), matrix: m }
}

/// δ′ on the second factor: P_q⊗𝒞ᵏ → P_q⊗𝒞ᵏ⁻¹ (k ≥ 1).
pub fn boundary_tensor(u: &Simplex, q: usize, k: usize) -> LinearMapOnFamilies {
    let mut m = coboundary_tensor(u, q, k - 1);
    std::mem::swap(&mut m.domain, &mut m.codomain);
    m.matrix = m.matrix.transpose();
    m.name = format!("boundary(q={q},k={k})");
    m
}

/// Augmentation P_q → P_q⊗𝒞⁰, u ↦ Σ_v u⊗v.
pub fn augmentation(u: &Simplex, q: usize) -> LinearMapOnFamilies {
    let dom: Vec<FamilyLabel> = crate::forms::multi_indices(u.dim() + 1, q as u32)
        .into_iter()
        .map(|alpha| FamilyLabel { alpha, face: Vec::new() })
        .collect();
    let cod = tensor_labels(u, q, 0);
    let idx = index_of(&cod);
    let mut m = RatMatrix::zeros(cod.len(), dom.len());
    for (j, l) in dom.iter().enumerate() {
        for &v in u.vertices() {
            let key = FamilyLabel { alpha: l.alpha.clone(), face: vec![v] };
            m[(idx[&key], j)] = int(1);
        }
    }
    LinearMapOnFamilies { name: format!("augmentation(q={q})"), domain: Axis::Labels(dom), codomain: Axis::Labels(cod), matrix: m }
}

/// τ: P_{r−2}⊗𝒞ᵏ⁺¹ → P_{r−1}⊗𝒞ᵏ, u⊗T ↦ Σ_{i∈T} o(T,T∖i) λᵢu ⊗ T∖i.
pub fn tau_map(u: &Simplex, r: usize, k: usize) -> Result<LinearMapOnFamilies> {
    if r < 2 || k + 1 > u.dim() {
        return Err(Error::InvalidArgument(format!("tau needs r ≥ 2 and k+1 ≤ n (r={r}, k={k})")));
    }
    let dom = tensor_labels(u, r - 2, k + 1);
    let cod = tensor_labels(u, r - 1, k);
    let idx = index_of(&cod);
    let mut m = RatMatrix::zeros(cod.len(), dom.len());
    for (j, l) in dom.iter().enumerate() {
        let t = Simplex::new(&l.face)?;
        for &v in t.vertices() {
            let face = t.without(v).expect("k+1 ≥ 1");
            let mut alpha = l.alpha.clone();
            alpha[u.position(v).expect("vertex of U")] += 1;
            let key = FamilyLabel { alpha, face: face.vertices().to_vec() };
            m[(idx[&key], j)] += int(incidence(&t, &face) as i64);
        }
    }
    Ok(LinearMapOnFamilies { name: format!("tau(r={r},k={k})"), domain: Axis::Labels(dom), codomain: Axis::Labels(cod), matrix: m })
}

fn forms_map(name: String, dom: Vec<FamilyLabel>, forms: &[BaryForm]) -> LinearMapOnFamilies {
    let (m, keys) = coordinate_matrix(forms);
    LinearMapOnFamilies { name, domain: Axis::Labels(dom), codomain: Axis::Coordinates(keys), matrix: m }
}

/// β: P_{r−1}⊗𝒞ᵏ → P⁻ᵣΛᵏ, u⊗T ↦ uλ_T.
pub fn beta_map(u: &Simplex, r: usize, k: usize) -> Result<LinearMapOnFamilies> {
    if r < 1 || k > u.dim() {
        return Err(Error::InvalidArgument(format!("beta needs r ≥ 1 and k ≤ n (r={r}, k={k})")));
    }
    let dom = tensor_labels(u, r - 1, k);
    let forms = dom
        .iter()
        .map(|l| BaryForm::power(u, &l.alpha).wedge(&whitney(u, &Simplex::new(&l.face)?)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(forms_map(format!("beta(r={r},k={k})"), dom, &forms))
}

/// σ: P_q⊗𝒞ᵏ → P_qΛᵏ⁺¹, u⊗T ↦ u dλ_T.
pub fn sigma_map(u: &Simplex, q: usize, k: usize) -> Result<LinearMapOnFamilies> {
    if k + 1 > u.dim() {
        return Err(Error::InvalidArgument(format!("sigma needs k+1 ≤ n (k={k})")));
    }
    let dom = tensor_labels(u, q, k);
    let forms = dom
        .iter()
        .map(|l| BaryForm::power(u, &l.alpha).wedge(&whitney(u, &Simplex::new(&l.face)?)?.d()))
        .collect::<Result<Vec<_>>>()?;
    Ok(forms_map(format!("sigma(q={q},k={k})"), dom, &forms))
}

/// σ′: P_q⊗𝒞ᵏ → P⁻ᵣΛᵏ₀, u⊗T ↦ u μ_T λ_T with q = r − n + k − 1.
pub fn sigma0_map(u: &Simplex, r: usize, k: usize) -> Result<LinearMapOnFamilies> {
    let q = interior_degree(u.dim(), r, k).ok_or_else(|| Error::InvalidArgument("empty target".into()))?;
    if r < 1 || k > u.dim() {
        return Err(Error::InvalidArgument("empty target".into()));
    }
    let dom = tensor_labels(u, q, k);
    let forms = dom
        .iter()
        .map(|l| {
            let t = Simplex::new(&l.face)?;
            BaryForm::power(u, &l.alpha).wedge(&mu(u, &t)?)?.wedge(&whitney(u, &t)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(forms_map(format!("sigma0(r={r},k={k})"), dom, &forms))
}

/// A finite resolution W_m → … → W₀ → V; `stages` runs from the deepest
/// map to the final map onto V.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub name: String,
    pub target_dim: usize,
    pub stages: Vec<LinearMapOnFamilies>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StageReport {
    pub name: String,
    pub domain_dim: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResolutionReport {
    pub name: String,
    pub target_dim: usize,
    pub stages: Vec<StageReport>,
    pub failures: Vec<String>,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// JSON manifest of stage dimensions and ranks.
    pub fn to_manifest(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl Resolution {
    /// Checks that consecutive maps compose to zero, that the deepest map is
    /// injective, that ranks add up at every interior space, and that the
    /// final map has rank dim V.
    pub fn verify(&self) -> ResolutionReport {
        let ranks: Vec<usize> = self.stages.iter().map(|s| s.matrix.rank()).collect();
        let mut failures = Vec::new();
        for (i, w) in self.stages.windows(2).enumerate() {
            if w[0].matrix.nrows() != w[1].matrix.ncols() {
                failures.push(format!("stage {i}: shapes do not chain"));
            } else if !w[1].matrix.mul(&w[0].matrix).is_zero() {
                failures.push(format!("{} ∘ {} is not zero", w[1].name, w[0].name));
            }
        }
        if let Some(first) = self.stages.first() {
            if ranks[0] != first.domain.len() {
                failures.push(format!("{} is not injective: rank {} < {}", first.name, ranks[0], first.domain.len()));
            }
        }
        for i in 1..self.stages.len() {
            let dim = self.stages[i].domain.len();
            if ranks[i] + ranks[i - 1] != dim {
                failures.push(format!(
                    "not exact at the domain of {}: {} + {} != {}",
                    self.stages[i].name,
                    ranks[i],
                    ranks[i - 1],
                    dim
                ));
            }
        }
        match ranks.last() {
            Some(&r) if r == self.target_dim => {}
            Some(&r) => failures.push(format!("final rank {r} != target dimension {}", self.target_dim)),
            None => failures.push("empty resolution".into()),
        }
        let stages = self
            .stages
            .iter()
            .zip(&ranks)
            .map(|(s, &rank)| StageReport { name: s.name.clone(), domain_dim: s.domain.len(), rank })
            .collect();
        ResolutionReport { name: self.name.clone(), target_dim: self.target_dim, stages, failures }
    }
}

/// … → P_{r−3}⊗𝒞ᵏ⁺² →τ P_{r−2}⊗𝒞ᵏ⁺¹ →τ P_{r−1}⊗𝒞ᵏ →β P⁻ᵣΛᵏ.
pub fn resolution_pminus(u: &Simplex, r: usize, k: usize) -> Result<Resolution> {
    let n = u.dim();
    let mut stages = vec![beta_map(u, r, k)?];
    let mut j = 1;
    while r >= j + 1 && k + j <= n {
        stages.push(tau_map(u, r - j + 1, k + j - 1)?);
        j += 1;
    }
    stages.reverse();
    Ok(Resolution { name: format!("Pminus(n={n},r={r},k={k})"), target_dim: dim_pminus(n, r, k), stages })
}

/// 0 → P_q⊗𝒞ⁿ →δ′ … →δ′ P_q⊗𝒞ᵏ →σ′ P⁻ᵣΛᵏ₀.
pub fn resolution_pminus0(u: &Simplex, r: usize, k: usize) -> Result<Resolution> {
    let n = u.dim();
    let q = interior_degree(n, r, k).ok_or_else(|| Error::InvalidArgument("empty target".into()))?;
    let mut stages = vec![sigma0_map(u, r, k)?];
    for j in k + 1..=n {
        stages.push(boundary_tensor(u, q, j));
    }
    stages.reverse();
    Ok(Resolution { name: format!("Pminus0(n={n},r={r},k={k})"), target_dim: dim_pminus0(n, r, k), stages })
}

/// 0 → P_q →aug P_q⊗𝒞⁰ →δ … →δ P_q⊗𝒞ᵏ →σ P_qΛᵏ⁺¹.
pub fn resolution_diff(u: &Simplex, q: usize, k: usize) -> Result<Resolution> {
    let n = u.dim();
    let mut stages = vec![sigma_map(u, q, k)?];
    for j in (0..k).rev() {
        stages.push(coboundary_tensor(u, q, j));
    }
    stages.push(augmentation(u, q));
    stages.reverse();
    Ok(Resolution { name: format!("Diff(n={n},q={q},k={k})"), target_dim: dim_p(n, q, k + 1), stages })
}

#[derive(Clone, Debug)]
pub struct Redundancy {
    /// Columns form a basis of ker ε.
    pub b: RatMatrix,
    /// Chosen so that C·B is invertible; C = Bᵀ.
    pub c: RatMatrix,
    /// Pivot columns of ε, a basis of its image.
    pub basis_selection: Vec<usize>,
}

/// Kernel basis, complement selector and basis selection for a spanning map ε
/// onto a space of dimension `target_dim`.
pub fn eliminate_redundancy(eps: &RatMatrix, target_dim: usize) -> Result<Redundancy> {
    let (_, pivots) = eps.rref();
    if pivots.len() < target_dim {
        return Err(Error::DoesNotSpan { rank: pivots.len(), expected: target_dim });
    }
    let kernel = eps.kernel();
    let b = RatMatrix::from_cols(eps.ncols(), &kernel);
    let c = b.transpose();
    Ok(Redundancy { b, c, basis_selection: pivots })
}

#[derive(Clone, Debug)]
pub struct GeometricDecomposition {
    /// One column per (face V, basis element of P⁻ᵣΛᵏ₀(V)), faces by dimension.
    pub columns: Vec<(Simplex, BaryForm)>,
    /// One row per canonical dof, faces in the same order.
    pub rows: Vec<DofLabel>,
    /// Canonical dofs of the extended interior elements: block lower triangular.
    pub matrix: RatMatrix,
    /// Block size per face.
    pub blocks: Vec<(Simplex, usize)>,
}

impl GeometricDecomposition {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Restriction of the global element with the given coefficients to a cell
    /// (or any face) K, as a form on K.
    pub fn restrict(&self, coeffs: &[Rational], cell: &Simplex) -> Result<BaryForm> {
        let k = self.columns.first().map_or(0, |c| c.1.degree());
        let mut out = BaryForm::zero(cell, k);
        for ((v, f), c) in self.columns.iter().zip(coeffs) {
            if v.is_face_of(cell) {
                out.axpy(c, &f.embed(cell)?)?;
            }
        }
        Ok(out)
    }
}

/// Assembles ⊕_V P⁻ᵣΛᵏ₀(V) → P⁻ᵣΛᵏ(𝒯): interior elements of every face V
/// are extended by their barycentric expression (which vanishes on faces not
/// containing V) and tested against the canonical dofs of every face.
pub fn geometric_decomposition(complex: &SimplicialComplex, r: usize, k: usize) -> Result<GeometricDecomposition> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let faces: Vec<Simplex> = (k..=complex.dim()).flat_map(|m| complex.simplices(m).to_vec()).collect();
    let mut columns = Vec::new();
    let mut blocks = Vec::new();
    let mut rows = Vec::new();
    let mut tests = Vec::new();
    for v in &faces {
        let basis = bubble_basis(v, r, k)?;
        blocks.push((v.clone(), basis.len()));
        columns.extend(basis.into_iter().map(|b| (v.clone(), b)));
        for (i, t) in canonical_test_forms(v, r, k)?.into_iter().enumerate() {
            rows.push(DofLabel { face: v.clone(), index: i });
            tests.push(t);
        }
    }
    if rows.len() != columns.len() {
        return Err(Error::Singular(format!("{} dofs for {} interior basis elements", rows.len(), columns.len())));
    }
    let mut m = RatMatrix::zeros(rows.len(), columns.len());
    for (i, (label, test)) in rows.iter().zip(&tests).enumerate() {
        for (j, (v, f)) in columns.iter().enumerate() {
            if v.is_face_of(&label.face) {
                m[(i, j)] = test.wedge(&f.embed(&label.face)?)?.integrate()?;
            }
        }
    }
    if m.rank() < m.nrows() {
        return Err(Error::Singular("canonical dofs are not unisolvent on the decomposition".into()));
    }
    Ok(GeometricDecomposition { columns, rows, matrix: m, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Zero;

    #[test]
    fn sigma_examples() {
        let tri = Simplex::standard(2);
        let s = sigma_map(&tri, 0, 0).unwrap();
        assert_eq!(s.matrix.rank(), 2);
        let ker = s.matrix.kernel();
        assert_eq!(ker.len(), 1);
        assert!(ker[0].iter().all(|x| *x == ker[0][0]));
        assert_eq!(sigma_map(&tri, 1, 1).unwrap().matrix.rank(), 3);
        let d = coboundary_tensor(&tri, 1, 0);
        assert!(sigma_map(&tri, 1, 1).unwrap().matrix.mul(&d.matrix).is_zero());
    }

    #[test]
    fn sigma0_examples() {
        let tri = Simplex::standard(2);
        let s = sigma0_map(&tri, 2, 1).unwrap();
        assert_eq!((s.matrix.ncols(), s.matrix.rank()), (3, 2));
        let tet = Simplex::standard(3);
        let s = sigma0_map(&tet, 3, 1).unwrap();
        assert!(s.matrix.mul(&boundary_tensor(&tet, 0, 2).matrix).is_zero());
        assert!(sigma0_map(&tri, 1, 0).is_err());
    }

    #[test]
    fn beta_examples() {
        let tri = Simplex::standard(2);
        let b = beta_map(&tri, 2, 1).unwrap();
        assert_eq!((b.matrix.ncols(), b.matrix.rank()), (9, 8));
        let tet = Simplex::standard(3);
        let b = beta_map(&tet, 3, 1).unwrap();
        assert_eq!((b.matrix.ncols(), b.matrix.rank()), (60, 45));
        for k in 0..=2 {
            let b = beta_map(&tet, 3, k).unwrap();
            let t = tau_map(&tet, 3, k).unwrap();
            assert!(b.matrix.mul(&t.matrix).is_zero());
        }
        assert!(tau_map(&tet, 1, 0).is_err());
    }

    #[test]
    fn resolutions_small() {
        let tri = Simplex::standard(2);
        let rep = resolution_pminus(&tri, 3, 1).unwrap().verify();
        assert!(rep.passed(), "{:?}", rep.failures);
        let dims: Vec<usize> = rep.stages.iter().map(|s| s.domain_dim).collect();
        assert_eq!(dims, vec![3, 18]);
        assert!(rep.to_manifest().contains("\"target_dim\": 15"));
        assert!(resolution_pminus0(&tri, 2, 1).unwrap().verify().passed());
        assert!(resolution_diff(&tri, 1, 1).unwrap().verify().passed());
    }

    #[test]
    fn redundancy_examples() {
        let tri = Simplex::standard(2);
        let b = beta_map(&tri, 2, 1).unwrap();
        let red = eliminate_redundancy(&b.matrix, 8).unwrap();
        assert_eq!(red.b.ncols(), 1);
        assert!(b.matrix.mul(&red.b).is_zero());
        assert_eq!(red.c.mul(&red.b).rank(), 1);
        assert_eq!(red.basis_selection.len(), 8);

        let id = RatMatrix::identity(3);
        let red = eliminate_redundancy(&id, 3).unwrap();
        assert_eq!(red.b.ncols(), 0);
        assert_eq!(red.basis_selection, vec![0, 1, 2]);

        // eᵢ = δᵢ − ¼𝟙 spans the hyperplane Σxᵢ = 0 with one relation.
        let mut eps = RatMatrix::identity(4);
        for i in 0..4 {
            for j in 0..4 {
                eps[(i, j)] -= rat(1, 4);
            }
        }
        let red = eliminate_redundancy(&eps, 3).unwrap();
        assert_eq!(red.b.ncols(), 1);
        assert!((0..4).all(|i| red.b[(i, 0)] == red.b[(0, 0)] && !red.b[(i, 0)].is_zero()));
        assert!(matches!(eliminate_redundancy(&eps, 4), Err(Error::DoesNotSpan { rank: 3, expected: 4 })));
    }

    #[test]
    fn geometric_decomposition_examples() {
        let tri = SimplicialComplex::of_simplex(&Simplex::standard(2));
        let g = geometric_decomposition(&tri, 1, 1).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.matrix, RatMatrix::identity(3));
        let g = geometric_decomposition(&tri, 2, 1).unwrap();
        let sizes: Vec<usize> = g.blocks.iter().map(|b| b.1).collect();
        assert_eq!(sizes, vec![2, 2, 2, 2]);
        let two = SimplicialComplex::from_simplices(&[
            Simplex::new(&[0, 1, 2]).unwrap(),
            Simplex::new(&[1, 2, 3]).unwrap(),
        ]);
        let g = geometric_decomposition(&two, 2, 1).unwrap();
        assert_eq!(g.dim(), 5 * 2 + 2 * 2);
        assert_eq!(g.matrix.rank(), 14);
    }
}
