//! Degrees of freedom: canonical (moments on faces), harmonic (metric
//! dependent) and small-simplex integrals, with unisolvence checks and
//! interpolation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::complex::{combinations, incidence, opposite, Simplex};
use crate::error::{Error, Result};
use crate::forms::{coordinate_matrix, mask_of, multi_factorial, multi_indices, weight, BaryForm, MultiIndex};
use crate::linalg::RatMatrix;
use crate::metric::EdgeMetric;
use crate::rational::{binomial, factorial, format_rational, int, Rational};
use crate::whitney::{bubble_basis, dim_pminus, mu, spanning_family, tensor_labels, whitney, SpaceTag};

/// A dof is attached to a face and numbered within that face.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DofLabel {
    pub face: Simplex,
    pub index: usize,
}

/// Dof functionals applied to trial functions. Row i of the true matrix is
/// `matrix` row i times sqrt(row_scale_sq[i]); the factor is kept symbolic.
#[derive(Clone, Debug)]
pub struct DofMatrix {
    pub rows: Vec<DofLabel>,
    pub row_scale_sq: Vec<Rational>,
    pub matrix: RatMatrix,
}

impl DofMatrix {
    pub fn unscaled(rows: Vec<DofLabel>, matrix: RatMatrix) -> Self {
        let row_scale_sq = vec![Rational::one(); rows.len()];
        DofMatrix { rows, row_scale_sq, matrix }
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Square and invertible. Row scale factors are positive, so they do not
    /// affect invertibility.
    pub fn is_unisolvent(&self) -> bool {
        self.nrows() == self.ncols() && self.rank() == self.ncols()
    }

    /// CSV: face, index, squared row scale, then the entries as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.rows.iter().enumerate() {
            let vs: Vec<String> = l.face.vertices().iter().map(|v| v.to_string()).collect();
            let row: Vec<String> = self.matrix.row(i).iter().map(format_rational).collect();
            out.push_str(&format!("{},{},{},{}\n", vs.join(" "), l.index, format_rational(&self.row_scale_sq[i]), row.join(",")));
        }
        out
    }
}

/// Faces of U of dimension ≥ k, by dimension then lexicographically.
pub fn faces_from(u: &Simplex, k: usize) -> Vec<Simplex> {
    (k..=u.dim()).flat_map(|m| u.faces(m)).collect()
}

/// Test forms on a face T (dim m) for the canonical dofs of P⁻ᵣΛᵏ:
/// λ^α dλ_J with |α| = r − m + k − 1 and J ⊆ {1..m}, |J| = m − k.
pub fn canonical_test_forms(t: &Simplex, r: usize, k: usize) -> Result<Vec<BaryForm>> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let m = t.dim();
    if k > m {
        return Ok(Vec::new());
    }
    let q = r as i64 + k as i64 - m as i64 - 1;
    if q < 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for alpha in multi_indices(m + 1, q as u32) {
        for js in combinations(m, m - k) {
            let js: Vec<usize> = js.into_iter().map(|j| j + 1).collect();
            out.push(BaryForm::monomial(t, &alpha, &js, int(1))?);
        }
    }
    Ok(out)
}

/// The canonical dofs u ↦ ∫_T v ∧ u|_T on all faces of U.
#[derive(Clone, Debug)]
pub struct CanonicalDofs {
    pub u: Simplex,
    pub r: usize,
    pub k: usize,
    faces: Vec<(Simplex, Vec<BaryForm>)>,
}

impl CanonicalDofs {
    pub fn new(u: &Simplex, r: usize, k: usize) -> Result<Self> {
        let faces = faces_from(u, k)
            .into_iter()
            .map(|t| Ok((t.clone(), canonical_test_forms(&t, r, k)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CanonicalDofs { u: u.clone(), r, k, faces })
    }

    pub fn labels(&self) -> Vec<DofLabel> {
        self.faces
            .iter()
            .flat_map(|(t, tests)| (0..tests.len()).map(move |i| DofLabel { face: t.clone(), index: i }))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.faces.iter().map(|f| f.1.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, form: &BaryForm) -> Result<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.len());
        for (t, tests) in &self.faces {
            if tests.is_empty() {
                continue;
            }
            let p = form.pullback_to_face(t)?;
            for v in tests {
                out.push(v.wedge(&p)?.integrate()?);
            }
        }
        Ok(out)
    }

    pub fn matrix(&self, trial: &[BaryForm]) -> Result<DofMatrix> {
        let cols = trial.iter().map(|f| self.apply(f)).collect::<Result<Vec<_>>>()?;
        Ok(DofMatrix::unscaled(self.labels(), RatMatrix::from_cols(self.len(), &cols)))
    }
}

/// Canonical dofs applied to the λ^α λ_T spanning family of P⁻ᵣΛᵏ(U).
pub fn canonical_dofs(u: &Simplex, r: usize, k: usize) -> Result<DofMatrix> {
    let fam = spanning_family(u, r, k, SpaceTag::PminusLk)?;
    CanonicalDofs::new(u, r, k)?.matrix(&fam.generators)
}

/// Pairing of the face-T test space against a basis of P⁻ᵣΛᵏ₀(T).
pub fn canonical_pairing_block(t: &Simplex, r: usize, k: usize) -> Result<RatMatrix> {
    let tests = canonical_test_forms(t, r, k)?;
    let bubbles = bubble_basis(t, r, k)?;
    let mut m = RatMatrix::zeros(tests.len(), bubbles.len());
    for (i, v) in tests.iter().enumerate() {
        for (j, b) in bubbles.iter().enumerate() {
            m[(i, j)] = v.wedge(b)?.integrate()?;
        }
    }
    Ok(m)
}

fn top_mask(n: usize) -> u32 {
    mask_of(&(1..=n).collect::<Vec<_>>())
}

/// D(x) indexed by k-faces: D_TS(x) λ_U = C(n,k) s(T) μ_T λ_T ∧ dλ_Ŝ at x.
///
/// The result is symmetric and positive semidefinite. Its off-diagonal row
/// sums are (n−k)·D_TT, so it is weakly diagonally dominant only for k ≥ n−1.
pub fn d_matrix(u: &Simplex, k: usize, x: &[Rational]) -> Result<RatMatrix> {
    let n = u.dim();
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds dimension {n}")));
    }
    if x.len() != n + 1 || x.iter().cloned().sum::<Rational>() != Rational::one() {
        return Err(Error::InvalidArgument("barycentric coordinates must sum to 1".into()));
    }
    let faces = u.faces(k);
    if k == n {
        return Ok(RatMatrix::identity(1));
    }
    let top = top_mask(n);
    let lu = whitney(u, u)?.evaluate(x)?.remove(&top).unwrap_or_else(Rational::zero);
    let cnk = int(binomial(n, k) as i64);
    let dhat = faces
        .iter()
        .map(|s| Ok(whitney(u, &opposite(u, s)?.0)?.d()))
        .collect::<Result<Vec<_>>>()?;
    let mut m = RatMatrix::zeros(faces.len(), faces.len());
    for (i, t) in faces.iter().enumerate() {
        let (_, st) = opposite(u, t)?;
        let a = mu(u, t)?.wedge(&whitney(u, t)?)?;
        for (j, ds) in dhat.iter().enumerate() {
            let c = a.wedge(ds)?.evaluate(x)?.remove(&top).unwrap_or_else(Rational::zero);
            let v = &cnk * c / &lu;
            m[(i, j)] = if st < 0 { -v } else { v };
        }
    }
    Ok(m)
}

/// Symmetric, nonnegative diagonal and D_ii ≥ Σ_{j≠i} |D_ij| for every row.
pub fn is_symmetric_weakly_diagonally_dominant(m: &RatMatrix) -> bool {
    if *m != m.transpose() {
        return false;
    }
    (0..m.nrows()).all(|i| {
        let off: Rational = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
        !m[(i, i)].is_negative() && m[(i, i)] >= off
    })
}

/// Lattice points α/r, α ∈ Σᵣ[n].
pub fn principal_lattice(u: &Simplex, r: usize) -> Vec<Vec<Rational>> {
    let rr = int(r as i64);
    multi_indices(u.dim() + 1, r as u32)
        .into_iter()
        .map(|a| a.iter().map(|&x| int(x as i64) / &rr).collect())
        .collect()
}

/// The copy of a k-face T of U scaled by 1/r and placed at lattice offset α′:
/// vertices (α′ + e_t)/r for t ∈ T. Orientation is inherited from T.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallSimplex {
    pub parent: Simplex,
    pub offset: MultiIndex,
    pub vertices: Vec<Vec<Rational>>,
}

impl SmallSimplex {
    /// Smallest face of U containing this small simplex.
    pub fn attached_face(&self, u: &Simplex) -> Simplex {
        let mut vs: BTreeSet<usize> = self.parent.vertices().iter().copied().collect();
        for (i, &a) in self.offset.iter().enumerate() {
            if a > 0 {
                vs.insert(u.vertices()[i]);
            }
        }
        Simplex::new(&vs.into_iter().collect::<Vec<_>>()).expect("nonempty")
    }

    /// ∫ of a form on U over this small simplex, via affine pullback.
    pub fn integrate(&self, form: &BaryForm) -> Result<Rational> {
        let target = Simplex::standard(self.parent.dim()).with_sign(self.parent.sign());
        form.pullback_affine(&self.vertices, &target)?.integrate()
    }
}

/// Small k-simplices of order r, ordered by offset α′ ∈ Σ_{r−1}[n] then by
/// k-face. Duplicates (small vertices shared between copies) are kept.
pub fn small_simplices(u: &Simplex, r: usize, k: usize) -> Vec<SmallSimplex> {
    if r == 0 || k > u.dim() {
        return Vec::new();
    }
    let rr = int(r as i64);
    tensor_labels(u, r - 1, k)
        .into_iter()
        .map(|l| {
            let parent = Simplex::new(&l.face).expect("face");
            let vertices = parent
                .vertices()
                .iter()
                .map(|&t| {
                    let p = u.position(t).expect("vertex of U");
                    l.alpha.iter().enumerate().map(|(i, &a)| int((a + u32::from(i == p)) as i64) / &rr).collect()
                })
                .collect();
            SmallSimplex { parent, offset: l.alpha, vertices }
        })
        .collect()
}

/// ∫_{T′} λ_T = det[λ_{tᵢ}(x′ⱼ)] (times both orientation signs).
pub fn whitney_small_integral(u: &Simplex, t: &Simplex, small: &SmallSimplex) -> Result<Rational> {
    let local = t.local_indices(u)?;
    if local.len() != small.vertices.len() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let m = RatMatrix::from_rows(local.iter().map(|&i| small.vertices.iter().map(|x| x[i].clone()).collect()).collect());
    let d = m.det();
    Ok(if (t.sign() < 0) != (small.parent.sign() < 0) { -d } else { d })
}

type Poly = BTreeMap<MultiIndex, Rational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let z: MultiIndex = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let e = out.entry(z).or_insert_with(Rational::zero);
            *e += cx * cy;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// ∫_{T′} λ^α λ_T: substitute λᵢ = Σⱼ Mᵢⱼ λ′ⱼ, expand λ^α = Σ c_β λ′^β and
/// use ∫_{T′} λ′^β λ′_{T′} = β! k!/(|β|+k)!, times ∫_{T′} λ_T.
pub fn small_dof_entry(u: &Simplex, alpha: &[u32], t: &Simplex, small: &SmallSimplex) -> Result<Rational> {
    let det = whitney_small_integral(u, t, small)?;
    if det.is_zero() {
        return Ok(det);
    }
    let kp = small.vertices.len();
    let k = kp - 1;
    let mut poly: Poly = Poly::from([(vec![0; kp], Rational::one())]);
    for (i, &a) in alpha.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let lin: Poly = (0..kp)
            .filter(|&j| !small.vertices[j][i].is_zero())
            .map(|j| {
                let mut e = vec![0; kp];
                e[j] = 1;
                (e, small.vertices[j][i].clone())
            })
            .collect();
        for _ in 0..a {
            poly = poly_mul(&poly, &lin);
        }
    }
    let kf = factorial(k);
    let total: Rational = poly
        .iter()
        .map(|(b, c)| c * Rational::new(multi_factorial(b) * &kf, factorial(weight(b) as usize + k)))
        .sum();
    Ok(total * det)
}

/// Small-simplex integrals of the λ^α λ_T family of P⁻ᵣΛᵏ(U); rows are the
/// small k-simplices in [`small_simplices`] order.
pub fn small_dof_matrix(u: &Simplex, r: usize, k: usize) -> Result<DofMatrix> {
    let smalls = small_simplices(u, r, k);
    let cols = tensor_labels(u, r - 1, k);
    let mut m = RatMatrix::zeros(smalls.len(), cols.len());
    for (i, s) in smalls.iter().enumerate() {
        for (j, l) in cols.iter().enumerate() {
            m[(i, j)] = small_dof_entry(u, &l.alpha, &Simplex::new(&l.face)?, s)?;
        }
    }
    let rows = smalls.iter().enumerate().map(|(i, s)| DofLabel { face: s.parent.clone(), index: i }).collect();
    Ok(DofMatrix::unscaled(rows, m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumetricCheck {
    /// ∫_{T′} λ_T.
    pub integral: Rational,
    /// vol²((U∖T) ∪ T′) / vol²(U) from Cayley–Menger.
    pub ratio_sq: Rational,
    /// integral² = ratio_sq, exactly.
    pub consistent: bool,
}

/// Compares |∫_{T′} λ_T| with the volume ratio of the simplex obtained from
/// U by replacing the vertices of T with those of T′.
pub fn volumetric_check(u: &Simplex, t: &Simplex, small: &SmallSimplex, metric: &EdgeMetric) -> Result<VolumetricCheck> {
    let integral = whitney_small_integral(u, t, small)?;
    let n = u.dim();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for (i, &v) in u.vertices().iter().enumerate() {
        if !t.contains_vertex(v) {
            points.push((0..=n).map(|j| if i == j { int(1) } else { int(0) }).collect());
        }
    }
    points.extend(small.vertices.iter().cloned());
    let ratio_sq = metric.points_volume_sq(&points) / metric.volume_sq();
    let consistent = &integral * &integral == ratio_sq;
    Ok(VolumetricCheck { integral, ratio_sq, consistent })
}

#[derive(Clone, Debug)]
pub enum HarmonicKind {
    /// u ↦ a(u, v).
    Inner(BaryForm),
    /// u ↦ a(du, w).
    InnerD(BaryForm),
    /// u ↦ ∫_T u (only when k = dim T).
    Integral,
}

/// Harmonic dofs on every face T of U: a(·, v) for v ∈ dE^{k−1}₀(T), plus
/// ∫_T when k = dim T, else a(d·, w) for w ∈ dEᵏ₀(T); a is the L² product of
/// the restricted metric.
#[derive(Clone, Debug)]
pub struct HarmonicDofs {
    pub u: Simplex,
    pub r: usize,
    pub k: usize,
    rows: Vec<(DofLabel, HarmonicKind)>,
    face_metrics: HashMap<Simplex, EdgeMetric>,
}

fn independent_derivatives(forms: Vec<BaryForm>) -> Vec<BaryForm> {
    let ds: Vec<BaryForm> = forms.iter().map(BaryForm::d).collect();
    if ds.is_empty() {
        return ds;
    }
    let (m, _) = coordinate_matrix(&ds);
    let (_, pivots) = m.rref();
    pivots.into_iter().map(|j| ds[j].clone()).collect()
}

impl HarmonicDofs {
    pub fn new(u: &Simplex, r: usize, k: usize, metric: &EdgeMetric) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        if metric.simplex().vertices() != u.vertices() {
            return Err(Error::InvalidArgument("metric lives on a different simplex".into()));
        }
        let mut rows = Vec::new();
        let mut face_metrics = HashMap::new();
        for t in faces_from(u, k) {
            let m = t.dim();
            let mut kinds = Vec::new();
            if k >= 1 {
                kinds.extend(independent_derivatives(bubble_basis(&t, r, k - 1)?).into_iter().map(HarmonicKind::Inner));
            }
            if k == m {
                kinds.push(HarmonicKind::Integral);
            } else {
                kinds.extend(independent_derivatives(bubble_basis(&t, r, k)?).into_iter().map(HarmonicKind::InnerD));
            }
            face_metrics.insert(t.clone(), metric.restrict(&t)?);
            rows.extend(kinds.into_iter().enumerate().map(|(i, kind)| (DofLabel { face: t.clone(), index: i }, kind)));
        }
        Ok(HarmonicDofs { u: u.clone(), r, k, rows, face_metrics })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Vec<DofLabel> {
        self.rows.iter().map(|r| r.0.clone()).collect()
    }

    /// vol²(T) for metric rows, 1 for integral rows.
    pub fn row_scale_sq(&self) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|(l, kind)| match kind {
                HarmonicKind::Integral => Rational::one(),
                _ => self.face_metrics[&l.face].volume_sq(),
            })
            .collect()
    }

    /// Rational parts of the dof values (see [`row_scale_sq`](Self::row_scale_sq)).
    pub fn apply(&self, form: &BaryForm) -> Result<Vec<Rational>> {
        let mut cache: HashMap<&Simplex, BaryForm> = HashMap::new();
        let mut out = Vec::with_capacity(self.rows.len());
        for (l, kind) in &self.rows {
            if !cache.contains_key(&l.face) {
                cache.insert(&l.face, form.pullback_to_face(&l.face)?);
            }
            let p = &cache[&l.face];
            let metric = &self.face_metrics[&l.face];
            out.push(match kind {
                HarmonicKind::Inner(v) => metric.inner_product(p, v)?.coeff,
                HarmonicKind::InnerD(w) => metric.inner_product(&p.d(), w)?.coeff,
                HarmonicKind::Integral => p.integrate()?,
            });
        }
        Ok(out)
    }

    pub fn matrix(&self, trial: &[BaryForm]) -> Result<DofMatrix> {
        let cols = trial.iter().map(|f| self.apply(f)).collect::<Result<Vec<_>>>()?;
        Ok(DofMatrix { rows: self.labels(), row_scale_sq: self.row_scale_sq(), matrix: RatMatrix::from_cols(self.len(), &cols) })
    }
}

/// Harmonic dofs applied to the λ^α λ_T spanning family of P⁻ᵣΛᵏ(U).
pub fn harmonic_dofs(u: &Simplex, r: usize, k: usize, metric: &EdgeMetric) -> Result<DofMatrix> {
    let fam = spanning_family(u, r, k, SpaceTag::PminusLk)?;
    HarmonicDofs::new(u, r, k, metric)?.matrix(&fam.generators)
}

/// Matrix of ℓ ↦ ℓ∘d on small-simplex dofs, from degree k+1 to degree k:
/// entry (T′, S′) is o(S′, T′) when T′ is a facet of S′ with the same offset.
pub fn small_boundary_matrix(u: &Simplex, r: usize, k: usize) -> RatMatrix {
    let rows = small_simplices(u, r, k);
    let cols = small_simplices(u, r, k + 1);
    let index: HashMap<(&MultiIndex, &[usize]), usize> =
        rows.iter().enumerate().map(|(i, s)| ((&s.offset, s.parent.vertices()), i)).collect();
    let mut m = RatMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for &v in s.parent.vertices() {
            let face = s.parent.without(v).expect("dimension at least one");
            let i = index[&(&s.offset, face.vertices())];
            m[(i, j)] = int(incidence(&s.parent, &face) as i64);
        }
    }
    m
}

/// Chain-compatible unisolvent selection from overdetermining dofs.
///
/// `dofs[k]` pairs the free dof space Bᵏ (rows) with a basis of Eᵏ (columns);
/// `dstar[k]` (k < n) is the matrix of ℓ ↦ ℓ∘d from Bᵏ⁺¹ to Bᵏ. With Aᵏ the
/// functionals vanishing on Eᵏ, the selection is built from the top degree down:
/// Selⁿ = (Aⁿ)^⊥ and Selᵏ = ∂Selᵏ⁺¹ ⊕ (Aᵏ + ∂Selᵏ⁺¹)^⊥, orthogonality taken
/// in the inner product making the given rows orthonormal. Each Selᵏ maps
/// isomorphically onto (Eᵏ)* and ∂Selᵏ⁺¹ ⊆ Selᵏ, so the resulting
/// interpolators commute with d. Returns an RREF basis of each Selᵏ as rows.
pub fn unisolvent_subset(dofs: &[DofMatrix], dstar: &[RatMatrix]) -> Result<Vec<RatMatrix>> {
    let top = dofs.len().checked_sub(1).ok_or_else(|| Error::InvalidArgument("no dof systems given".into()))?;
    if dstar.len() < top {
        return Err(Error::InvalidArgument("one d* matrix per degree below the top is required".into()));
    }
    let mut out: Vec<RatMatrix> = vec![RatMatrix::zeros(0, 0); top + 1];
    for k in (0..=top).rev() {
        let m = &dofs[k].matrix;
        if m.rank() < m.ncols() {
            return Err(Error::InvalidArgument(format!("not overdetermining in degree {k}")));
        }
        let nrows = m.nrows();
        let mut pushed: Vec<Vec<Rational>> = Vec::new();
        if k < top {
            let d = &dstar[k];
            let sel = &out[k + 1];
            for i in 0..sel.nrows() {
                pushed.push(d.mul_vec(sel.row(i)));
            }
        }
        let mut avoid = m.left_kernel();
        avoid.extend(pushed.iter().cloned());
        let complement = if avoid.is_empty() {
            (0..nrows).map(|i| (0..nrows).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect()
        } else {
            RatMatrix::from_rows(avoid).kernel()
        };
        let mut rows = pushed;
        rows.extend(complement);
        let sel = if rows.is_empty() { RatMatrix::zeros(0, nrows) } else { RatMatrix::from_rows(rows).row_space() };
        if sel.nrows() != m.ncols() || sel.mul(m).rank() != m.ncols() {
            return Err(Error::Verification(format!("selection in degree {k} is not unisolvent")));
        }
        out[k] = sel;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SubsetSelection {
    pub k: usize,
    /// Rows are the selected functionals as combinations of small-simplex integrals.
    pub selection: RatMatrix,
    /// For each row, the smallest face of U carrying all small simplices it uses.
    pub carriers: Vec<Simplex>,
}

/// Column indices of the pivot generators of the λ^α λ_T family.
fn pminus_pivots(u: &Simplex, r: usize, k: usize) -> Result<Vec<usize>> {
    let fam = spanning_family(u, r, k, SpaceTag::PminusLk)?;
    Ok(coordinate_matrix(&fam.generators).0.rref().1)
}

/// Unisolvent, commuting subsets of the small-simplex dofs for all degrees.
pub fn small_dof_subset(u: &Simplex, r: usize) -> Result<Vec<SubsetSelection>> {
    let n = u.dim();
    let mut dofs = Vec::new();
    let mut dstar = Vec::new();
    for k in 0..=n {
        let full = small_dof_matrix(u, r, k)?;
        let piv = pminus_pivots(u, r, k)?;
        dofs.push(DofMatrix::unscaled(full.rows.clone(), full.matrix.select_cols(&piv)));
        if k < n {
            dstar.push(small_boundary_matrix(u, r, k));
        }
    }
    let sel = unisolvent_subset(&dofs, &dstar)?;
    Ok(sel
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let smalls = small_simplices(u, r, k);
            let carriers = (0..s.nrows())
                .map(|i| {
                    let mut vs = BTreeSet::new();
                    for (j, c) in s.row(i).iter().enumerate() {
                        if !c.is_zero() {
                            vs.extend(smalls[j].attached_face(u).vertices().iter().copied());
                        }
                    }
                    Simplex::new(&vs.into_iter().collect::<Vec<_>>()).expect("nonzero row")
                })
                .collect();
            SubsetSelection { k, selection: s, carriers }
        })
        .collect())
}

/// A dof system that can be applied to arbitrary polynomial forms.
#[derive(Clone, Debug)]
pub enum DofSystem {
    Canonical(CanonicalDofs),
    Harmonic(HarmonicDofs),
    SmallSubset { smalls: Vec<SmallSimplex>, selection: RatMatrix },
}

impl DofSystem {
    pub fn apply(&self, form: &BaryForm) -> Result<Vec<Rational>> {
        match self {
            DofSystem::Canonical(c) => c.apply(form),
            DofSystem::Harmonic(h) => h.apply(form),
            DofSystem::SmallSubset { smalls, selection } => {
                let values = smalls.iter().map(|s| s.integrate(form)).collect::<Result<Vec<_>>>()?;
                Ok(selection.mul_vec(&values))
            }
        }
    }
}

/// Interpolation onto span(basis) matching a unisolvent dof system.
#[derive(Clone, Debug)]
pub struct Interpolator {
    basis: Vec<BaryForm>,
    system: DofSystem,
    inverse: RatMatrix,
}

impl Interpolator {
    pub fn new(basis: Vec<BaryForm>, system: DofSystem) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidArgument("empty trial basis".into()));
        }
        let cols = basis.iter().map(|f| system.apply(f)).collect::<Result<Vec<_>>>()?;
        let phi = RatMatrix::from_cols(cols.first().map_or(0, Vec::len), &cols);
        if phi.nrows() != phi.ncols() {
            return Err(Error::Singular(format!("{} dofs for {} trial functions", phi.nrows(), phi.ncols())));
        }
        let inverse = phi.inverse().map_err(|_| Error::Singular("dof system is not unisolvent".into()))?;
        Ok(Interpolator { basis, system, inverse })
    }

    /// Canonical dofs on P⁻ᵣΛᵏ(U).
    pub fn canonical(u: &Simplex, r: usize, k: usize) -> Result<Self> {
        Self::new(crate::whitney::pminus_basis(u, r, k)?, DofSystem::Canonical(CanonicalDofs::new(u, r, k)?))
    }

    /// Harmonic dofs on P⁻ᵣΛᵏ(U).
    pub fn harmonic(u: &Simplex, r: usize, k: usize, metric: &EdgeMetric) -> Result<Self> {
        Self::new(crate::whitney::pminus_basis(u, r, k)?, DofSystem::Harmonic(HarmonicDofs::new(u, r, k, metric)?))
    }

    /// Selected small-simplex dofs on P⁻ᵣΛᵏ(U).
    pub fn small_subset(u: &Simplex, r: usize, k: usize, selection: &RatMatrix) -> Result<Self> {
        let system = DofSystem::SmallSubset { smalls: small_simplices(u, r, k), selection: selection.clone() };
        Self::new(crate::whitney::pminus_basis(u, r, k)?, system)
    }

    pub fn basis(&self) -> &[BaryForm] {
        &self.basis
    }

    pub fn coefficients(&self, form: &BaryForm) -> Result<Vec<Rational>> {
        Ok(self.inverse.mul_vec(&self.system.apply(form)?))
    }

    pub fn interpolate(&self, form: &BaryForm) -> Result<BaryForm> {
        let c = self.coefficients(form)?;
        BaryForm::combination(form.ambient(), form.degree(), &c, &self.basis)
    }
}

/// The unique element of the interpolator's trial space with the same dofs as `u`.
pub fn interpolate(u: &BaryForm, interp: &Interpolator) -> Result<BaryForm> {
    interp.interpolate(u)
}

/// Total canonical dof count Σ_T dim of the face-T test space.
pub fn canonical_dof_count(u: &Simplex, r: usize, k: usize) -> Result<usize> {
    Ok(CanonicalDofs::new(u, r, k)?.len())
}

/// Expected count dim P⁻ᵣΛᵏ(U).
pub fn expected_dof_count(u: &Simplex, r: usize, k: usize) -> usize {
    dim_pminus(u.dim(), r, k)
}
