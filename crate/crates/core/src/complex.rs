//! Oriented simplices, simplicial complexes and cochains.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{int, Rational};

/// A simplex stored by its ascending vertex ids plus an orientation sign
/// relative to that ascending enumeration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<usize>,
    sign: i8,
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}{:?}", self.vertices)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}{{{}}}", ids.join(","))
    }
}

impl Simplex {
    /// Positively oriented simplex on the given vertex set.
    pub fn new(vertices: &[usize]) -> Result<Self> {
        Self::from_enumeration(vertices)
    }

    /// Simplex oriented by the given vertex enumeration (any order).
    pub fn from_enumeration(enumeration: &[usize]) -> Result<Self> {
        if enumeration.is_empty() {
            return Err(Error::InvalidArgument("simplex needs at least one vertex".into()));
        }
        let (sorted, sign) = sort_with_sign(enumeration);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated vertex in {enumeration:?}")));
        }
        Ok(Simplex { vertices: sorted, sign })
    }

    /// The standard n-simplex on vertices 0..=n.
    pub fn standard(n: usize) -> Self {
        Simplex { vertices: (0..=n).collect(), sign: 1 }
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = if sign < 0 { -1 } else { 1 };
        self
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices.iter().all(|v| other.contains_vertex(*v))
    }

    /// Position of vertex `v` in the ascending list.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// All positively oriented faces of dimension `m`, in lexicographic order.
    pub fn faces(&self, m: usize) -> Vec<Simplex> {
        combinations(self.vertices.len(), m + 1)
            .into_iter()
            .map(|c| Simplex { vertices: c.iter().map(|&i| self.vertices[i]).collect(), sign: 1 })
            .collect()
    }

    /// All positively oriented faces of every dimension, ordered by dimension then lexicographically.
    pub fn all_faces(&self) -> Vec<Simplex> {
        (0..=self.dim()).flat_map(|m| self.faces(m)).collect()
    }

    /// Face obtained by removing vertex `v`, positively oriented.
    pub fn without(&self, v: usize) -> Option<Simplex> {
        if self.vertices.len() < 2 || !self.contains_vertex(v) {
            return None;
        }
        Some(Simplex { vertices: self.vertices.iter().copied().filter(|&w| w != v).collect(), sign: 1 })
    }

    /// Coface obtained by adding vertex `v`, positively oriented.
    pub fn with(&self, v: usize) -> Option<Simplex> {
        if self.contains_vertex(v) {
            return None;
        }
        let mut vs = self.vertices.clone();
        vs.push(v);
        vs.sort_unstable();
        Some(Simplex { vertices: vs, sign: 1 })
    }

    /// Positions (local indices) of this simplex's vertices inside `ambient`.
    pub fn local_indices(&self, ambient: &Simplex) -> Result<Vec<usize>> {
        self.vertices
            .iter()
            .map(|v| ambient.position(*v).ok_or_else(|| Error::InvalidArgument(format!("{self} is not a face of {ambient}"))))
            .collect()
    }
}

/// Sorts a sequence and returns the sign of the sorting permutation.
pub fn sort_with_sign(seq: &[usize]) -> (Vec<usize>, i8) {
    let mut v = seq.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (v, sign)
}

/// Index subsets of `0..n` of size `m`, lexicographic.
pub fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut c: Vec<usize> = (0..m).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..m).rev().find(|&i| c[i] != i + n - m) else {
            break;
        };
        c[i] += 1;
        for j in i + 1..m {
            c[j] = c[j - 1] + 1;
        }
    }
    out
}

/// Incidence number o(T, T'): nonzero iff T' is a facet of T.
pub fn incidence(t: &Simplex, tp: &Simplex) -> i8 {
    if tp.vertices.len() + 1 != t.vertices.len() || !tp.is_face_of(t) {
        return 0;
    }
    let p = t.vertices.iter().position(|v| !tp.contains_vertex(*v)).expect("facet omits one vertex");
    let parity = if p % 2 == 0 { 1 } else { -1 };
    parity * t.sign * tp.sign
}

/// Opposite face of `t` in `u` together with the sign s(T).
pub fn opposite(u: &Simplex, t: &Simplex) -> Result<(Simplex, i8)> {
    if !t.is_face_of(u) {
        return Err(Error::InvalidArgument(format!("not a face: {t} in {u}")));
    }
    if t.vertices.len() == u.vertices.len() {
        return Err(Error::InvalidArgument("opposite is empty".into()));
    }
    let rest: Vec<usize> = u.vertices.iter().copied().filter(|v| !t.contains_vertex(*v)).collect();
    let mut seq = t.vertices.clone();
    seq.extend(&rest);
    let (_, parity) = sort_with_sign(&seq);
    Ok((Simplex { vertices: rest, sign: 1 }, parity * t.sign * u.sign))
}

/// A finite simplicial complex, closed under faces. Members are stored
/// positively oriented, grouped by dimension, each group sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Closure under faces of the given simplices.
    pub fn from_simplices(cells: &[Simplex]) -> Self {
        let top = cells.iter().map(Simplex::dim).max().unwrap_or(0);
        let mut sets: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default(); top + 1];
        for c in cells {
            for f in c.all_faces() {
                sets[f.dim()].insert(f.vertices);
            }
        }
        let by_dim: Vec<Vec<Simplex>> =
            sets.into_iter().map(|s| s.into_iter().map(|v| Simplex { vertices: v, sign: 1 }).collect()).collect();
        let index = by_dim
            .iter()
            .map(|group| group.iter().enumerate().map(|(i, s)| (s.vertices.clone(), i)).collect())
            .collect();
        SimplicialComplex { by_dim, index }
    }

    /// The complex of all faces of a single simplex.
    pub fn of_simplex(u: &Simplex) -> Self {
        Self::from_simplices(&[u.clone().with_sign(1)])
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    /// The k-simplices, or an empty slice when k exceeds the dimension.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn all(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(&s.vertices).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    /// Skeleton up to dimension m.
    pub fn skeleton(&self, m: usize) -> Self {
        let cells: Vec<Simplex> = self.by_dim.iter().take(m + 1).flatten().cloned().collect();
        Self::from_simplices(&cells)
    }

    /// Matrix of δ: 𝒞ᵏ → 𝒞ᵏ⁺¹ (rows (k+1)-simplices, columns k-simplices).
    pub fn coboundary_matrix(&self, k: usize) -> RatMatrix {
        let rows = self.simplices(k + 1);
        let mut m = RatMatrix::zeros(rows.len(), self.count(k));
        for (i, s) in rows.iter().enumerate() {
            for v in s.vertices() {
                let face = s.without(*v).expect("dimension at least one");
                let j = self.index_of(&face).expect("closed under faces");
                m[(i, j)] = int(incidence(s, &face) as i64);
            }
        }
        m
    }

    /// Matrix of δ′: 𝒞ᵏ → 𝒞ᵏ⁻¹, the transpose of the coboundary.
    pub fn boundary_matrix(&self, k: usize) -> RatMatrix {
        if k == 0 {
            return RatMatrix::zeros(0, self.count(0));
        }
        self.coboundary_matrix(k - 1).transpose()
    }
}

/// A k-cochain: one exact value per k-simplex, in the complex's ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<Rational>,
}

impl Cochain {
    pub fn zero(complex: &SimplicialComplex, degree: usize) -> Self {
        Cochain { degree, values: vec![Rational::zero(); complex.count(degree)] }
    }

    /// Indicator cochain of a single simplex of the complex.
    pub fn indicator(complex: &SimplicialComplex, s: &Simplex) -> Result<Self> {
        let i = complex.index_of(s).ok_or_else(|| Error::InvalidArgument(format!("{s} not in complex")))?;
        let mut c = Self::zero(complex, s.dim());
        c.values[i] = int(s.sign() as i64);
        Ok(c)
    }

    pub fn value(&self, complex: &SimplicialComplex, s: &Simplex) -> Option<Rational> {
        let i = complex.index_of(s)?;
        let v = self.values[i].clone();
        Some(if s.sign() < 0 { -v } else { v })
    }

    fn check(&self, complex: &SimplicialComplex) -> Result<()> {
        if self.values.len() != complex.count(self.degree) {
            return Err(Error::InvalidArgument(format!(
                "cochain of degree {} has {} values, complex has {} simplices",
                self.degree,
                self.values.len(),
                complex.count(self.degree)
            )));
        }
        Ok(())
    }
}

pub fn coboundary(complex: &SimplicialComplex, c: &Cochain) -> Result<Cochain> {
    c.check(complex)?;
    let m = complex.coboundary_matrix(c.degree);
    Ok(Cochain { degree: c.degree + 1, values: m.mul_vec(&c.values) })
}

pub fn boundary(complex: &SimplicialComplex, c: &Cochain) -> Result<Cochain> {
    c.check(complex)?;
    if c.degree == 0 {
        return Ok(Cochain { degree: 0, values: Vec::new() });
    }
    let m = complex.boundary_matrix(c.degree);
    Ok(Cochain { degree: c.degree - 1, values: m.mul_vec(&c.values) })
}

/// Matrix of s: 𝒞ᵏ(U) → 𝒞ⁿ⁻ᵏ⁻¹(U), T ↦ s(T)·T̂, on the face complex of `u`.
pub fn hodge_matrix(u: &Simplex, k: usize) -> Result<RatMatrix> {
    let n = u.dim();
    if k >= n {
        return Err(Error::InvalidArgument("opposite is empty".into()));
    }
    let cx = SimplicialComplex::of_simplex(u);
    let mut m = RatMatrix::zeros(cx.count(n - k - 1), cx.count(k));
    for (j, t) in cx.simplices(k).iter().enumerate() {
        let (hat, s) = opposite(u, t)?;
        let i = cx.index_of(&hat).expect("face of U");
        m[(i, j)] = int(s as i64 * hodge_degree_sign(k));
    }
    Ok(m)
}

/// Degree-dependent sign (−1)^{k(k+1)/2}. With the raw s(T) one has
/// s∘δ = (−1)^{k+1} δ′∘s in degree k; this factor absorbs that.
fn hodge_degree_sign(k: usize) -> i64 {
    if (k * (k + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Applies the simplicial Hodge map to a cochain on the face complex of `u`.
pub fn hodge_cochain_map(u: &Simplex, complex: &SimplicialComplex, c: &Cochain) -> Result<Cochain> {
    if *complex != SimplicialComplex::of_simplex(u) {
        return Err(Error::InvalidArgument("cochain does not live on the face complex of a single simplex".into()));
    }
    c.check(complex)?;
    let m = hodge_matrix(u, c.degree)?;
    Ok(Cochain { degree: u.dim() - c.degree - 1, values: m.mul_vec(&c.values) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v).unwrap()
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(incidence(&s(&[0, 1, 2]), &s(&[1, 2])), 1);
        assert_eq!(incidence(&s(&[0, 1, 2]), &s(&[0, 2])), -1);
        assert_eq!(incidence(&s(&[0, 1, 2]), &s(&[0])), 0);
        assert_eq!(incidence(&s(&[0, 1, 2]), &s(&[0, 2]).with_sign(-1)), 1);
    }

    #[test]
    fn enumeration_orientation() {
        let t = Simplex::from_enumeration(&[2, 0, 1]).unwrap();
        assert_eq!(t.vertices(), &[0, 1, 2]);
        assert_eq!(t.sign(), 1);
        assert_eq!(Simplex::from_enumeration(&[1, 0]).unwrap().sign(), -1);
        assert!(Simplex::new(&[1, 1]).is_err());
        assert!(Simplex::new(&[]).is_err());
    }

    #[test]
    fn coboundary_of_vertex_indicator() {
        let cx = SimplicialComplex::of_simplex(&s(&[0, 1, 2]));
        let c = Cochain::indicator(&cx, &s(&[0])).unwrap();
        let d = coboundary(&cx, &c).unwrap();
        assert_eq!(d.values, vec![int(-1), int(-1), int(0)]);
        let ones = Cochain { degree: 0, values: vec![int(1); 3] };
        assert!(coboundary(&cx, &ones).unwrap().values.iter().all(Zero::is_zero));
        let top = coboundary(&cx, &Cochain { degree: 2, values: vec![int(1)] }).unwrap();
        assert!(top.values.is_empty());
    }

    #[test]
    fn boundary_of_edge() {
        let cx = SimplicialComplex::of_simplex(&s(&[0, 1, 2]));
        let e = Cochain::indicator(&cx, &s(&[0, 1])).unwrap();
        assert_eq!(boundary(&cx, &e).unwrap().values, vec![int(-1), int(1), int(0)]);
        let tri = Cochain::indicator(&cx, &s(&[0, 1, 2])).unwrap();
        let bb = boundary(&cx, &boundary(&cx, &tri).unwrap()).unwrap();
        assert!(bb.values.iter().all(Zero::is_zero));
        assert!(boundary(&cx, &Cochain::zero(&cx, 0)).unwrap().values.is_empty());
    }

    #[test]
    fn delta_squared_vanishes() {
        let cx = SimplicialComplex::of_simplex(&Simplex::standard(4));
        for k in 0..3 {
            assert!(cx.coboundary_matrix(k + 1).mul(&cx.coboundary_matrix(k)).is_zero());
        }
    }

    #[test]
    fn augmented_sequence_is_exact() {
        for n in 1..=4 {
            let cx = SimplicialComplex::of_simplex(&Simplex::standard(n));
            // 0 → ℝ → 𝒞⁰ → … → 𝒞ⁿ → 0; the augmentation has rank 1.
            let mut prev_rank = 1;
            for k in 0..=n {
                let r = if k < n { cx.coboundary_matrix(k).rank() } else { 0 };
                assert_eq!(prev_rank + r, cx.count(k), "n={n} k={k}");
                prev_rank = r;
            }
        }
    }

    #[test]
    fn opposite_examples() {
        let (hat, sg) = opposite(&s(&[0, 1, 2, 3]), &s(&[0, 1])).unwrap();
        assert_eq!((hat.vertices(), sg), (&[2usize, 3][..], 1));
        let (hat, sg) = opposite(&s(&[0, 1, 2]), &s(&[1])).unwrap();
        assert_eq!((hat.vertices(), sg), (&[0usize, 2][..], -1));
        assert!(opposite(&s(&[0, 1, 2]), &s(&[0, 1, 3])).is_err());
        assert!(opposite(&s(&[0, 1, 2]), &s(&[0, 1, 2])).is_err());
    }

    #[test]
    fn hodge_intertwines_delta_and_boundary() {
        for n in 1..=4 {
            let u = Simplex::standard(n);
            let cx = SimplicialComplex::of_simplex(&u);
            for k in 0..n.saturating_sub(1) {
                // s_{k+1} δ_k = δ′_{n-k-1} s_k
                let lhs = hodge_matrix(&u, k + 1).unwrap().mul(&cx.coboundary_matrix(k));
                let rhs = cx.boundary_matrix(n - k - 1).mul(&hodge_matrix(&u, k).unwrap());
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn hodge_on_triangle_vertex() {
        let u = s(&[0, 1, 2]);
        let cx = SimplicialComplex::of_simplex(&u);
        let c = Cochain::indicator(&cx, &s(&[0])).unwrap();
        let h = hodge_cochain_map(&u, &cx, &c).unwrap();
        assert_eq!(h.degree, 1);
        assert_eq!(h.values, vec![int(0), int(0), int(1)]);
        let other = SimplicialComplex::of_simplex(&s(&[0, 1]));
        assert!(hodge_cochain_map(&u, &other, &Cochain::zero(&other, 0)).is_err());
    }

    #[test]
    fn hodge_twice_is_signed_identity() {
        let u = Simplex::standard(3);
        for k in 0..3 {
            let s1 = hodge_matrix(&u, k).unwrap();
            let s2 = hodge_matrix(&u, 2 - k).unwrap();
            let p = s2.mul(&s1);
            for i in 0..p.nrows() {
                for j in 0..p.ncols() {
                    if i == j {
                        assert!(p[(i, j)] == int(1) || p[(i, j)] == int(-1));
                    } else {
                        assert!(p[(i, j)].is_zero());
                    }
                }
            }
        }
        let _ = rat(1, 1);
    }
}
