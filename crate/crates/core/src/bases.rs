//! Parametrized scalar bases of P_r on an n-simplex, covering Bernstein and
//! Lagrange as special cases, with a generalized de Casteljau evaluator.
//!
//! Polynomials are stored homogeneously in the barycentric coordinates: a
//! factor λᵢ − t is written λᵢ − t·Σⱼλⱼ, so every degree-r polynomial has a
//! unique expansion in the monomials λ^β with |β| = r.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::forms::{eval_monomial, multi_factorial, multi_indices, BaryForm, MultiIndex};
use crate::linalg::RatMatrix;
use crate::rational::{factorial, int, Rational};

/// Nodes tᵢ[j] for vertices i = 0..=n and 0 ≤ j < r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeTable {
    t: Vec<Vec<Rational>>,
}

impl NodeTable {
    /// Validates the shape and the admissibility condition.
    pub fn new(t: Vec<Vec<Rational>>) -> Result<Self> {
        if t.len() < 2 {
            return Err(Error::InvalidArgument("node table needs at least two vertices".into()));
        }
        let r = t[0].len();
        if r == 0 || t.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidArgument("node table rows must all have length r ≥ 1".into()));
        }
        let table = NodeTable { t };
        if let Some(a) = table.violation() {
            return Err(Error::Inadmissible(format!(
                "nodes at multi-index {a:?} sum to 1"
            )));
        }
        Ok(table)
    }

    /// tᵢ[j] = 0: the Bernstein basis up to multinomial factors.
    pub fn bernstein(n: usize, r: usize) -> Self {
        NodeTable { t: vec![vec![Rational::zero(); r]; n + 1] }
    }

    /// tᵢ[j] = j/r: the Lagrange basis on the principal lattice, up to scaling.
    pub fn lagrange(n: usize, r: usize) -> Self {
        let row: Vec<Rational> = (0..r).map(|j| Rational::new(j.into(), r.into())).collect();
        NodeTable { t: vec![row; n + 1] }
    }

    pub fn n(&self) -> usize {
        self.t.len() - 1
    }

    pub fn r(&self) -> usize {
        self.t[0].len()
    }

    pub fn node(&self, i: usize, j: usize) -> &Rational {
        &self.t[i][j]
    }

    /// First multi-index a with |a| < r and Σᵢ tᵢ[aᵢ] = 1, if any.
    pub fn violation(&self) -> Option<MultiIndex> {
        (0..self.r() as u32).flat_map(|w| multi_indices(self.n() + 1, w)).find(|a| {
            let s: Rational = a.iter().enumerate().map(|(i, &ai)| self.t[i][ai as usize].clone()).sum();
            s.is_one()
        })
    }

    pub fn is_admissible(&self) -> bool {
        self.violation().is_none()
    }
}

/// Homogeneous polynomial Σ c_β λ^β in the barycentric coordinates of an n-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoly {
    pub n: usize,
    pub degree: u32,
    pub coeffs: BTreeMap<MultiIndex, Rational>,
}

impl LambdaPoly {
    pub fn one(n: usize) -> Self {
        LambdaPoly { n, degree: 0, coeffs: BTreeMap::from([(vec![0; n + 1], Rational::one())]) }
    }

    /// λᵢ − t·Σⱼλⱼ.
    pub fn shifted_coordinate(n: usize, i: usize, t: &Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        for j in 0..=n {
            let mut e = vec![0; n + 1];
            e[j] = 1;
            let c = if j == i { Rational::one() - t } else { -t.clone() };
            if !c.is_zero() {
                coeffs.insert(e, c);
            }
        }
        LambdaPoly { n, degree: 1, coeffs }
    }

    pub fn mul(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut coeffs: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let key: MultiIndex = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *coeffs.entry(key).or_insert_with(Rational::zero) += x * y;
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        LambdaPoly { n: self.n, degree: self.degree + other.degree, coeffs }
    }

    pub fn scale(&self, s: &Rational) -> LambdaPoly {
        let mut coeffs: BTreeMap<MultiIndex, Rational> =
            self.coeffs.iter().map(|(k, v)| (k.clone(), v * s)).collect();
        coeffs.retain(|_, v| !v.is_zero());
        LambdaPoly { n: self.n, degree: self.degree, coeffs }
    }

    /// Value at a barycentric point.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(a, c)| c * eval_monomial(a, x)).sum()
    }

    /// Coefficients in the order of `multi_indices(n+1, degree)`.
    pub fn coefficient_vector(&self) -> Vec<Rational> {
        multi_indices(self.n + 1, self.degree)
            .iter()
            .map(|b| self.coeffs.get(b).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    /// The same polynomial as a 0-form on `ambient`.
    pub fn to_form(&self, ambient: &Simplex) -> Result<BaryForm> {
        if ambient.dim() != self.n {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        let mut out = BaryForm::zero(ambient, 0);
        for (a, c) in &self.coeffs {
            out.axpy(&Rational::one(), &BaryForm::monomial(ambient, a, &[], c.clone())?)?;
        }
        Ok(out)
    }
}

/// βᵢ[j](λᵢ) = Π_{l<j} (λᵢ − tᵢ[l]).
fn beta(nodes: &NodeTable, i: usize, j: usize) -> LambdaPoly {
    (0..j).fold(LambdaPoly::one(nodes.n()), |acc, l| {
        acc.mul(&LambdaPoly::shifted_coordinate(nodes.n(), i, nodes.node(i, l)))
    })
}

/// C^α = β₀[α₀](λ₀)⋯βₙ[αₙ](λₙ) for |α| ≤ r.
pub fn product_polynomial(nodes: &NodeTable, alpha: &[u32]) -> LambdaPoly {
    alpha
        .iter()
        .enumerate()
        .fold(LambdaPoly::one(nodes.n()), |acc, (i, &a)| acc.mul(&beta(nodes, i, a as usize)))
}

/// |α|!/α!, the factor turning C^α into C̃^α.
pub fn multinomial(alpha: &[u32]) -> Rational {
    let w: u32 = alpha.iter().sum();
    Rational::new(factorial(w as usize), multi_factorial(alpha))
}

#[derive(Clone, Debug)]
pub struct BasisFamily {
    pub nodes: NodeTable,
    /// Multi-indices α ∈ Σᵣ[n], in `multi_indices` order.
    pub indices: Vec<MultiIndex>,
    /// C^α in the same order.
    pub polys: Vec<LambdaPoly>,
}

impl BasisFamily {
    /// C̃^α = r!/α!·C^α.
    pub fn scaled(&self) -> Vec<LambdaPoly> {
        self.indices.iter().zip(&self.polys).map(|(a, p)| p.scale(&multinomial(a))).collect()
    }

    /// Columns are the λ^β coefficients of C^α.
    pub fn change_of_basis(&self) -> RatMatrix {
        let cols: Vec<Vec<Rational>> = self.polys.iter().map(LambdaPoly::coefficient_vector).collect();
        RatMatrix::from_cols(self.indices.len(), &cols)
    }

    pub fn is_basis(&self) -> bool {
        self.change_of_basis().rank() == self.indices.len()
    }

    /// Coefficients c_α with Σ c_α C̃^α = p, for p homogeneous of degree r.
    pub fn scaled_coefficients(&self, p: &LambdaPoly) -> Result<BTreeMap<MultiIndex, Rational>> {
        if p.degree as usize != self.nodes.r() || p.n != self.nodes.n() {
            return Err(Error::InvalidArgument("polynomial must be homogeneous of degree r".into()));
        }
        let cols: Vec<Vec<Rational>> = self.scaled().iter().map(LambdaPoly::coefficient_vector).collect();
        let m = RatMatrix::from_cols(self.indices.len(), &cols);
        let rhs = RatMatrix::from_cols(self.indices.len(), &[p.coefficient_vector()]);
        let c = m.solve(&rhs)?;
        Ok(self.indices.iter().cloned().zip(c.col(0)).collect())
    }
}

/// The family C^α, α ∈ Σᵣ[n], for an admissible node table.
pub fn basis_family(nodes: &NodeTable) -> Result<BasisFamily> {
    if let Some(a) = nodes.violation() {
        return Err(Error::Inadmissible(format!(
            "nodes at multi-index {a:?} sum to 1"
        )));
    }
    let indices = multi_indices(nodes.n() + 1, nodes.r() as u32);
    let polys = indices.iter().map(|a| product_polynomial(nodes, a)).collect();
    Ok(BasisFamily { nodes: nodes.clone(), indices, polys })
}

/// Σ c_α C̃^α(x) by r rounds of c_γ ← Σᵢ (λᵢ(x) − tᵢ[γᵢ]) c_{γ+eᵢ}.
pub fn de_casteljau_eval(coeffs: &BTreeMap<MultiIndex, Rational>, x: &[Rational], nodes: &NodeTable) -> Result<Rational> {
    let n = nodes.n();
    let r = nodes.r() as u32;
    if x.len() != n + 1 {
        return Err(Error::InvalidArgument(format!("point has {} coordinates, expected {}", x.len(), n + 1)));
    }
    let mut level: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for a in multi_indices(n + 1, r) {
        let c = coeffs.get(&a).ok_or_else(|| Error::InvalidArgument(format!("missing coefficient for {a:?}")))?;
        level.insert(a, c.clone());
    }
    for w in (0..r).rev() {
        let mut next = BTreeMap::new();
        for g in multi_indices(n + 1, w) {
            let mut acc = Rational::zero();
            for i in 0..=n {
                let mut up = g.clone();
                up[i] += 1;
                acc += (&x[i] - nodes.node(i, g[i] as usize)) * &level[&up];
            }
            next.insert(g, acc);
        }
        level = next;
    }
    Ok(level.into_values().next().unwrap_or_else(Rational::zero))
}

/// The constant 1 as a homogeneous polynomial of degree r: (Σλᵢ)^r.
pub fn homogeneous_one(n: usize, r: usize) -> LambdaPoly {
    let coeffs = (0..=n)
        .map(|j| {
            let mut e = vec![0; n + 1];
            e[j] = 1;
            (e, int(1))
        })
        .collect();
    let sum = LambdaPoly { n, degree: 1, coeffs };
    (0..r).fold(LambdaPoly::one(n), |acc, _| acc.mul(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn bernstein_is_monomial() {
        let nodes = NodeTable::bernstein(2, 3);
        let fam = basis_family(&nodes).unwrap();
        for (a, p) in fam.indices.iter().zip(&fam.polys) {
            assert_eq!(p.coeffs.len(), 1);
            assert_eq!(p.coeffs[a], int(1));
        }
        assert!(fam.is_basis());
    }

    #[test]
    fn lagrange_vanishes_off_its_node() {
        let nodes = NodeTable::lagrange(2, 3);
        let fam = basis_family(&nodes).unwrap();
        for (a, p) in fam.indices.iter().zip(&fam.polys) {
            for b in &fam.indices {
                let x: Vec<Rational> = b.iter().map(|&v| rat(v as i64, 3)).collect();
                assert_eq!(p.evaluate(&x).is_zero(), a != b);
            }
        }
    }

    #[test]
    fn rejects_inadmissible_nodes() {
        let t = vec![vec![int(0), int(1)], vec![int(0), int(1)]];
        assert!(matches!(NodeTable::new(t), Err(Error::Inadmissible(_))));
        assert!(NodeTable::new(vec![vec![int(0)], vec![]]).is_err());
    }

    #[test]
    fn casteljau_linear_function() {
        let nodes = NodeTable::bernstein(1, 2);
        let coeffs: BTreeMap<MultiIndex, Rational> =
            multi_indices(2, 2).into_iter().map(|a| { let v = rat(a[1] as i64, 2); (a, v) }).collect();
        let x = vec![rat(1, 3), rat(2, 3)];
        assert_eq!(de_casteljau_eval(&coeffs, &x, &nodes).unwrap(), rat(2, 3));
        let mut partial = coeffs.clone();
        partial.remove(&vec![0, 2]);
        assert!(de_casteljau_eval(&partial, &x, &nodes).is_err());
    }

    #[test]
    fn constant_representation() {
        let nodes = NodeTable::new(vec![vec![rat(1, 5), rat(-1, 2)], vec![int(0), rat(1, 7)], vec![rat(1, 3), int(2)]])
            .unwrap();
        let fam = basis_family(&nodes).unwrap();
        let c = fam.scaled_coefficients(&homogeneous_one(2, 2)).unwrap();
        for x in [[rat(1, 3), rat(1, 3), rat(1, 3)], [rat(1, 2), rat(1, 4), rat(1, 4)], [int(2), int(-3), int(2)]] {
            assert_eq!(de_casteljau_eval(&c, &x, &nodes).unwrap(), int(1));
        }
    }
}
