//! Polynomial differential forms in barycentric coordinates on a simplex.
//!
//! A form on an n-simplex U is a sparse sum of terms `c · λ^α · dλ_J` where
//! α is indexed by the n+1 local vertices of U and J is a set of local
//! vertices stored as a bitmask. Because Σλᵢ = 1 and Σdλᵢ = 0 the
//! representation is not unique; [`BaryForm::canonicalize`] gives a normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{factorial, format_rational, Rational};

/// Exponent tuple over the local vertices of a simplex.
pub type MultiIndex = Vec<u32>;

/// A term key: exponents and the dλ index set as a bitmask.
pub type TermKey = (MultiIndex, u32);

pub fn weight(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

pub fn multi_factorial(alpha: &[u32]) -> BigInt {
    alpha.iter().map(|&a| factorial(a as usize)).product()
}

/// All multi-indices of the given length and weight, ordered with the first
/// entry most significant and descending: (2,0,0), (1,1,0), (1,0,1), …
pub fn multi_indices(len: usize, weight: u32) -> Vec<MultiIndex> {
    fn rec(len: usize, w: u32, prefix: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == len {
            prefix.push(w);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=w).rev() {
            prefix.push(a);
            rec(len, w - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if weight == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(len, weight, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Bitmask of a list of indices.
pub fn mask_of(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

/// Indices set in a bitmask, ascending.
pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of dλ_A ∧ dλ_B relative to dλ_{A∪B}; zero when A and B overlap.
fn merge_sign(a: u32, b: u32) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for j in mask_indices(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BaryForm {
    ambient: Simplex,
    degree: usize,
    terms: BTreeMap<TermKey, Rational>,
}

impl fmt::Debug for BaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaryForm(deg {} on {}) ", self.degree, self.ambient)?;
        fmt::Display::fmt(self, f)
    }
}

/// One term per line: `p/q * l0^a0*...*ln^an * dl(j1,...,jk)`.
impl fmt::Display for BaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for ((alpha, mask), c) in &self.terms {
            let mono: Vec<String> = alpha.iter().enumerate().map(|(i, a)| format!("l{i}^{a}")).collect();
            let js: Vec<String> = mask_indices(*mask).iter().map(|j| j.to_string()).collect();
            writeln!(f, "{} * {} * dl({})", format_rational(c), mono.join("*"), js.join(","))?;
        }
        Ok(())
    }
}

impl BaryForm {
    pub fn zero(ambient: &Simplex, degree: usize) -> Self {
        BaryForm { ambient: ambient.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn constant(ambient: &Simplex, c: Rational) -> Self {
        let mut f = Self::zero(ambient, 0);
        f.add_term(vec![0; ambient.dim() + 1], 0, c);
        f
    }

    /// `c · λ^α · dλ_{j₁}∧…∧dλ_{jₖ}` for an arbitrary ordering of the j's.
    pub fn monomial(ambient: &Simplex, alpha: &[u32], dl: &[usize], c: Rational) -> Result<Self> {
        let n = ambient.dim();
        if alpha.len() != n + 1 || dl.iter().any(|&j| j > n) {
            return Err(Error::InvalidArgument(format!("index out of range for a {n}-simplex")));
        }
        let mut f = Self::zero(ambient, dl.len());
        let (sorted, sign) = crate::complex::sort_with_sign(dl);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(f);
        }
        let c = if sign < 0 { -c } else { c };
        f.add_term(alpha.to_vec(), mask_of(&sorted), c);
        Ok(f)
    }

    /// The barycentric coordinate λᵢ (local index).
    pub fn lambda(ambient: &Simplex, i: usize) -> Self {
        let mut alpha = vec![0; ambient.dim() + 1];
        alpha[i] = 1;
        let mut f = Self::zero(ambient, 0);
        f.add_term(alpha, 0, Rational::one());
        f
    }

    /// The 1-form dλᵢ (local index).
    pub fn dlambda(ambient: &Simplex, i: usize) -> Self {
        let mut f = Self::zero(ambient, 1);
        f.add_term(vec![0; ambient.dim() + 1], 1 << i, Rational::one());
        f
    }

    /// λ^α as a scalar form.
    pub fn power(ambient: &Simplex, alpha: &[u32]) -> Self {
        let mut f = Self::zero(ambient, 0);
        f.add_term(alpha.to_vec(), 0, Rational::one());
        f
    }

    pub fn ambient(&self) -> &Simplex {
        &self.ambient
    }

    /// Dimension n of the ambient simplex.
    pub fn n(&self) -> usize {
        self.ambient.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, u32, &Rational)> {
        self.terms.iter().map(|((a, m), c)| (a, *m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest |α| among the stored terms (0 for the zero form).
    pub fn poly_degree(&self) -> u32 {
        self.terms.keys().map(|(a, _)| weight(a)).max().unwrap_or(0)
    }

    fn add_term(&mut self, alpha: MultiIndex, mask: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (alpha, mask);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn same_space(&self, other: &BaryForm) -> Result<()> {
        if self.ambient.vertices() != other.ambient.vertices() {
            return Err(Error::InvalidArgument(format!(
                "forms live on different simplices {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &BaryForm) -> Result<BaryForm> {
        self.same_space(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!("cannot add forms of degree {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.0.clone(), k.1, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BaryForm) -> Result<BaryForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BaryForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> BaryForm {
        if s.is_zero() {
            return Self::zero(&self.ambient, self.degree);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out
    }

    /// Adds `s · other` in place.
    pub fn axpy(&mut self, s: &Rational, other: &BaryForm) -> Result<()> {
        self.same_space(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidArgument("degree mismatch".into()));
        }
        for (k, c) in &other.terms {
            self.add_term(k.0.clone(), k.1, s * c);
        }
        Ok(())
    }

    /// Linear combination Σ cᵢ fᵢ of forms sharing ambient and degree.
    pub fn combination(ambient: &Simplex, degree: usize, coeffs: &[Rational], forms: &[BaryForm]) -> Result<BaryForm> {
        let mut out = Self::zero(ambient, degree);
        for (c, f) in coeffs.iter().zip(forms) {
            if !c.is_zero() {
                out.axpy(c, f)?;
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &BaryForm) -> Result<BaryForm> {
        self.same_space(other)?;
        let mut out = Self::zero(&self.ambient, self.degree + other.degree);
        for ((a, ma), ca) in &self.terms {
            for ((b, mb), cb) in &other.terms {
                let s = merge_sign(*ma, *mb);
                if s == 0 {
                    continue;
                }
                let alpha: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                out.add_term(alpha, ma | mb, if s < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Exterior derivative; d(λ^α dλ_J) = Σᵢ αᵢ λ^{α−eᵢ} dλᵢ ∧ dλ_J.
    pub fn d(&self) -> BaryForm {
        let mut out = Self::zero(&self.ambient, self.degree + 1);
        for ((a, m), c) in &self.terms {
            for i in 0..a.len() {
                if a[i] == 0 || m & (1 << i) != 0 {
                    continue;
                }
                let before = (m & ((1u32 << i) - 1)).count_ones();
                let mut alpha = a.clone();
                alpha[i] -= 1;
                let v = c * Rational::from_integer(a[i].into());
                out.add_term(alpha, m | (1 << i), if before % 2 == 0 { v } else { -v });
            }
        }
        out
    }

    /// Koszul contraction with x − x_base, where κ(dλᵢ) = λᵢ − [i = base].
    pub fn koszul(&self, base: usize) -> Result<BaryForm> {
        if base > self.n() {
            return Err(Error::InvalidArgument(format!("base vertex {base} not in a {}-simplex", self.n())));
        }
        if self.degree == 0 {
            return Err(Error::InvalidArgument("koszul contraction needs a form of degree at least 1".into()));
        }
        let mut out = Self::zero(&self.ambient, self.degree - 1);
        for ((a, m), c) in &self.terms {
            for (pos, j) in mask_indices(*m).into_iter().enumerate() {
                let c = if pos % 2 == 0 { c.clone() } else { -c.clone() };
                let rest = m & !(1 << j);
                let mut alpha = a.clone();
                alpha[j] += 1;
                out.add_term(alpha, rest, c.clone());
                if j == base {
                    out.add_term(a.clone(), rest, -c);
                }
            }
        }
        Ok(out)
    }

    /// Normal form eliminating local vertex 0.
    pub fn canonicalize(&self) -> BaryForm {
        self.canonicalize_at(0)
    }

    /// Normal form eliminating local vertex `e`: λₑ = 1 − Σ_{i≠e} λᵢ and
    /// dλₑ = −Σ_{i≠e} dλᵢ. The result is a polynomial (not necessarily
    /// homogeneous) in the remaining λ's times dλ_J with e ∉ J.
    pub fn canonicalize_at(&self, e: usize) -> BaryForm {
        let n = self.n();
        if n == 0 {
            // On a point λ₀ = 1 and there are no nonzero forms of positive degree.
            let mut out = Self::zero(&self.ambient, self.degree);
            if self.degree == 0 {
                let total: Rational = self.terms.values().cloned().sum();
                out.add_term(vec![0], 0, total);
            }
            return out;
        }
        let mut stage = Self::zero(&self.ambient, self.degree);
        for ((a, m), c) in &self.terms {
            if m & (1 << e) == 0 {
                stage.add_term(a.clone(), *m, c.clone());
                continue;
            }
            let rest = m & !(1 << e);
            for i in (0..=n).filter(|&i| i != e && rest & (1 << i) == 0) {
                // Replace dλₑ in its slot by dλᵢ, then restore ascending order.
                let (lo, hi) = if i < e { (i, e) } else { (e, i) };
                let between = (rest & ((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1)).count_ones();
                let v = if between % 2 == 0 { -c.clone() } else { c.clone() };
                stage.add_term(a.clone(), rest | (1 << i), v);
            }
        }
        let mut out = Self::zero(&self.ambient, self.degree);
        let mut cache: BTreeMap<u32, Vec<(MultiIndex, Rational)>> = BTreeMap::new();
        for ((a, m), c) in &stage.terms {
            let p = a[e];
            if p == 0 {
                out.add_term(a.clone(), *m, c.clone());
                continue;
            }
            let expansion = cache.entry(p).or_insert_with(|| one_minus_sum_power(n, e, p));
            for (beta, coef) in expansion.iter() {
                let mut alpha = a.clone();
                alpha[e] = 0;
                for (x, y) in alpha.iter_mut().zip(beta) {
                    *x += y;
                }
                out.add_term(alpha, *m, c * coef);
            }
        }
        out
    }

    /// Equality as differential forms.
    pub fn equals(&self, other: &BaryForm) -> bool {
        self.degree == other.degree && self.ambient.vertices() == other.ambient.vertices() && {
            self.sub(other).map(|d| d.canonicalize().is_zero()).unwrap_or(false)
        }
    }

    /// Pullback to a face F of the ambient simplex, expressed in F's own
    /// local coordinates. Terms involving λᵢ or dλᵢ for i ∉ F vanish.
    pub fn pullback_to_face(&self, face: &Simplex) -> Result<BaryForm> {
        let local = face.local_indices(&self.ambient)?;
        let keep = mask_of(&local);
        let mut out = Self::zero(face, self.degree);
        for ((a, m), c) in &self.terms {
            if m & !keep != 0 || a.iter().enumerate().any(|(i, &x)| x > 0 && keep & (1 << i) == 0) {
                continue;
            }
            let alpha: MultiIndex = local.iter().map(|&i| a[i]).collect();
            let mask = local.iter().enumerate().filter(|(_, &i)| m & (1 << i) != 0).fold(0, |acc, (p, _)| acc | (1 << p));
            out.add_term(alpha, mask, c.clone());
        }
        Ok(out)
    }

    /// The same barycentric expression viewed on a larger simplex containing
    /// the ambient one as a face.
    pub fn embed(&self, larger: &Simplex) -> Result<BaryForm> {
        let local = self.ambient.local_indices(larger)?;
        let mut out = Self::zero(larger, self.degree);
        for ((a, m), c) in &self.terms {
            let mut alpha = vec![0; larger.dim() + 1];
            let mut mask = 0;
            for (p, &i) in local.iter().enumerate() {
                alpha[i] = a[p];
                if m & (1 << p) != 0 {
                    mask |= 1 << i;
                }
            }
            out.add_term(alpha, mask, c.clone());
        }
        Ok(out)
    }

    /// Pullback along the affine map sending the vertices of `target` to the
    /// given barycentric points of the ambient simplex:
    /// λᵢ = Σⱼ points[j][i] λ′ⱼ and likewise for dλᵢ.
    pub fn pullback_affine(&self, points: &[Vec<Rational>], target: &Simplex) -> Result<BaryForm> {
        let n = self.n();
        if points.len() != target.dim() + 1 || points.iter().any(|p| p.len() != n + 1) {
            return Err(Error::InvalidArgument("point list does not match the simplices".into()));
        }
        let lin: Vec<BaryForm> = (0..=n)
            .map(|i| {
                let mut f = Self::zero(target, 0);
                for (j, p) in points.iter().enumerate() {
                    let mut alpha = vec![0; target.dim() + 1];
                    alpha[j] = 1;
                    f.add_term(alpha, 0, p[i].clone());
                }
                f
            })
            .collect();
        let dlin: Vec<BaryForm> = lin.iter().map(BaryForm::d).collect();
        let mut powers: BTreeMap<(usize, u32), BaryForm> = BTreeMap::new();
        let mut out = Self::zero(target, self.degree);
        for ((a, m), c) in &self.terms {
            let mut f = Self::constant(target, c.clone());
            for (i, &e) in a.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let mut p = Self::constant(target, Rational::one());
                        for _ in 0..e {
                            p = p.wedge(&lin[i])?;
                        }
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                f = f.wedge(&p)?;
            }
            for j in mask_indices(*m) {
                f = f.wedge(&dlin[j])?;
            }
            out.axpy(&Rational::one(), &f)?;
        }
        Ok(out)
    }

    /// ∫ over the ambient simplex of a form of top degree, metric free:
    /// ∫ λ^α dλ₁∧…∧dλₖ = α!/(|α|+k)!, times the orientation sign.
    pub fn integrate(&self) -> Result<Rational> {
        let k = self.n();
        if self.degree != k {
            return Err(Error::InvalidArgument(format!("cannot integrate a {}-form over a {k}-simplex", self.degree)));
        }
        let canon = self.canonicalize();
        let mut total = Rational::zero();
        for ((a, _), c) in &canon.terms {
            let num = multi_factorial(a);
            let den = factorial(weight(a) as usize + k);
            total += c * Rational::new(num, den);
        }
        Ok(if self.ambient.sign() < 0 { -total } else { total })
    }

    /// ∫ over a face of the ambient simplex of the pullback.
    pub fn integrate_over(&self, face: &Simplex) -> Result<Rational> {
        self.pullback_to_face(face)?.integrate()
    }

    /// Integral of a scalar form against the volume measure, as a multiple
    /// of the ambient volume: ∫ λ^α = α! n!/(|α|+n)! · vol.
    pub fn integrate_density(&self) -> Result<Rational> {
        if self.degree != 0 {
            return Err(Error::InvalidArgument("density integration needs a scalar".into()));
        }
        let n = self.n();
        let nf = factorial(n);
        let mut total = Rational::zero();
        for ((a, _), c) in &self.terms {
            total += c * Rational::new(multi_factorial(a) * &nf, factorial(weight(a) as usize + n));
        }
        Ok(total)
    }

    /// Value at a barycentric point, as coefficients on the canonical coframe
    /// {dλ_J : 0 ∉ J}.
    pub fn evaluate(&self, point: &[Rational]) -> Result<BTreeMap<u32, Rational>> {
        if point.len() != self.n() + 1 {
            return Err(Error::InvalidArgument("point has the wrong number of coordinates".into()));
        }
        if point.iter().cloned().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidArgument("barycentric coordinates must sum to 1".into()));
        }
        let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
        for ((a, m), c) in &self.canonicalize().terms {
            let v = c * eval_monomial(a, point);
            *out.entry(*m).or_insert_with(Rational::zero) += v;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Scalar value at a barycentric point (degree 0 only).
    pub fn evaluate_scalar(&self, point: &[Rational]) -> Result<Rational> {
        if self.degree != 0 {
            return Err(Error::InvalidArgument("not a scalar".into()));
        }
        Ok(self.evaluate(point)?.remove(&0).unwrap_or_else(Rational::zero))
    }

    /// Coefficients of `dλ₁∧…∧dλₙ` after canonicalization, as a scalar form
    /// (top degree only).
    pub fn top_coefficient(&self) -> Result<BaryForm> {
        let n = self.n();
        if self.degree != n {
            return Err(Error::InvalidArgument("not a top-degree form".into()));
        }
        let mut out = Self::zero(&self.ambient, 0);
        for ((a, _), c) in &self.canonicalize().terms {
            out.add_term(a.clone(), 0, c.clone());
        }
        Ok(out)
    }
}

pub fn eval_monomial(alpha: &[u32], point: &[Rational]) -> Rational {
    let mut v = Rational::one();
    for (x, &a) in point.iter().zip(alpha) {
        for _ in 0..a {
            v *= x;
        }
    }
    v
}

/// (1 − Σ_{i≠e} λᵢ)^p expanded into monomials not involving λₑ.
fn one_minus_sum_power(n: usize, e: usize, p: u32) -> Vec<(MultiIndex, Rational)> {
    let others: Vec<usize> = (0..=n).filter(|&i| i != e).collect();
    let pf = factorial(p as usize);
    let mut out = Vec::new();
    for w in 0..=p {
        for beta in multi_indices(others.len(), w) {
            let mut alpha = vec![0; n + 1];
            for (&i, &b) in others.iter().zip(&beta) {
                alpha[i] = b;
            }
            let denom = factorial((p - w) as usize) * multi_factorial(&beta);
            let mut c = Rational::new(pf.clone(), denom);
            if w % 2 == 1 {
                c = -c;
            }
            out.push((alpha, c));
        }
    }
    out
}

/// Coordinates of a list of forms in the canonical monomial × coframe basis.
/// Rows are indexed by the returned keys (sorted), columns by the forms.
pub fn coordinate_matrix(forms: &[BaryForm]) -> (RatMatrix, Vec<TermKey>) {
    let canon: Vec<BaryForm> = forms.iter().map(BaryForm::canonicalize).collect();
    let keys: BTreeSet<TermKey> = canon.iter().flat_map(|f| f.terms.keys().cloned()).collect();
    let keys: Vec<TermKey> = keys.into_iter().collect();
    let m = coordinates_in(&keys, &canon).expect("keys cover all forms");
    (m, keys)
}

/// Coordinates of forms relative to a fixed key list; `None` if some form has
/// a canonical term outside the list.
pub fn coordinates_in(keys: &[TermKey], forms: &[BaryForm]) -> Option<RatMatrix> {
    let index: BTreeMap<&TermKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = RatMatrix::zeros(keys.len(), forms.len());
    for (j, f) in forms.iter().enumerate() {
        for (k, c) in &f.canonicalize().terms {
            m[(*index.get(k)?, j)] = c.clone();
        }
    }
    Some(m)
}

/// Dimension of the span of a family of forms.
pub fn span_dim(forms: &[BaryForm]) -> usize {
    coordinate_matrix(forms).0.rank()
}

/// A random form with small integer-ratio coefficients, homogeneous-or-not
/// monomials of degree at most `max_poly_degree`.
pub fn random_form<R: Rng>(rng: &mut R, ambient: &Simplex, degree: usize, max_poly_degree: u32, nterms: usize) -> BaryForm {
    let n = ambient.dim();
    let mut f = BaryForm::zero(ambient, degree);
    if degree > n + 1 {
        return f;
    }
    let subsets = crate::complex::combinations(n + 1, degree);
    for _ in 0..nterms {
        let w = rng.gen_range(0..=max_poly_degree);
        let alphas = multi_indices(n + 1, w);
        let alpha = alphas[rng.gen_range(0..alphas.len())].clone();
        let mask = mask_of(&subsets[rng.gen_range(0..subsets.len())]);
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=4);
        f.add_term(alpha, mask, Rational::new(num.into(), den.into()));
    }
    f
}

/// Random rational barycentric point with strictly positive coordinates.
pub fn random_interior_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..=n).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| Rational::new(x.into(), total.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tri() -> Simplex {
        Simplex::standard(2)
    }

    fn l(u: &Simplex, i: usize) -> BaryForm {
        BaryForm::lambda(u, i)
    }

    fn dl(u: &Simplex, i: usize) -> BaryForm {
        BaryForm::dlambda(u, i)
    }

    #[test]
    fn multi_index_enumeration() {
        let m = multi_indices(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert_eq!(multi_indices(0, 0), vec![Vec::<u32>::new()]);
        assert!(multi_indices(0, 1).is_empty());
    }

    #[test]
    fn wedge_examples() {
        let u = tri();
        let a = l(&u, 0).wedge(&dl(&u, 1)).unwrap();
        assert!(a.wedge(&a).unwrap().is_zero());
        let x = dl(&u, 1).wedge(&dl(&u, 2)).unwrap();
        let y = dl(&u, 2).wedge(&dl(&u, 1)).unwrap();
        assert_eq!(x, y.neg());
        let other = BaryForm::dlambda(&Simplex::new(&[0, 1, 3]).unwrap(), 0);
        assert!(x.wedge(&other).is_err());
    }

    #[test]
    fn derivative_examples() {
        let u = tri();
        let w = l(&u, 0).wedge(&dl(&u, 1)).unwrap().sub(&l(&u, 1).wedge(&dl(&u, 0)).unwrap()).unwrap();
        let expected = dl(&u, 0).wedge(&dl(&u, 1)).unwrap().scale(&int(2));
        assert_eq!(w.d(), expected);
        let p = BaryForm::power(&u, &[2, 1, 0]);
        assert!(p.d().d().is_zero());
        assert!(BaryForm::constant(&u, int(5)).d().is_zero());
    }

    #[test]
    fn koszul_examples() {
        let u = tri();
        assert_eq!(dl(&u, 1).koszul(0).unwrap(), l(&u, 1));
        let expected = l(&u, 0).sub(&BaryForm::constant(&u, int(1))).unwrap();
        assert!(dl(&u, 0).koszul(0).unwrap().equals(&expected));
        let two = dl(&u, 1).wedge(&dl(&u, 2)).unwrap();
        assert!(two.koszul(0).unwrap().koszul(0).unwrap().canonicalize().is_zero());
        assert!(two.koszul(3).is_err());
    }

    #[test]
    fn koszul_matches_coordinate_contraction() {
        // On the unit right triangle λ₁ = x, λ₂ = y, λ₀ = 1 − x − y; the base
        // vertex 0 sits at the origin so κ contracts with (x, y).
        let u = tri();
        // κ(dλ₀) = −x − y = λ₀ − 1
        let k0 = dl(&u, 0).koszul(0).unwrap();
        let target = l(&u, 1).add(&l(&u, 2)).unwrap().neg();
        assert!(k0.equals(&target));
        // κ(dλ₁∧dλ₂) = κ(dx∧dy) = x dy − y dx
        let k12 = dl(&u, 1).wedge(&dl(&u, 2)).unwrap().koszul(0).unwrap();
        let xdy = l(&u, 1).wedge(&dl(&u, 2)).unwrap();
        let ydx = l(&u, 2).wedge(&dl(&u, 1)).unwrap();
        assert!(k12.equals(&xdy.sub(&ydx).unwrap()));
        // With base 1 (origin at (1,0)): κ(dx) = x − 1 = λ₁ − 1.
        let k = dl(&u, 1).koszul(1).unwrap();
        assert!(k.equals(&l(&u, 1).sub(&BaryForm::constant(&u, int(1))).unwrap()));
    }

    #[test]
    fn canonicalization_is_a_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = Simplex::standard(3);
        for _ in 0..30 {
            let deg = rng.gen_range(0..=3);
            let f = random_form(&mut rng, &u, deg, 3, 5);
            let c = f.canonicalize();
            assert_eq!(c.canonicalize(), c);
            assert!(f.sub(&c).unwrap().canonicalize().is_zero());
            assert!(c.terms().all(|(a, m, _)| a[0] == 0 && m & 1 == 0));
        }
    }

    #[test]
    fn pullback_examples() {
        let u = tri();
        let e = Simplex::new(&[0, 1]).unwrap();
        assert!(l(&u, 2).wedge(&dl(&u, 1)).unwrap().pullback_to_face(&e).unwrap().is_zero());
        let w = l(&u, 0).wedge(&dl(&u, 1)).unwrap().sub(&l(&u, 1).wedge(&dl(&u, 0)).unwrap()).unwrap();
        let p = w.pullback_to_face(&e).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.ambient().vertices(), &[0, 1]);
        assert!(w.pullback_to_face(&Simplex::new(&[0, 5]).unwrap()).is_err());
    }

    #[test]
    fn integration_examples() {
        let u = tri();
        let f = BaryForm::power(&u, &[1, 1, 0]);
        assert_eq!(f.integrate_density().unwrap(), rat(1, 12));
        assert_eq!(BaryForm::power(&u, &[2, 0, 0]).integrate_density().unwrap(), rat(1, 6));
        assert!(f.integrate().is_err());
        // ∫ dλ₁∧dλ₂ = 1/2! on a positively oriented triangle.
        let vol = dl(&u, 1).wedge(&dl(&u, 2)).unwrap();
        assert_eq!(vol.integrate().unwrap(), rat(1, 2));
        let neg = BaryForm::monomial(&u.clone().with_sign(-1), &[0, 0, 0], &[1, 2], int(1)).unwrap();
        assert_eq!(neg.integrate().unwrap(), rat(-1, 2));
        let point = Simplex::new(&[4]).unwrap();
        assert_eq!(BaryForm::constant(&point, int(3)).integrate().unwrap(), int(3));
    }

    #[test]
    fn evaluation_examples() {
        let u = tri();
        assert_eq!(l(&u, 1).evaluate_scalar(&[rat(1, 2), rat(1, 2), int(0)]).unwrap(), rat(1, 2));
        let f = l(&u, 0).wedge(&dl(&u, 1)).unwrap();
        let v = f.evaluate(&[rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(v.get(&(1 << 1)), Some(&rat(1, 3)));
        assert!(l(&u, 0).evaluate(&[int(1), int(1), int(0)]).is_err());
    }

    #[test]
    fn display_format() {
        let u = tri();
        let f = BaryForm::monomial(&u, &[1, 0, 2], &[2, 1], rat(3, 4)).unwrap();
        assert_eq!(f.to_string(), "-3/4 * l0^1*l1^0*l2^2 * dl(1,2)\n");
    }

    #[test]
    fn homotopy_formula() {
        let u = Simplex::standard(3);
        for base in 0..=3 {
            for r in 0..=3u32 {
                for k in 0..=3usize {
                    let others: Vec<usize> = (0..=3).filter(|&i| i != base).collect();
                    for alpha in multi_indices(3, r) {
                        for js in crate::complex::combinations(3, k) {
                            let mut a = vec![0; 4];
                            for (p, &i) in others.iter().enumerate() {
                                a[i] = alpha[p];
                            }
                            let js: Vec<usize> = js.iter().map(|&p| others[p]).collect();
                            let f = BaryForm::monomial(&u, &a, &js, int(1)).unwrap();
                            let mut lhs = f.d().koszul(base).unwrap();
                            if k > 0 {
                                lhs = lhs.add(&f.koszul(base).unwrap().d()).unwrap();
                            }
                            let rhs = f.scale(&int((r as usize + k) as i64));
                            assert!(lhs.equals(&rhs), "base {base} alpha {a:?} J {js:?}");
                        }
                    }
                }
            }
        }
    }
}
