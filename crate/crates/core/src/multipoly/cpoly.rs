use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::index::{IndexBox, MultiIndex};
use super::series::PowerSeries;
use crate::error::{Error, Result};

/// A polynomial in `C[z_1, ..., z_d]` with sparse storage.
///
/// Terms are kept sorted lexicographically by exponent with no exact zero
/// coefficients, which is what the sparse Horner evaluator relies on.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    dim: usize,
    terms: Vec<(MultiIndex, Complex64)>,
}

impl CPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        CPoly { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        CPoly::monomial(MultiIndex::zeros(dim), c)
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let dim = alpha.dim();
        let terms = if c == Complex64::new(0.0, 0.0) { vec![] } else { vec![(alpha, c)] };
        CPoly { dim, terms }
    }

    /// The coordinate function `z_j`.
    pub fn variable(dim: usize, j: usize) -> Self {
        CPoly::monomial(MultiIndex::axis(dim, j, 1), Complex64::new(1.0, 0.0))
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and exact zeros dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (alpha, c) in terms {
            alpha.ensure_dim(dim)?;
            *acc.entry(alpha).or_default() += c;
        }
        Ok(CPoly::from_map(dim, acc))
    }

    pub(crate) fn from_map(dim: usize, map: BTreeMap<MultiIndex, Complex64>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect();
        CPoly { dim, terms }
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_terms(dim: usize, terms: &[(&[usize], f64)]) -> Result<Self> {
        CPoly::from_terms(dim, terms.iter().map(|(a, c)| (MultiIndex::new(a.to_vec()), Complex64::new(*c, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Complex64)> {
        self.terms.iter().map(|(a, c)| (a, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.binary_search_by(|(a, _)| a.cmp(alpha)).map(|i| self.terms[i].1).unwrap_or_default()
    }

    /// `n_j = deg_{z_j} p`; all zeros for the zero polynomial.
    pub fn multi_degree(&self) -> MultiIndex {
        self.terms.iter().fold(MultiIndex::zeros(self.dim), |acc, (a, _)| acc.componentwise_max(a))
    }

    pub fn total_degree(&self) -> usize {
        self.terms.iter().map(|(a, _)| a.total()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: z.len() });
        }
        Ok(self.eval(z))
    }

    /// Sparse nested Horner evaluation. Panics on a dimension mismatch in
    /// debug builds; use [`CPoly::evaluate`] for checked input.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        horner(&self.terms, 0, z)
    }

    pub fn scale(&self, s: Complex64) -> CPoly {
        CPoly::from_map(self.dim, self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect())
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &CPoly, sign: Complex64) -> CPoly {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc: BTreeMap<MultiIndex, Complex64> = self.terms.iter().cloned().collect();
        for (a, c) in &other.terms {
            *acc.entry(a.clone()).or_default() += sign * c;
        }
        CPoly::from_map(self.dim, acc)
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        self.mul_filtered(other, |_| true)
    }

    /// Product with every term of total degree above `max_total` dropped.
    pub fn mul_truncated_total(&self, other: &CPoly, max_total: usize) -> CPoly {
        self.mul_filtered(other, |a| a.total() <= max_total)
    }

    fn mul_filtered(&self, other: &CPoly, keep: impl Fn(&MultiIndex) -> bool) -> CPoly {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a + b;
                if keep(&e) {
                    *acc.entry(e).or_default() += x * y;
                }
            }
        }
        CPoly::from_map(self.dim, acc)
    }

    /// Partial derivative in `z_j`.
    pub fn derivative(&self, j: usize) -> CPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(a, _)| a[j] > 0)
            .map(|(a, c)| {
                let mut e = a.entries().to_vec();
                e[j] -= 1;
                (MultiIndex::new(e), c * a[j] as f64)
            })
            .collect();
        CPoly::from_map(self.dim, terms)
    }

    /// Multiplication by the monomial `z^m`.
    pub fn shift(&self, m: &MultiIndex) -> CPoly {
        assert_eq!(self.dim, m.dim());
        CPoly { dim: self.dim, terms: self.terms.iter().map(|(a, c)| (a + m, *c)).collect() }
    }

    /// Terms whose exponent satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&MultiIndex) -> bool) -> CPoly {
        CPoly { dim: self.dim, terms: self.terms.iter().filter(|(a, _)| keep(a)).cloned().collect() }
    }

    /// The reflection `p*(z) = z^n conj(p(1 / conj z))`.
    ///
    /// Term by term, `c z^alpha` maps to `conj(c) z^(n - alpha)`, so `n` must
    /// dominate the multi-degree of `p`.
    pub fn reflect(&self, n: &MultiIndex) -> Result<CPoly> {
        n.ensure_dim(self.dim)?;
        let mut acc = BTreeMap::new();
        for (a, c) in &self.terms {
            let e = n.checked_sub(a).ok_or_else(|| Error::DegreeExceedsBound {
                index: a.entries().to_vec(),
                bound: n.entries().to_vec(),
            })?;
            acc.insert(e, c.conj());
        }
        Ok(CPoly::from_map(self.dim, acc))
    }

    /// Coefficients on `Gamma_box`, everything else dropped.
    pub fn to_series(&self, bx: &IndexBox) -> PowerSeries {
        assert_eq!(bx.dim(), self.dim);
        let mut coeffs = vec![Complex64::default(); bx.len()];
        for (a, c) in &self.terms {
            if let Some(pos) = bx.offset(a) {
                coeffs[pos] = *c;
            }
        }
        PowerSeries::from_dense(bx.clone(), coeffs)
    }

    /// Largest coefficient modulus of `self - other`; the coefficient-wise
    /// distance used throughout the tests.
    pub fn max_coeff_diff(&self, other: &CPoly) -> f64 {
        self.sub(other).terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

fn horner(terms: &[(MultiIndex, Complex64)], var: usize, z: &[Complex64]) -> Complex64 {
    if terms.is_empty() {
        return Complex64::default();
    }
    if var == z.len() {
        return terms.iter().map(|(_, c)| *c).sum();
    }
    // Within a fixed prefix the slice is sorted by `alpha[var]`, so the runs
    // are contiguous. Walk them from the top degree down.
    let mut acc = Complex64::default();
    let mut end = terms.len();
    let mut prev_deg: Option<usize> = None;
    while end > 0 {
        let deg = terms[end - 1].0[var];
        let mut start = end - 1;
        while start > 0 && terms[start - 1].0[var] == deg {
            start -= 1;
        }
        let inner = horner(&terms[start..end], var + 1, z);
        acc = match prev_deg {
            Some(p) => acc * z[var].powu((p - deg) as u32) + inner,
            None => inner,
        };
        prev_deg = Some(deg);
        end = start;
    }
    acc * z[var].powu(prev_deg.unwrap_or(0) as u32)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    alpha: Vec<usize>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct CPolyJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl Serialize for CPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CPolyJson {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson { alpha: a.entries().to_vec(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CPolyJson::deserialize(d)?;
        if raw.dim == 0 {
            return Err(serde::de::Error::custom("polynomial dimension must be >= 1"));
        }
        CPoly::from_terms(
            raw.dim,
            raw.terms.into_iter().map(|t| (MultiIndex::new(t.alpha), Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reflect_constant_is_conjugate() {
        let p = CPoly::constant(2, c(1.5, -2.0));
        let r = p.reflect(&MultiIndex::zeros(2)).unwrap();
        assert_eq!(r, CPoly::constant(2, c(1.5, 2.0)));
    }

    #[test]
    fn reflect_linear_factor() {
        // z - a  ->  1 - conj(a) z
        let a = c(0.3, 0.4);
        let p = CPoly::from_terms(1, [(MultiIndex::from([1]), c(1.0, 0.0)), (MultiIndex::from([0]), -a)]).unwrap();
        let r = p.reflect(&MultiIndex::from([1])).unwrap();
        let want =
            CPoly::from_terms(1, [(MultiIndex::from([0]), c(1.0, 0.0)), (MultiIndex::from([1]), -a.conj())]).unwrap();
        assert!(r.max_coeff_diff(&want) == 0.0);
    }

    #[test]
    fn reflect_two_variable_example() {
        let p = CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).unwrap();
        let r = p.reflect(&MultiIndex::from([1, 1])).unwrap();
        let want = CPoly::from_real_terms(2, &[(&[1, 1], 2.0), (&[0, 1], -1.0), (&[1, 0], -1.0)]).unwrap();
        assert_eq!(r, want);
    }

    #[test]
    fn reflect_rejects_small_bound_and_wrong_dim() {
        let p = CPoly::from_real_terms(1, &[(&[2], 1.0)]).unwrap();
        assert!(matches!(p.reflect(&MultiIndex::from([1])), Err(Error::DegreeExceedsBound { .. })));
        assert!(matches!(p.reflect(&MultiIndex::from([2, 2])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn evaluate_examples() {
        let p = CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).unwrap();
        assert_eq!(p.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(0.0, 0.0));
        assert!(p.evaluate(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn horner_matches_naive_sum() {
        let p = CPoly::from_terms(
            3,
            [
                (MultiIndex::from([0, 0, 0]), c(0.5, -1.0)),
                (MultiIndex::from([2, 0, 1]), c(1.0, 2.0)),
                (MultiIndex::from([2, 3, 0]), c(-0.25, 0.0)),
                (MultiIndex::from([0, 1, 4]), c(0.0, 3.0)),
                (MultiIndex::from([5, 0, 0]), c(1.0, 1.0)),
            ],
        )
        .unwrap();
        let z = [c(0.3, -0.7), c(-1.1, 0.2), c(0.9, 0.9)];
        let naive: Complex64 =
            p.terms().map(|(a, k)| k * (0..3).map(|j| z[j].powu(a[j] as u32)).product::<Complex64>()).sum();
        assert!((p.eval(&z) - naive).norm() < 1e-13);
    }

    #[test]
    fn derivative_example() {
        let p = CPoly::from_real_terms(2, &[(&[2, 1], 3.0), (&[0, 1], 1.0), (&[1, 0], -2.0)]).unwrap();
        let want = CPoly::from_real_terms(2, &[(&[1, 1], 6.0), (&[0, 0], -2.0)]).unwrap();
        assert_eq!(p.derivative(0), want);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = CPoly::from_real_terms(1, &[(&[1], 1.0), (&[1], -1.0), (&[0], 0.0)]).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.multi_degree(), MultiIndex::from([0]));
    }

    #[test]
    fn json_shape() {
        let p = CPoly::from_terms(2, [(MultiIndex::from([1, 0]), c(1.0, -2.0))]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"dim":2,"terms":[{"alpha":[1,0],"re":1.0,"im":-2.0}]}"#);
        let back: CPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
