use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multipoly::{CPoly, MultiIndex, TrigPoly};

/// Coefficients of `Q` below this fraction of the largest one are treated as
/// cancellation noise and dropped.
const DROP_REL: f64 = 1e-12;

/// The `2^d` pieces `S_j` of the torus, each a product of the two half-circle
/// charts `Psi_1` (right half) and `Psi_2 = -Psi_1` (left half).
///
/// Chart `j` uses `Psi_2` on axis `k` when bit `d - 1 - k` of `j` is set, so
/// chart 0 is `Psi_1` on every axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartAtlas {
    dim: usize,
}

impl ChartAtlas {
    pub fn new(dim: usize) -> Self {
        assert!((1..usize::BITS as usize).contains(&dim));
        ChartAtlas { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        1 << self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis chart choices `j_k in {1, 2}`.
    pub fn choice(&self, j: usize) -> Vec<u8> {
        assert!(j < self.len(), "chart {j} out of range");
        (0..self.dim).map(|k| 1 + ((j >> (self.dim - 1 - k)) & 1) as u8).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        (0..self.len()).map(|j| self.choice(j))
    }
}

/// `Psi_1(t) = ((1 - t^2) + 2it)/(1 + t^2)`, or its negation for chart 2.
pub fn psi(which: u8, t: f64) -> Complex64 {
    let z = Complex64::new(1.0 - t * t, 2.0 * t) / (1.0 + t * t);
    let z = z / z.norm();
    if which == 2 {
        -z
    } else {
        z
    }
}

/// `Phi_j(t)`, one half-circle chart per axis.
pub fn chart_map(choice: &[u8], t: &[f64]) -> Vec<Complex64> {
    assert_eq!(choice.len(), t.len(), "dimension mismatch");
    choice.iter().zip(t).map(|(&c, &x)| psi(c, x)).collect()
}

/// Density of the normalized torus measure pulled back through a chart,
/// `prod 1/(pi (1 + t_k^2))`, the same for every chart.
pub fn pullback_density(t: &[f64]) -> f64 {
    t.iter().map(|x| 1.0 / (PI * (1.0 + x * x))).product()
}

/// The real polynomial `Q = prod (1 + t_k^2)^|n| * P(Phi_j(t))` on `[-1, 1]^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushforwardPoly {
    chart: Vec<u8>,
    source_degree: usize,
    terms: Vec<(MultiIndex, f64)>,
}

impl PushforwardPoly {
    /// A polynomial given directly by its coefficients, for the Lambda and
    /// admissible-index routines; zero coefficients are dropped.
    pub fn from_terms(dim: usize, terms: &[(&[usize], f64)]) -> Result<Self> {
        let mut map: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (a, c) in terms {
            let a = MultiIndex::new(a.to_vec());
            if a.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.dim() });
            }
            *map.entry(a).or_default() += c;
        }
        let terms = map.into_iter().filter(|(_, c)| *c != 0.0).collect();
        Ok(PushforwardPoly { chart: vec![1; dim], source_degree: 0, terms })
    }

    pub fn dim(&self) -> usize {
        self.chart.len()
    }

    pub fn chart(&self) -> &[u8] {
        &self.chart
    }

    pub fn source_degree(&self) -> usize {
        self.source_degree
    }

    /// Nonzero coefficients `q_beta`, sorted by exponent.
    pub fn terms(&self) -> &[(MultiIndex, f64)] {
        &self.terms
    }

    pub fn coeff(&self, beta: &MultiIndex) -> f64 {
        self.terms.binary_search_by(|(a, _)| a.cmp(beta)).map(|p| self.terms[p].1).unwrap_or(0.0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.iter().map(|(a, _)| a.total()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops coefficients below `rel` times the largest one.
    pub fn snap(&self, rel: f64) -> PushforwardPoly {
        let max = self.terms.iter().fold(0.0f64, |m, (_, c)| m.max(c.abs()));
        let terms = self.terms.iter().filter(|(_, c)| c.abs() > rel * max).cloned().collect();
        PushforwardPoly { chart: self.chart.clone(), source_degree: self.source_degree, terms }
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        assert_eq!(t.len(), self.dim(), "dimension mismatch");
        self.terms
            .iter()
            .map(|(a, c)| c * a.entries().iter().zip(t).map(|(&k, x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }
}

/// Pushes `P` through chart `choice` and clears denominators:
/// `xi_k = s_k (1 + i t_k)^2 / (1 + t_k^2)` with `s_k = +-1`, so each
/// monomial `xi^alpha` times `prod (1 + t_k^2)^|n|` becomes
/// `prod s_k^a (1 + i t_k)^(2a) (1 + t_k^2)^(|n| - a)` with `a = alpha_k`,
/// and `Q` is the real part of the analytic part pushed forward.
pub fn pushforward_q(p: &TrigPoly, choice: &[u8], source_degree: usize) -> Result<PushforwardPoly> {
    let d = p.dim();
    if choice.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: choice.len() });
    }
    let bound = p.index_box().bound();
    if bound.entries().iter().any(|&b| b > source_degree) {
        return Err(Error::DegreeExceedsBound { index: bound.entries().to_vec(), bound: vec![source_degree; d] });
    }
    let one = Complex64::new(1.0, 0.0);
    // factors[k][a] is the cleared univariate factor for exponent a on axis k.
    let factors: Vec<Vec<CPoly>> = (0..d)
        .map(|k| {
            let t = CPoly::variable(d, k);
            let lin = CPoly::constant(d, one).add(&t.scale(Complex64::new(0.0, 1.0)));
            let quad = CPoly::constant(d, one).add(&t.mul(&t));
            let sign: f64 = if choice[k] == 2 { -1.0 } else { 1.0 };
            (0..=bound[k])
                .map(|a| {
                    let mut u = CPoly::constant(d, Complex64::new(sign.powi(a as i32), 0.0));
                    for _ in 0..a {
                        u = u.mul(&lin).mul(&lin);
                    }
                    for _ in a..source_degree {
                        u = u.mul(&quad);
                    }
                    u
                })
                .collect()
        })
        .collect();
    let mut acc = CPoly::zero(d);
    for (alpha, c) in p.analytic_part().terms() {
        let mut term = CPoly::constant(d, c);
        for (k, &a) in alpha.entries().iter().enumerate() {
            term = term.mul(&factors[k][a]);
        }
        acc = acc.add(&term);
    }
    let max = acc.terms().map(|(_, c)| c.re.abs()).fold(0.0, f64::max);
    let terms = acc.terms().filter(|(_, c)| c.re.abs() > DROP_REL * max).map(|(a, c)| (a.clone(), c.re)).collect();
    Ok(PushforwardPoly { chart: choice.to_vec(), source_degree, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::IndexBox;
    use crate::sampling::rng;
    use rand::Rng;

    #[test]
    fn chart_examples() {
        assert!((psi(1, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((psi(1, 1.0) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((psi(2, 0.0) + Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(psi(1, 0.5).re > 0.0 && psi(2, 0.5).re < 0.0);
    }

    #[test]
    fn atlas_enumerates_choices() {
        let a = ChartAtlas::new(2);
        let all: Vec<Vec<u8>> = a.iter().collect();
        assert_eq!(all, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn minus_imaginary_part() {
        let p = TrigPoly::zero(IndexBox::new([1])).with_term([1], 0.0, 1.0);
        let q1 = pushforward_q(&p, &[1], 1).unwrap();
        assert_eq!(q1.terms(), &[(MultiIndex::from([1]), -2.0)]);
        let q2 = pushforward_q(&p, &[2], 1).unwrap();
        assert_eq!(q2.terms(), &[(MultiIndex::from([1]), 2.0)]);
    }

    #[test]
    fn constant_clears_denominator() {
        let p = TrigPoly::zero(IndexBox::new([1])).with_term([0], 3.0, 0.0);
        let q = pushforward_q(&p, &[1], 1).unwrap();
        assert_eq!(q.terms(), &[(MultiIndex::from([0]), 3.0), (MultiIndex::from([2]), 3.0)]);
    }

    #[test]
    fn identity_and_degree_bound() {
        let p = TrigPoly::zero(IndexBox::new([1, 2]))
            .with_term([0, 0], 0.3, 0.0)
            .with_term([1, 0], -0.7, 0.2)
            .with_term([0, 2], 0.1, 1.1)
            .with_term([1, 1], 0.5, -0.4);
        let n = 3;
        let mut r = rng(5, 0);
        for choice in ChartAtlas::new(2).iter() {
            let q = pushforward_q(&p, &choice, n).unwrap();
            assert!(q.total_degree() <= 2 * n * 2);
            for _ in 0..200 {
                let t = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
                let w: f64 = t.iter().map(|x: &f64| (1.0 + x * x).powi(n as i32)).product();
                let lhs = w * p.eval(&chart_map(&choice, &t));
                assert!((lhs - q.eval(&t)).abs() < 1e-9, "{choice:?} {t:?}");
            }
        }
    }

    #[test]
    fn rejects_small_source_degree() {
        let p = TrigPoly::zero(IndexBox::new([2])).with_term([2], 1.0, 0.0);
        assert!(pushforward_q(&p, &[1], 1).is_err());
    }

    #[test]
    fn chart_density_has_half_the_mass() {
        // Each chart covers half the circle, so the density has mass 1/2.
        let m = 20000;
        let mass: f64 =
            (0..m).map(|i| pullback_density(&[-1.0 + (i as f64 + 0.5) * 2.0 / m as f64])).sum::<f64>() * 2.0 / m as f64;
        assert!((mass - 0.5).abs() < 1e-8);
    }
}
