use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multipoly::{series_divide, CPoly, IndexBox, MultiIndex, PowerSeries};
use crate::sampling::{random_polydisk_point, rng};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Sample-based test that a polynomial has no zeros in the open polydisk.
///
/// The polynomial is evaluated on the product grid `radii x angles` in every
/// variable and at `random` interior points; the smallest values then seed
/// a minimal-norm Newton search for a nearby interior zero. Zeros on the
/// boundary torus are allowed. This is evidence, not a proof.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityCheck {
    pub radii: Vec<f64>,
    /// Angles per variable; reduced for `d >= 3` so the grid stays below
    /// `2^24` points.
    pub angles: usize,
    pub random: usize,
    pub seed: u64,
    pub zero_tol: f64,
}

impl Default for StabilityCheck {
    fn default() -> Self {
        StabilityCheck { radii: vec![0.5, 0.9, 0.99], angles: 1 << 10, random: 10_000, seed: 0, zero_tol: 1e-12 }
    }
}

const NEWTON_SEEDS: usize = 8;
const NEWTON_STEPS: usize = 40;

impl StabilityCheck {
    /// A cheaper check for tests and inner loops.
    pub fn quick(seed: u64) -> Self {
        StabilityCheck { radii: vec![0.5, 0.9, 0.99], angles: 64, random: 2_000, seed, zero_tol: 1e-12 }
    }

    fn angles_for(&self, d: usize) -> usize {
        let mut a = self.angles;
        while a > 1 && ((self.radii.len() * a) as f64).powi(d as i32) > (1u64 << 24) as f64 {
            a /= 2;
        }
        a
    }

    pub fn run(&self, p: &CPoly) -> Result<()> {
        let d = p.dim();
        let a = self.angles_for(d);
        let side = self.radii.len() * a;
        let total = side.pow(d as u32);
        let axis: Vec<Complex64> = self
            .radii
            .iter()
            .flat_map(|&r| (0..a).map(move |k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / a as f64)))
            .collect();
        let point = |mut idx: usize| -> Vec<Complex64> {
            let mut z = vec![Complex64::default(); d];
            for j in (0..d).rev() {
                z[j] = axis[idx % side];
                idx /= side;
            }
            z
        };
        let mut r = rng(self.seed, 0x57ab);
        let extra: Vec<Vec<Complex64>> = (0..self.random).map(|_| random_polydisk_point(&mut r, d, 1.0)).collect();

        let grid_best = (0..total)
            .into_par_iter()
            .fold(Vec::new, |acc, i| push_best(acc, (p.eval(&point(i)).norm(), i)))
            .reduce(Vec::new, |a, b| b.into_iter().fold(a, push_best));
        let extra_best =
            extra.iter().enumerate().map(|(i, z)| (p.eval(z).norm(), total + i)).fold(Vec::new(), push_best);
        let best = extra_best.into_iter().fold(grid_best, push_best);

        let grad: Vec<CPoly> = (0..d).map(|j| p.derivative(j)).collect();
        for (val, idx) in best {
            let z0 = if idx < total { point(idx) } else { extra[idx - total].clone() };
            if val <= self.zero_tol {
                return Err(unstable(&z0));
            }
            if let Some(z) = newton_zero(p, &grad, z0, self.zero_tol) {
                return Err(unstable(&z));
            }
        }
        Ok(())
    }
}

fn unstable(z: &[Complex64]) -> Error {
    Error::Unstable { point: z.iter().map(|w| (w.re, w.im)).collect() }
}

// Keeps the NEWTON_SEEDS smallest (value, index) pairs, ties by index.
fn push_best(mut acc: Vec<(f64, usize)>, x: (f64, usize)) -> Vec<(f64, usize)> {
    let key = |a: &(f64, usize)| (a.0, a.1);
    let pos = acc.partition_point(|y| key(y) < key(&x));
    if pos < NEWTON_SEEDS {
        acc.insert(pos, x);
        acc.truncate(NEWTON_SEEDS);
    }
    acc
}

/// Minimal-norm Newton iteration `z <- z - p(z) conj(grad) / |grad|^2`.
/// Returns a zero found strictly inside the polydisk, if any.
fn newton_zero(p: &CPoly, grad: &[CPoly], mut z: Vec<Complex64>, tol: f64) -> Option<Vec<Complex64>> {
    for _ in 0..NEWTON_STEPS {
        let v = p.eval(&z);
        if v.norm() <= tol {
            let inside = z.iter().all(|w| w.norm() < 1.0 - 1e-9);
            return inside.then_some(z);
        }
        let g: Vec<Complex64> = grad.iter().map(|q| q.eval(&z)).collect();
        let gn: f64 = g.iter().map(|w| w.norm_sqr()).sum();
        if gn == 0.0 {
            return None;
        }
        for (w, gj) in z.iter_mut().zip(&g) {
            *w -= v * gj.conj() / gn;
        }
        if z.iter().any(|w| w.norm() > 1.0) {
            return None;
        }
    }
    None
}

/// A rational inner function `z^m p*(z) / p(z)` with `p*` the reflection of
/// `p` at its own multi-degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalInner {
    p: CPoly,
    m: MultiIndex,
    p_star: CPoly,
    numerator: CPoly,
}

/// Checks stability of `p` with the default sampling certificate and builds
/// the RIF `z^m p*/p`.
pub fn rif_from_denominator(p: CPoly, m: MultiIndex) -> Result<RationalInner> {
    rif_with_check(p, m, &StabilityCheck::default())
}

pub fn rif_with_check(p: CPoly, m: MultiIndex, check: &StabilityCheck) -> Result<RationalInner> {
    let rif = RationalInner::unchecked(p, m)?;
    check.run(&rif.p)?;
    Ok(rif)
}

impl RationalInner {
    /// Builds the value without the stability certificate.
    pub fn unchecked(p: CPoly, m: MultiIndex) -> Result<Self> {
        m.ensure_dim(p.dim())?;
        if p.coeff(&MultiIndex::zeros(p.dim())) == Complex64::default() {
            return Err(Error::ZeroConstantTerm);
        }
        let p_star = p.reflect(&p.multi_degree())?;
        let numerator = p_star.shift(&m);
        Ok(RationalInner { p, m, p_star, numerator })
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn denominator(&self) -> &CPoly {
        &self.p
    }

    pub fn shift(&self) -> &MultiIndex {
        &self.m
    }

    pub fn reflection(&self) -> &CPoly {
        &self.p_star
    }

    /// `z^m p*`.
    pub fn numerator(&self) -> &CPoly {
        &self.numerator
    }

    /// Multi-degree of the numerator bound, `m + deg p`.
    pub fn multi_degree(&self) -> MultiIndex {
        &self.m + &self.p.multi_degree()
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.numerator.eval(z) / self.p.eval(z)
    }

    /// Value at a point where `|p| > tol`, `None` otherwise.
    pub fn eval_checked(&self, z: &[Complex64], tol: f64) -> Option<Complex64> {
        let den = self.p.eval(z);
        (den.norm() > tol).then(|| self.numerator.eval(z) / den)
    }

    pub fn taylor_section(&self, n: &MultiIndex) -> Result<PowerSeries> {
        taylor_section(&self.numerator, &self.p, n)
    }

    pub fn cayley(&self) -> CayleyInner {
        CayleyInner::new(self.clone())
    }
}

/// Taylor section of `num / den` on `Gamma_n`.
pub fn taylor_section(num: &CPoly, den: &CPoly, n: &MultiIndex) -> Result<PowerSeries> {
    n.ensure_dim(num.dim())?;
    let bx = IndexBox::new(n.clone());
    series_divide(&num.to_series(&bx), &den.to_series(&bx), &bx)
}

#[derive(Serialize, Deserialize)]
struct RifJson {
    p: CPoly,
    m: MultiIndex,
}

impl Serialize for RationalInner {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RifJson { p: self.p.clone(), m: self.m.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalInner {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RifJson::deserialize(d)?;
        RationalInner::unchecked(raw.p, raw.m).map_err(serde::de::Error::custom)
    }
}

/// `phi = (1 + f)/(1 - f)` for a rational inner `f`, kept as the fraction
/// `(p + z^m p*) / (p - z^m p*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyInner {
    f: RationalInner,
    num: CPoly,
    den: CPoly,
}

impl CayleyInner {
    pub fn new(f: RationalInner) -> Self {
        let num = f.p.add(&f.numerator);
        let den = f.p.sub(&f.numerator);
        CayleyInner { f, num, den }
    }

    pub fn underlying(&self) -> &RationalInner {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn taylor_section(&self, n: &MultiIndex) -> Result<PowerSeries> {
        if self.den.coeff(&MultiIndex::zeros(self.dim())) == Complex64::default() {
            return Err(Error::CayleyPole);
        }
        taylor_section(&self.num, &self.den, n)
    }
}

impl Serialize for CayleyInner {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.f.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CayleyInner {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(CayleyInner::new(RationalInner::deserialize(d)?))
    }
}

/// `phi = (1 + f)/(1 - f)`.
pub fn cayley(f: Complex64) -> Result<Complex64> {
    if f == ONE {
        return Err(Error::CayleyPole);
    }
    Ok((ONE + f) / (ONE - f))
}

/// `f = (phi - 1)/(phi + 1)`.
pub fn cayley_inverse(phi: Complex64) -> Result<Complex64> {
    if phi == -ONE {
        return Err(Error::CayleyPole);
    }
    Ok((phi - ONE) / (phi + ONE))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p_two() -> CPoly {
        CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).unwrap()
    }

    #[test]
    fn constant_denominator_gives_monomial() {
        let f = rif_with_check(CPoly::constant(2, ONE), MultiIndex::from([1, 1]), &StabilityCheck::quick(0)).unwrap();
        let z = [c(0.3, 0.1), c(-0.2, 0.5)];
        assert!((f.eval(&z) - z[0] * z[1]).norm() < 1e-16);
    }

    #[test]
    fn two_variable_example() {
        let f = rif_from_denominator(p_two(), MultiIndex::zeros(2)).unwrap();
        let want = CPoly::from_real_terms(2, &[(&[1, 1], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).unwrap();
        assert_eq!(f.numerator(), &want);
    }

    #[test]
    fn mobius_example() {
        let p = CPoly::from_real_terms(1, &[(&[0], 1.0), (&[1], -0.5)]).unwrap();
        let f = rif_with_check(p, MultiIndex::zeros(1), &StabilityCheck::quick(0)).unwrap();
        let z = c(0.2, -0.7);
        assert!((f.eval(&[z]) - (z - 0.5) / (1.0 - z / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn unstable_and_degenerate_denominators() {
        // 1 - 2 z_1 vanishes at z_1 = 1/2.
        let p = CPoly::from_real_terms(2, &[(&[0, 0], 1.0), (&[1, 0], -2.0)]).unwrap();
        assert!(matches!(
            rif_with_check(p, MultiIndex::zeros(2), &StabilityCheck::quick(0)),
            Err(Error::Unstable { .. })
        ));
        // 1 - z1 z2 / 0.8^2 vanishes on an interior curve no grid point hits exactly.
        let p = CPoly::from_real_terms(2, &[(&[0, 0], 1.0), (&[1, 1], -1.5625)]).unwrap();
        assert!(matches!(
            rif_with_check(p, MultiIndex::zeros(2), &StabilityCheck::quick(3)),
            Err(Error::Unstable { .. })
        ));
        let p = CPoly::from_real_terms(1, &[(&[1], 1.0)]).unwrap();
        assert!(matches!(RationalInner::unchecked(p, MultiIndex::zeros(1)), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn taylor_section_examples() {
        let f = RationalInner::unchecked(CPoly::constant(2, ONE), MultiIndex::from([1, 1])).unwrap();
        let t = f.taylor_section(&MultiIndex::from([1, 1])).unwrap();
        assert_eq!(t.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE]);

        let f = RationalInner::unchecked(p_two(), MultiIndex::zeros(2)).unwrap();
        let t = f.taylor_section(&MultiIndex::from([1, 1])).unwrap();
        let want = [0.0, -0.5, -0.5, 0.5];
        for (a, b) in t.coeffs().iter().zip(want) {
            assert!((a - c(b, 0.0)).norm() < 1e-15);
        }

        let z = RationalInner::unchecked(CPoly::constant(1, ONE), MultiIndex::from([1])).unwrap();
        let t = z.cayley().taylor_section(&MultiIndex::from([2])).unwrap();
        assert_eq!(t.coeffs(), &[ONE, c(2.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn cayley_pole_at_origin() {
        // f = 1 identically (p constant, m = 0) has phi with a pole everywhere.
        let f = RationalInner::unchecked(CPoly::constant(1, ONE), MultiIndex::zeros(1)).unwrap();
        assert!(matches!(f.cayley().taylor_section(&MultiIndex::from([2])), Err(Error::CayleyPole)));
    }

    #[test]
    fn cayley_scalar_examples() {
        assert_eq!(cayley(c(0.0, 0.0)).unwrap(), ONE);
        assert!((cayley(c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-16);
        assert_eq!(cayley_inverse(ONE).unwrap(), c(0.0, 0.0));
        assert!(cayley(ONE).is_err() && cayley_inverse(-ONE).is_err());
    }

    #[test]
    fn json_shape() {
        let f = RationalInner::unchecked(p_two(), MultiIndex::zeros(2)).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"p":{"dim":2,"terms":["#) && s.ends_with(r#""m":[0,0]}"#));
        assert_eq!(serde_json::from_str::<RationalInner>(&s).unwrap(), f);
    }
}
