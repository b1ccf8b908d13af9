use num_complex::Complex64;

use super::cpoly::CPoly;
use super::index::{IndexBox, MultiIndex};
use crate::error::{Error, Result};

/// A truncated power series: the coefficients of some holomorphic germ on
/// `Gamma_n`, stored densely in box order. The truncation box is part of
/// the value; coefficients outside it are unknown, not zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    bx: IndexBox,
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn from_dense(bx: IndexBox, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(bx.len(), coeffs.len(), "coefficient count must match the box");
        PowerSeries { bx, coeffs }
    }

    pub fn zero(bx: IndexBox) -> Self {
        let n = bx.len();
        PowerSeries { bx, coeffs: vec![Complex64::default(); n] }
    }

    pub fn constant(bx: IndexBox, c: Complex64) -> Self {
        let mut s = PowerSeries::zero(bx);
        s.coeffs[0] = c;
        s
    }

    /// One-variable series from `c_0, ..., c_n`.
    pub fn univariate(coeffs: &[Complex64]) -> Self {
        assert!(!coeffs.is_empty());
        PowerSeries::from_dense(IndexBox::new([coeffs.len() - 1]), coeffs.to_vec())
    }

    pub fn index_box(&self) -> &IndexBox {
        &self.bx
    }

    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^alpha`; `None` outside the truncation box.
    pub fn coeff(&self, alpha: &MultiIndex) -> Option<Complex64> {
        self.bx.offset(alpha).map(|p| self.coeffs[p])
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        self.bx.iter().zip(self.coeffs.iter().copied())
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_cpoly(&self) -> CPoly {
        CPoly::from_terms(self.dim(), self.iter()).expect("box dimension is consistent")
    }

    /// Restriction to a smaller box.
    pub fn truncate(&self, bx: &IndexBox) -> Result<PowerSeries> {
        self.ensure_covers(bx)?;
        let coeffs = bx.iter().map(|a| self.coeff(&a).unwrap()).collect();
        Ok(PowerSeries::from_dense(bx.clone(), coeffs))
    }

    fn ensure_covers(&self, bx: &IndexBox) -> Result<()> {
        bx.bound().ensure_dim(self.dim())?;
        if !self.bx.contains(bx.bound()) {
            return Err(Error::DegreeExceedsBound {
                index: bx.bound().entries().to_vec(),
                bound: self.bx.bound().entries().to_vec(),
            });
        }
        Ok(())
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        assert_eq!(self.bx, other.bx, "series boxes differ");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        PowerSeries::from_dense(self.bx.clone(), coeffs)
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        assert_eq!(self.bx, other.bx, "series boxes differ");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        PowerSeries::from_dense(self.bx.clone(), coeffs)
    }

    pub fn scale(&self, s: Complex64) -> PowerSeries {
        PowerSeries::from_dense(self.bx.clone(), self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Product truncated to the common box.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        assert_eq!(self.bx, other.bx, "series boxes differ");
        let nz = nonzero_terms(other);
        let mut out = vec![Complex64::default(); self.bx.len()];
        for (pos, alpha) in self.bx.iter().enumerate() {
            let mut acc = Complex64::default();
            for (beta, b) in &nz {
                if let Some(rest) = alpha.checked_sub(beta) {
                    acc += b * self.coeffs[self.bx.offset(&rest).unwrap()];
                }
            }
            out[pos] = acc;
        }
        PowerSeries::from_dense(self.bx.clone(), out)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        Ok(dense_horner(&self.coeffs, self.bx.bound().entries(), z))
    }

    /// Truncated exponential, by the same per-variable recursion as
    /// [`series_log`].
    pub fn exp(&self) -> PowerSeries {
        let bx = &self.bx;
        let mut e = vec![Complex64::default(); bx.len()];
        e[0] = self.coeffs[0].exp();
        for pos in 1..bx.len() {
            let alpha = bx.index_at(pos);
            let j = first_nonzero(&alpha);
            let mut acc = Complex64::default();
            for beta in IndexBox::new(alpha.clone()).iter() {
                if beta[j] == 0 {
                    continue;
                }
                let rest = alpha.checked_sub(&beta).unwrap();
                acc += beta[j] as f64 * self.coeffs[bx.offset(&beta).unwrap()] * e[bx.offset(&rest).unwrap()];
            }
            e[pos] = acc / alpha[j] as f64;
        }
        PowerSeries::from_dense(bx.clone(), e)
    }
}

fn nonzero_terms(s: &PowerSeries) -> Vec<(MultiIndex, Complex64)> {
    s.iter().filter(|(_, c)| *c != Complex64::default()).collect()
}

fn first_nonzero(alpha: &MultiIndex) -> usize {
    alpha.entries().iter().position(|&a| a > 0).expect("nonzero multi-index")
}

fn dense_horner(coeffs: &[Complex64], bound: &[usize], z: &[Complex64]) -> Complex64 {
    let side = bound[0] + 1;
    let stride = coeffs.len() / side;
    let mut acc = Complex64::default();
    for k in (0..side).rev() {
        let inner = if bound.len() == 1 {
            coeffs[k]
        } else {
            dense_horner(&coeffs[k * stride..(k + 1) * stride], &bound[1..], &z[1..])
        };
        acc = acc * z[0] + inner;
    }
    acc
}

/// Taylor coefficients of `numer / denom` on `bx`.
///
/// Both inputs must be known on `bx`. Solved in box order, which is
/// compatible with the componentwise partial order, so every coefficient
/// needed on the right-hand side is already available.
pub fn series_divide(numer: &PowerSeries, denom: &PowerSeries, bx: &IndexBox) -> Result<PowerSeries> {
    numer.ensure_covers(bx)?;
    denom.ensure_covers(bx)?;
    let d0 = denom.constant_term();
    if d0 == Complex64::default() {
        return Err(Error::ZeroConstantTerm);
    }
    let den = denom.truncate(bx)?;
    let tail: Vec<_> = nonzero_terms(&den).into_iter().filter(|(b, _)| !b.is_zero()).collect();
    let mut q = vec![Complex64::default(); bx.len()];
    for pos in 0..bx.len() {
        let alpha = bx.index_at(pos);
        let mut acc = numer.coeff(&alpha).unwrap();
        for (beta, d) in &tail {
            if let Some(rest) = alpha.checked_sub(beta) {
                acc -= d * q[bx.offset(&rest).unwrap()];
            }
        }
        q[pos] = acc / d0;
    }
    Ok(PowerSeries::from_dense(bx.clone(), q))
}

/// Principal logarithm of a series with nonvanishing constant term.
///
/// Uses `z_j d/dz_j s = s * z_j d/dz_j log s` coefficient-wise, with `j` the
/// first variable present in the target exponent, instead of composing with
/// the scalar log series.
pub fn series_log(s: &PowerSeries, bx: &IndexBox) -> Result<PowerSeries> {
    s.ensure_covers(bx)?;
    let s0 = s.constant_term();
    if s0 == Complex64::default() {
        return Err(Error::ZeroConstantTerm);
    }
    if s0.im == 0.0 && s0.re < 0.0 {
        return Err(Error::BranchCut { re: s0.re, im: s0.im });
    }
    let s = s.truncate(bx)?;
    let mut l = vec![Complex64::default(); bx.len()];
    l[0] = s0.ln();
    for pos in 1..bx.len() {
        let alpha = bx.index_at(pos);
        let j = first_nonzero(&alpha);
        let mut acc = Complex64::default();
        for beta in IndexBox::new(alpha.clone()).iter() {
            if beta[j] == 0 || beta == alpha {
                continue;
            }
            let rest = alpha.checked_sub(&beta).unwrap();
            acc += beta[j] as f64 * l[bx.offset(&beta).unwrap()] * s.coeffs[bx.offset(&rest).unwrap()];
        }
        l[pos] = (s.coeffs[pos] - acc / alpha[j] as f64) / s0;
    }
    Ok(PowerSeries::from_dense(bx.clone(), l))
}
