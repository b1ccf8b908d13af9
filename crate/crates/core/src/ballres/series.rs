use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multipoly::{CPoly, MultiIndex};
use crate::sampling::{random_sphere_point, rng};

/// A map `C^d -> C^d` given by one power series per coordinate, truncated at
/// a common total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPowerSeries {
    comps: Vec<CPoly>,
    degree: usize,
}

impl BallPowerSeries {
    /// Drops terms above `degree`; every component must live in `C^d` with
    /// `d` the number of components.
    pub fn new(comps: Vec<CPoly>, degree: usize) -> Result<Self> {
        let d = comps.len();
        if let Some(c) = comps.iter().find(|c| c.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: c.dim() });
        }
        let comps = comps.iter().map(|c| c.filter_terms(|a| a.total() <= degree)).collect();
        Ok(BallPowerSeries { comps, degree })
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[CPoly] {
        &self.comps
    }

    /// `T_1`, the terms of total degree at most one.
    pub fn affine(&self) -> BallPowerSeries {
        self.filtered(|a| a.total() <= 1)
    }

    /// `f - T_1(f)`.
    pub fn tail(&self) -> BallPowerSeries {
        self.filtered(|a| a.total() >= 2)
    }

    fn filtered(&self, keep: impl Fn(&MultiIndex) -> bool + Copy) -> BallPowerSeries {
        BallPowerSeries { comps: self.comps.iter().map(|c| c.filter_terms(keep)).collect(), degree: self.degree }
    }

    pub fn add(&self, other: &BallPowerSeries) -> Result<BallPowerSeries> {
        self.zip(other, CPoly::add)
    }

    pub fn sub(&self, other: &BallPowerSeries) -> Result<BallPowerSeries> {
        self.zip(other, CPoly::sub)
    }

    fn zip(&self, other: &BallPowerSeries, op: impl Fn(&CPoly, &CPoly) -> CPoly) -> Result<BallPowerSeries> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let degree = self.degree.min(other.degree);
        BallPowerSeries::new(self.comps.iter().zip(&other.comps).map(|(a, b)| op(a, b)).collect(), degree)
    }

    pub fn scale(&self, s: Complex64) -> BallPowerSeries {
        BallPowerSeries { comps: self.comps.iter().map(|c| c.scale(s)).collect(), degree: self.degree }
    }

    /// Euclidean norm of all coefficients.
    pub fn coeff_norm(&self) -> f64 {
        self.comps.iter().flat_map(|c| c.terms().map(|(_, x)| x.norm_sqr())).sum::<f64>().sqrt()
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.comps.iter().map(|c| c.eval(z)).collect()
    }
}

/// `int |zeta^alpha|^2 dsigma = (d-1)! alpha! / (d-1+|alpha|)!` for the
/// normalized surface measure of the unit sphere of `C^d`.
pub fn sphere_weight(alpha: &MultiIndex) -> f64 {
    let d = alpha.dim();
    // 1 / multinomial(d - 1 + |alpha|; d - 1, alpha_1, ..., alpha_d), built as
    // a product of binomials.
    let mut w = 1.0;
    let mut top = d - 1;
    for &a in alpha.entries() {
        for i in 1..=a {
            w *= i as f64 / (top + i) as f64;
        }
        top += a;
    }
    w
}

/// `sqrt(sum_j sum_alpha |c_alpha(f_j)|^2 w_alpha)`, the `L^2` norm on the
/// sphere by monomial orthogonality.
pub fn sphere_l2_norm(f: &BallPowerSeries) -> f64 {
    f.components().iter().map(sphere_l2_sqr).sum::<f64>().sqrt()
}

pub fn sphere_l2_sqr(p: &CPoly) -> f64 {
    p.terms().map(|(a, c)| c.norm_sqr() * sphere_weight(a)).sum()
}

/// Monte-Carlo mean of `f` over the sphere of `C^d` with its standard error.
pub fn sphere_mean(f: impl Fn(&[Complex64]) -> f64 + Sync, d: usize, samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed, 0x5b);
    let pts: Vec<Vec<Complex64>> = (0..samples).map(|_| random_sphere_point(&mut r, d)).collect();
    let vals: Vec<f64> = pts.par_iter().map(|z| f(z)).collect();
    let n = samples as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Same as [`sphere_mean`] with each sample rotated by a fresh random
/// unitary, which leaves the normalized measure invariant.
pub fn sphere_mean_rotated(f: impl Fn(&[Complex64]) -> f64 + Sync, d: usize, samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed, 0x5c);
    let u = random_unitary(&mut r, d);
    sphere_mean(|z| f(&apply(&u, z)), d, samples, seed)
}

fn apply(u: &[Vec<Complex64>], z: &[Complex64]) -> Vec<Complex64> {
    u.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
}

/// Gram-Schmidt on complex Gaussian columns.
fn random_unitary<R: Rng>(r: &mut R, d: usize) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = random_sphere_point(r, d);
        for c in &cols {
            let dot: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(c).for_each(|(x, a)| *x -= dot * a);
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect()
}
