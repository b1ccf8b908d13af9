use rayon::prelude::*;
use serde::Serialize;

use super::admissible::AdmissibleIndex;
use super::charts::PushforwardPoly;
use crate::error::{Error, Result};
use crate::sampling::Kronecker;

/// Default number of sample points for [`LambdaProfile`].
pub const DEFAULT_POINTS: usize = 1 << 20;

/// Sorted samples of `|Q|` on `[-1, 1]^d` at a seeded Kronecker point set,
/// each point carrying measure `2^d / M`. Evaluates
/// `Lambda(eps) = inf { int |Q| v : 0 <= v <= 1, int v >= eps }` by the
/// bathtub principle: the infimum is the integral of `|Q|` over its
/// sublevel set of measure `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaProfile {
    dim: usize,
    weight: f64,
    sorted: Vec<f64>,
    prefix: Vec<f64>,
}

impl LambdaProfile {
    pub fn new(q: &PushforwardPoly, points: usize, seed: u64) -> Self {
        LambdaProfile::sample(q.dim(), |t| q.eval(t), points, seed)
    }

    /// Profile of `|f|` for any function on the cube.
    pub fn sample(dim: usize, f: impl Fn(&[f64]) -> f64 + Sync, points: usize, seed: u64) -> Self {
        assert!(points > 0);
        let k = Kronecker::new(dim, seed);
        let mut sorted: Vec<f64> = (0..points)
            .into_par_iter()
            .map(|i| {
                let t: Vec<f64> = k.point(i).iter().map(|u| 2.0 * u - 1.0).collect();
                f(&t).abs()
            })
            .collect();
        sorted.par_sort_unstable_by(f64::total_cmp);
        let mut prefix = Vec::with_capacity(points + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in &sorted {
            acc += v;
            prefix.push(acc);
        }
        LambdaProfile { dim, weight: 2f64.powi(dim as i32) / points as f64, sorted, prefix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.sorted.len()
    }

    /// `lambda(Delta) = 2^d`.
    pub fn volume(&self) -> f64 {
        2f64.powi(self.dim as i32)
    }

    pub fn eval(&self, eps: f64) -> Result<f64> {
        let max = self.volume();
        if !(0.0..=max).contains(&eps) {
            return Err(Error::EpsilonOutOfRange { eps, max });
        }
        let x = eps / self.weight;
        let k = (x.floor() as usize).min(self.points());
        let frac = if k < self.points() { (x - k as f64) * self.sorted[k] } else { 0.0 };
        Ok(self.weight * (self.prefix[k] + frac))
    }
}

/// `2^d 2^-k` for `k = 2..=11`.
pub fn default_eps_grid(dim: usize) -> Vec<f64> {
    (2..=11).map(|k| 2f64.powi(dim as i32 - k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaDecay {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    /// `|m| + 1` when an admissible index is known.
    pub exponent: Option<usize>,
    /// Largest `c` with `Lambda(eps) >= c eps^(|m|+1)` on the grid.
    pub c_fit: Option<f64>,
    /// Least-squares slope of `log Lambda` against `log eps`.
    pub slope: f64,
}

pub fn lambda_decay_check(profile: &LambdaProfile, m: Option<&AdmissibleIndex>, eps: &[f64]) -> Result<LambdaDecay> {
    let values = eps.iter().map(|&e| profile.eval(e)).collect::<Result<Vec<f64>>>()?;
    let exponent = m.map(|a| a.m.total() + 1);
    let c_fit = exponent.map(|p| {
        eps.iter()
            .zip(&values)
            .filter(|(e, _)| **e > 0.0)
            .map(|(e, v)| v / e.powi(p as i32))
            .fold(f64::INFINITY, f64::min)
    });
    let pts: Vec<(f64, f64)> =
        eps.iter().zip(&values).filter(|(e, v)| **e > 0.0 && **v > 0.0).map(|(e, v)| (e.ln(), v.ln())).collect();
    Ok(LambdaDecay { eps: eps.to_vec(), values, exponent, c_fit, slope: ls_slope(&pts) })
}

/// Least-squares slope through `(x, y)` pairs; NaN with fewer than two.
pub fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
