use num_complex::Complex64;
use serde::Serialize;

use super::map::BallMap;
use super::series::{sphere_l2_norm, BallPowerSeries};
use crate::error::{Error, Result};
use crate::multipoly::CPoly;
use crate::sampling::{random_ball_point, rng};

/// Default truncation degree for the sphere norms.
pub const SERIES_DEGREE: usize = 12;

/// A map `f = sum_i c_i G_i + p` with degree-one rational `G_i` and a
/// polynomial map `p`, whose series tail is bounded by the `G_i` alone.
#[derive(Clone, Debug, PartialEq)]
pub struct BallTarget {
    pub maps: Vec<(Complex64, BallMap)>,
    /// One polynomial per coordinate, or empty.
    pub poly: Vec<CPoly>,
}

impl BallTarget {
    pub fn from_map(g: BallMap) -> Self {
        BallTarget { maps: vec![(Complex64::new(1.0, 0.0), g)], poly: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.maps.first().map(|(_, g)| g.dim()).unwrap_or(self.poly.len())
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self.poly.iter().map(|p| p.eval(z)).collect();
        out.resize(z.len(), Complex64::default());
        for (c, g) in &self.maps {
            out.iter_mut().zip(g.eval(z)).for_each(|(o, v)| *o += c * v);
        }
        out
    }

    pub fn series(&self, degree: usize) -> Result<BallPowerSeries> {
        let d = self.dim();
        if let Some(p) = self.poly.iter().find(|p| p.total_degree() > degree) {
            return Err(Error::DegreeExceedsBound { index: vec![p.total_degree()], bound: vec![degree] });
        }
        let mut acc = if self.poly.is_empty() {
            BallPowerSeries::new(vec![CPoly::zero(d); d], degree)?
        } else {
            BallPowerSeries::new(self.poly.clone(), degree)?
        };
        for (c, g) in &self.maps {
            acc = acc.add(&g.series(degree)?.scale(*c))?;
        }
        Ok(acc)
    }

    pub fn tail_bound(&self, degree: usize) -> f64 {
        self.maps.iter().map(|(c, g)| c.norm() * g.tail_bound(degree)).sum()
    }

    /// `max ||f(z)|| - 1` over random interior points; positive when `f`
    /// leaves the ball.
    pub fn self_map_excess(&self, samples: usize, seed: u64) -> f64 {
        let mut r = rng(seed, 0xb4);
        (0..samples)
            .map(|_| {
                let z = random_ball_point(&mut r, self.dim(), 1.0);
                self.eval(&z).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() - 1.0
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallRow {
    pub d: usize,
    /// Coefficient norm of `T_1(F) - T_1(f)`.
    pub rho: f64,
    /// `||F - f||^2` on the sphere from the truncated series.
    pub lhs: f64,
    /// Bound on what the truncation leaves out of `lhs`: the exact value is
    /// in `[lhs, lhs + lhs_tail]`.
    pub lhs_tail: f64,
    /// `C(F) [d(d+1) rho^2 + sqrt(d(d+1)) rho]` with `C(F) = ||b||^2 / b_min`.
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    /// `rhs - lhs - lhs_tail`, nonnegative only when the truncation is
    /// certified not to matter.
    pub slack_certified: f64,
    /// Same with `b_min^2` in place of `b_min`.
    pub rhs_bmin_sq: f64,
    pub slack_bmin_sq: f64,
    pub self_map_excess: f64,
}

/// Evaluates both sides of the ball superresolution inequality for an
/// automorphism `F` (normalized to `b_0 = 1`) and a target `f`.
pub fn verify_ball_bound(f_map: &BallMap, f: &BallTarget, degree: usize, seed: u64) -> Result<BallRow> {
    let big_f = f_map.normalized()?;
    let d = big_f.dim();
    if f.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: f.dim() });
    }
    let b_min = big_f.b_min();
    if b_min <= 0.0 {
        return Err(Error::DenominatorVanishes { min: b_min });
    }
    let diff = big_f.series(degree)?.sub(&f.series(degree)?)?;
    let rho = diff.affine().coeff_norm();
    let lhs = sphere_l2_norm(&diff).powi(2);
    let tail = big_f.tail_bound(degree) + f.tail_bound(degree);
    // Parts above the cut are orthogonal to the truncation.
    let lhs_tail = tail * tail;
    let dd = (d * (d + 1)) as f64;
    let core = dd * rho * rho + dd.sqrt() * rho;
    let b2 = big_f.b_l2_sqr();
    let rhs = b2 / b_min * core;
    let rhs_bmin_sq = b2 / (b_min * b_min) * core;
    Ok(BallRow {
        d,
        rho,
        lhs,
        lhs_tail,
        rhs,
        slack: rhs - lhs,
        slack_certified: rhs - lhs - lhs_tail,
        rhs_bmin_sq,
        slack_bmin_sq: rhs_bmin_sq - lhs,
        self_map_excess: f.self_map_excess(2000, seed),
    })
}
