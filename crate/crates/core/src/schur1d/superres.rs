use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::chain::{schur_parameters, schur_parameters_raw, SchurChain};
use super::wall::{blaschke_from_chain, schur_recombine, wall_dense, wall_from_parameters, RationalSchur};
use crate::error::{Error, Result};
use crate::sampling::{golden_section_min, rng, uniform_in_real_ball};

/// Finite-difference step for the Lipschitz estimate.
const FD_STEP: f64 = 1e-5;
/// Points of the eps-ball at which the Jacobian is sampled.
const LIPSCHITZ_SAMPLES: usize = 64;

/// The constants of the one-variable superresolution bound for a fixed
/// Blaschke product. `m` is an empirical Lipschitz constant, not a proven one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub l: f64,
    pub m: f64,
    pub eps: f64,
}

impl Certificate {
    /// `L - M eps`; the certificate is meaningful only when positive.
    pub fn margin(&self) -> f64 {
        self.l - self.m * self.eps
    }

    /// `4 M eps / ((L - M eps)(1 - |z|))` at gap `eps`, `+inf` once the
    /// margin is gone.
    pub fn bound_at(&self, eps: f64, z_abs: f64) -> f64 {
        let margin = self.l - self.m * eps;
        if margin <= 0.0 {
            return f64::INFINITY;
        }
        4.0 * self.m * eps / (margin * (1.0 - z_abs))
    }

    pub fn bound(&self, z_abs: f64) -> f64 {
        self.bound_at(self.eps, z_abs)
    }
}

/// Checks that `f_taylor` (length `n+1`) is the data of a degree-`n`
/// Blaschke product and returns its chain.
fn blaschke_chain(f_taylor: &[Complex64]) -> Result<SchurChain> {
    let n = f_taylor.len().checked_sub(1).ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
    let (chain, _) = schur_parameters(f_taylor)?;
    if !chain.terminated() {
        return Err(Error::NotTerminated);
    }
    if chain.last_index() != n {
        return Err(Error::WrongTermination { expected: n, got: chain.last_index() });
    }
    Ok(chain)
}

/// `min |B_n|` over the closed disk, taken on the circle (`B_n` has no
/// zeros inside) from 2^12 samples refined by golden-section search.
pub fn min_modulus_on_circle(b: &[Complex64]) -> f64 {
    let eval = |t: f64| {
        let z = Complex64::from_polar(1.0, t);
        b.iter().rev().fold(Complex64::default(), |acc, c| acc * z + c).norm()
    };
    let samples = 1usize << 12;
    let h = std::f64::consts::TAU / samples as f64;
    let (best_k, best) =
        (0..samples)
            .map(|k| (k, eval(k as f64 * h)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let t0 = best_k as f64 * h;
    golden_section_min(eval, t0 - h, t0 + h, 60).1.min(best)
}

/// Lipschitz estimate for the coefficients of `A_n` and `B_n` as functions
/// of the real and imaginary parts of the Taylor data: the largest summed
/// Frobenius norm of the coefficient Jacobians over sampled points of the
/// eps-ball.
pub fn wall_lipschitz(f_taylor: &[Complex64], eps: f64, seed: u64) -> f64 {
    let center: Vec<f64> = f_taylor.iter().flat_map(|c| [c.re, c.im]).collect();
    let mut r = rng(seed, 0x5c1);
    let points: Vec<Vec<f64>> = (0..LIPSCHITZ_SAMPLES)
        .map(|i| if i == 0 { center.clone() } else { uniform_in_real_ball(&mut r, &center, eps) })
        .collect();
    points.par_iter().map(|p| jacobian_norm(p)).collect::<Vec<_>>().into_iter().fold(0.0, f64::max)
}

fn wall_coeffs(x: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let data: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let (a, b, _, _) = wall_dense(&schur_parameters_raw(&data));
    (a, b)
}

fn jacobian_norm(x: &[f64]) -> f64 {
    let n = x.len() / 2;
    // sq[k] accumulates the squared Frobenius norm of the Jacobian of the
    // k-th coefficient, separately for A and B.
    let mut sq_a = vec![0.0; n];
    let mut sq_b = vec![0.0; n];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + FD_STEP;
        let (ap, bp) = wall_coeffs(&xp);
        xp[i] = x[i] - FD_STEP;
        let (am, bm) = wall_coeffs(&xp);
        xp[i] = x[i];
        for k in 0..n {
            sq_a[k] += ((ap[k] - am[k]) / (2.0 * FD_STEP)).norm_sqr();
            sq_b[k] += ((bp[k] - bm[k]) / (2.0 * FD_STEP)).norm_sqr();
        }
    }
    let sum = |v: &[f64]| v.iter().map(|s| s.sqrt()).sum::<f64>();
    sum(&sq_a).max(sum(&sq_b))
}

/// `L`, `M` and the resulting bound for a degree-`n` Blaschke product with
/// Taylor data `c_0..c_n`.
pub fn superres_bound_1d(f_taylor: &[Complex64], eps: f64, seed: u64) -> Result<Certificate> {
    let chain = blaschke_chain(f_taylor)?;
    let (_, b, _, _) = wall_dense(chain.parameters());
    let l = min_modulus_on_circle(&b);
    let m = wall_lipschitz(f_taylor, eps, seed);
    let cert = Certificate { l, m, eps };
    if cert.margin() <= 0.0 {
        return Err(Error::EpsilonTooLarge { margin: cert.margin() });
    }
    Ok(cert)
}

/// Sampling grid for sup distances: circles of the given radii.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct DiskGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl DiskGrid {
    /// Radii `0, 0.1, ..., max_radius` in steps of 0.1.
    pub fn uniform(max_radius: f64, angles: usize) -> Self {
        let steps = (max_radius * 10.0).round() as usize;
        DiskGrid { radii: (0..=steps).map(|k| (k as f64 / 10.0).min(max_radius)).collect(), angles }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchurRow {
    pub eps: f64,
    pub z_radius: f64,
    pub max_distance: f64,
    pub certified_bound: f64,
    pub violation: f64,
}

/// Compares a Blaschke product against Schur functions with nearby Taylor
/// data. One row per perturbation and radius, in input order; `eps` is the
/// perturbation's actual Taylor gap and the bound uses the certificate
/// constants computed for the largest gap in the family.
pub fn verify_superres_1d(
    f_taylor: &[Complex64],
    perturbations: &[RationalSchur],
    grid: &DiskGrid,
    seed: u64,
) -> Result<(Certificate, Vec<SchurRow>)> {
    let chain = blaschke_chain(f_taylor)?;
    let f = blaschke_from_chain(&chain)?;
    let n = f_taylor.len() - 1;
    let gaps: Vec<f64> = perturbations.iter().map(|g| taylor_gap(f_taylor, &g.taylor(n))).collect();
    let eps_max = gaps.iter().copied().fold(0.0, f64::max);
    let (_, b, _, _) = wall_dense(chain.parameters());
    let cert = Certificate { l: min_modulus_on_circle(&b), m: wall_lipschitz(f_taylor, eps_max, seed), eps: eps_max };
    let rows: Vec<Vec<SchurRow>> = perturbations
        .par_iter()
        .zip(gaps.par_iter())
        .map(|(g, &eps)| {
            grid.radii
                .iter()
                .map(|&r| {
                    let d = max_distance_on_circle(&f, g, r, grid.angles);
                    let bound = if eps == 0.0 { 0.0 } else { cert.bound_at(eps, r) };
                    SchurRow { eps, z_radius: r, max_distance: d, certified_bound: bound, violation: d - bound }
                })
                .collect()
        })
        .collect();
    Ok((cert, rows.into_iter().flatten().collect()))
}

pub fn taylor_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn max_distance_on_circle(f: &RationalSchur, g: &RationalSchur, r: f64, angles: usize) -> f64 {
    let count = if r == 0.0 { 1 } else { angles };
    (0..count)
        .map(|k| {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / angles as f64);
            (f.eval(z) - g.eval(z)).norm()
        })
        .fold(0.0, f64::max)
}

/// Seeded family of Schur functions near a Blaschke product of degree `n`:
/// the first `n` parameters are shifted, and the unimodular last parameter
/// is replaced by a strictly contractive tail. Each member's Taylor gap is
/// at most `max_eps`.
pub fn perturbation_family(
    f_taylor: &[Complex64],
    count: usize,
    max_eps: f64,
    seed: u64,
) -> Result<Vec<RationalSchur>> {
    let chain = blaschke_chain(f_taylor)?;
    let gam = chain.parameters();
    let n = gam.len() - 1;
    let mut r = rng(seed, 0x9e7);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let dir = uniform_in_real_ball(&mut r, &vec![0.0; 2 * n + 1], 1.0);
        let mut size = max_eps;
        loop {
            let g = perturbed_member(gam, &dir, size);
            if let Some(g) = g {
                if taylor_gap(f_taylor, &g.taylor(n)) <= max_eps {
                    out.push(g);
                    break;
                }
            }
            size /= 2.0;
        }
    }
    Ok(out)
}

fn perturbed_member(gam: &[Complex64], dir: &[f64], size: f64) -> Option<RationalSchur> {
    let n = gam.len() - 1;
    let mut params = Vec::with_capacity(n);
    for k in 0..n {
        let p = gam[k] + size * Complex64::new(dir[2 * k], dir[2 * k + 1]);
        if p.norm() >= 1.0 {
            return None;
        }
        params.push(p);
    }
    // Tail gamma_n (1 - tau)(1 - tau z) has sup norm 1 - tau^2 on the disk.
    let tau = size * dir[2 * n].abs().max(0.05);
    let lead = gam[n] * (1.0 - tau);
    let tail = RationalSchur::from_coeffs(&[lead, -lead * tau], &[Complex64::new(1.0, 0.0)]).ok()?;
    if params.is_empty() {
        return Some(tail);
    }
    Some(schur_recombine(wall_from_parameters(&params), tail).to_rational())
}
