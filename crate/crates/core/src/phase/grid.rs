use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polydisk::Herglotz;

/// Relative tolerance for `Re phi >= 0`.
const HERGLOTZ_TOL: f64 = 1e-8;
/// Numerator or denominator values below this count as a boundary zero.
const ZERO_TOL: f64 = 1e-12;
/// Multiple of the evaluation condition number allowed on top of
/// `HERGLOTZ_TOL` for rational sources.
const COND_FACTOR: f64 = 64.0;

/// Samples of the phase function `g = 1/2 - arg(phi)/pi` on the uniform
/// `N^d` grid of the torus, point `k` at angles `2 pi k_j / N`, stored row
/// major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    dim: usize,
    n: usize,
    samples: Vec<f64>,
    radii: Vec<f64>,
    converged: bool,
}

/// Radii used to approach the torus when boundary values must be taken as
/// radial limits, with the pointwise Cauchy stopping tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSchedule {
    pub radii: Vec<f64>,
    pub tol: f64,
}

impl Default for RadialSchedule {
    fn default() -> Self {
        RadialSchedule { radii: (4..=14).map(|k| 1.0 - 2f64.powi(-k)).collect(), tol: 1e-6 }
    }
}

impl PhaseGrid {
    pub fn new(dim: usize, n: usize, samples: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::Config(format!("grid size {n} is not a power of two")));
        }
        let want = n.checked_pow(dim as u32).ok_or_else(|| Error::Config("grid too large".into()))?;
        if samples.len() != want {
            return Err(Error::DimensionMismatch { expected: want, got: samples.len() });
        }
        Ok(PhaseGrid { dim, n, samples, radii, converged: true })
    }

    /// Samples `f` directly at the grid points.
    pub fn from_fn(dim: usize, n: usize, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        let total = n.pow(dim as u32);
        let samples = (0..total).into_par_iter().map(|k| f(&angles(k, dim, n))).collect();
        PhaseGrid::new(dim, n, samples, vec![1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// False when the radial schedule ran out before the Cauchy test passed.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Angles of grid point `k`.
    pub fn angles(&self, k: usize) -> Vec<f64> {
        angles(k, self.dim, self.n)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Binary layout: `PHG1`, then `d`, `N` and the radius count as `u32`
    /// little endian, the radii, then the samples as `f64` little endian.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(b"PHG1")?;
        for v in [self.dim, self.n, self.radii.len()] {
            w.write_all(&(v as u32).to_le_bytes())?;
        }
        for v in self.radii.iter().chain(&self.samples) {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"PHG1" {
            return Err(Error::Format("not a phase grid file".into()));
        }
        let mut u = [0u8; 4];
        let mut header = [0usize; 3];
        for h in header.iter_mut() {
            r.read_exact(&mut u)?;
            *h = u32::from_le_bytes(u) as usize;
        }
        let [dim, n, nr] = header;
        if dim == 0 || !n.is_power_of_two() {
            return Err(Error::Format(format!("invalid header d={dim} N={n}")));
        }
        let total = n.checked_pow(dim as u32).ok_or_else(|| Error::Format("grid too large".into()))?;
        let mut read_f64s = |count: usize| -> Result<Vec<f64>> {
            let mut buf = vec![0u8; 8 * count];
            r.read_exact(&mut buf).map_err(|_| Error::Format("truncated file".into()))?;
            Ok(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        };
        let radii = read_f64s(nr)?;
        let samples = read_f64s(total)?;
        PhaseGrid::new(dim, n, samples, radii)
    }
}

pub(crate) fn angles(mut k: usize, dim: usize, n: usize) -> Vec<f64> {
    let mut t = vec![0.0; dim];
    for j in (0..dim).rev() {
        t[j] = TAU * (k % n) as f64 / n as f64;
        k /= n;
    }
    t
}

/// `1/2 - arg(phi)/pi`, checking the Herglotz condition.
pub fn phase_value(phi: Complex64) -> Result<f64> {
    phase_value_tol(phi, HERGLOTZ_TOL)
}

fn phase_value_tol(phi: Complex64, tol: f64) -> Result<f64> {
    if !(phi.re.is_finite() && phi.im.is_finite()) || phi == Complex64::default() {
        return Err(Error::BranchCut { re: phi.re, im: phi.im });
    }
    if phi.re < -tol * phi.norm().max(1.0) {
        return Err(Error::NotHerglotz { re: phi.re, im: phi.im });
    }
    let arg = phi.arg();
    if arg.abs() > FRAC_PI_2 + tol {
        return Err(Error::PhaseOutOfRange { phase: arg });
    }
    Ok((0.5 - arg / PI).clamp(0.0, 1.0))
}

/// Phase function of `phi` on the `N^d` torus grid.
///
/// Rational sources are evaluated on the torus directly; grid points where
/// the numerator or denominator vanishes are moved by half a cell in every
/// coordinate. Other sources use radial limits along `schedule`.
pub fn phase_function(phi: &dyn Herglotz, n: usize, schedule: &RadialSchedule) -> Result<PhaseGrid> {
    let dim = phi.dim();
    if !n.is_power_of_two() {
        return Err(Error::Config(format!("grid size {n} is not a power of two")));
    }
    let total = n.pow(dim as u32);
    if let Some((num, den)) = phi.rational_parts() {
        let half = PI / n as f64;
        let l1 = |p: &crate::multipoly::CPoly| p.terms().map(|(_, c)| c.norm()).sum::<f64>();
        let (l1_num, l1_den) = (l1(num), l1(den));
        let samples = (0..total)
            .into_par_iter()
            .map(|k| {
                let t = angles(k, dim, n);
                let mut xi: Vec<Complex64> = t.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
                let (mut a, mut b) = (num.eval(&xi), den.eval(&xi));
                if a.norm() <= ZERO_TOL || b.norm() <= ZERO_TOL {
                    xi = t.iter().map(|&a| Complex64::from_polar(1.0, a + half)).collect();
                    a = num.eval(&xi);
                    b = den.eval(&xi);
                }
                // Relative rounding error of num/den near a boundary zero.
                let cond = f64::EPSILON * (l1_num / a.norm() + l1_den / b.norm());
                phase_value_tol(a / b, HERGLOTZ_TOL.max(COND_FACTOR * cond))
            })
            .collect::<Result<Vec<f64>>>()?;
        return PhaseGrid::new(dim, n, samples, vec![1.0]);
    }

    let level = |r: f64| -> Result<Vec<f64>> {
        (0..total)
            .into_par_iter()
            .map(|k| {
                let z: Vec<Complex64> = angles(k, dim, n).iter().map(|&a| Complex64::from_polar(r, a)).collect();
                phase_value(phi.eval(&z))
            })
            .collect()
    };
    let mut used = Vec::new();
    let mut prev: Option<Vec<f64>> = None;
    for &r in &schedule.radii {
        let cur = level(r)?;
        used.push(r);
        if let Some(p) = &prev {
            let diff = p.iter().zip(&cur).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if diff < schedule.tol {
                return PhaseGrid::new(dim, n, cur, used);
            }
        }
        prev = Some(cur);
    }
    let samples = prev.ok_or_else(|| Error::Config("empty radial schedule".into()))?;
    let mut g = PhaseGrid::new(dim, n, samples, used)?;
    g.converged = false;
    Ok(g)
}
