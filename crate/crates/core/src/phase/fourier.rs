use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::grid::PhaseGrid;
use crate::error::{Error, Result};
use crate::multipoly::{series_log, IndexBox, MultiIndex, PowerSeries, TrigPoly};
use crate::polydisk::kernel_h;

/// Fourier coefficients `g^(alpha)` for `alpha` in the symmetric box
/// `|alpha_j| <= K_j`, stored densely row major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTable {
    bound: Vec<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl FourierTable {
    pub fn zeros(bound: Vec<usize>) -> Self {
        assert!(!bound.is_empty());
        let len = bound.iter().map(|k| 2 * k + 1).product();
        FourierTable { bound, re: vec![0.0; len], im: vec![0.0; len] }
    }

    pub fn dim(&self) -> usize {
        self.bound.len()
    }

    pub fn bound(&self) -> &[usize] {
        &self.bound
    }

    fn offset(&self, alpha: &[i64]) -> Option<usize> {
        if alpha.len() != self.dim() {
            return None;
        }
        let mut pos = 0;
        for (&a, &k) in alpha.iter().zip(&self.bound) {
            if a.unsigned_abs() as usize > k {
                return None;
            }
            pos = pos * (2 * k + 1) + (a + k as i64) as usize;
        }
        Some(pos)
    }

    fn index_at(&self, mut pos: usize) -> Vec<i64> {
        let mut a = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            let side = 2 * self.bound[j] + 1;
            a[j] = (pos % side) as i64 - self.bound[j] as i64;
            pos /= side;
        }
        a
    }

    pub fn get(&self, alpha: &[i64]) -> Option<Complex64> {
        self.offset(alpha).map(|p| Complex64::new(self.re[p], self.im[p]))
    }

    /// Panics outside the box.
    pub fn set(&mut self, alpha: &[i64], v: Complex64) {
        let p = self.offset(alpha).expect("index inside the table");
        self.re[p] = v.re;
        self.im[p] = v.im;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        (0..self.re.len()).map(move |p| (self.index_at(p), Complex64::new(self.re[p], self.im[p])))
    }

    /// `max |g^(-alpha) - conj(g^(alpha))|`, zero for real data.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        self.iter()
            .map(|(a, v)| {
                let neg: Vec<i64> = a.iter().map(|x| -x).collect();
                (self.get(&neg).unwrap() - v.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest coefficient difference over the indices of `Gamma_n`.
    pub fn max_diff_on(&self, other: &FourierTable, n: &IndexBox) -> f64 {
        n.iter()
            .map(|a| {
                let a: Vec<i64> = a.entries().iter().map(|&x| x as i64).collect();
                match (self.get(&a), other.get(&a)) {
                    (Some(x), Some(y)) => (x - y).norm(),
                    _ => f64::INFINITY,
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Equal-weight quadrature of `g(xi) conj(xi)^alpha` over the grid, as a
/// separable FFT. Exact for trigonometric polynomials of per-axis degree
/// below `N/2`.
pub fn fourier_coeffs(grid: &PhaseGrid, bound: &[usize]) -> Result<FourierTable> {
    let (d, n) = (grid.dim(), grid.n());
    if bound.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: bound.len() });
    }
    if bound.iter().any(|&k| 2 * k >= n) {
        return Err(Error::BoxTooLarge { bound: bound.to_vec(), n });
    }
    let mut data: Vec<Complex64> = grid.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let fft = FftPlanner::new().plan_fft_forward(n);
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        // Lines along `axis` start at (outer block, inner offset); gather,
        // transform and scatter each independently.
        let lines: Vec<Vec<Complex64>> = (0..data.len() / n)
            .into_par_iter()
            .map(|line| {
                let (outer, inner) = (line / stride, line % stride);
                let start = outer * block + inner;
                let mut buf: Vec<Complex64> = (0..n).map(|k| data[start + k * stride]).collect();
                fft.process(&mut buf);
                buf
            })
            .collect();
        for (line, buf) in lines.into_iter().enumerate() {
            let (outer, inner) = (line / stride, line % stride);
            let start = outer * block + inner;
            for (k, v) in buf.into_iter().enumerate() {
                data[start + k * stride] = v;
            }
        }
    }
    let scale = 1.0 / data.len() as f64;
    let mut table = FourierTable::zeros(bound.to_vec());
    for p in 0..table.re.len() {
        let alpha = table.index_at(p);
        let mut pos = 0;
        for &a in &alpha {
            pos = pos * n + a.rem_euclid(n as i64) as usize;
        }
        let v = data[pos] * scale;
        table.re[p] = v.re;
        table.im[p] = v.im;
    }
    Ok(table)
}

/// Phase coefficients from the Taylor section `T_n(phi)` alone:
/// `g^(0) = 1/2 - arg phi(0)/pi` and `g^(alpha) = i c_alpha(log phi)/(2 pi)`
/// for `0 != alpha in Gamma_n`.
///
/// The returned table spans `|alpha_j| <= n_j`; entries at `-alpha` are the
/// conjugates and mixed-sign entries are zero, as for any pluriharmonic
/// measure.
pub fn universal_l(taylor: &PowerSeries) -> Result<FourierTable> {
    let bx = taylor.index_box().clone();
    let log = series_log(taylor, &bx)?;
    let phi0 = taylor.constant_term();
    let mut table = FourierTable::zeros(bx.bound().entries().to_vec());
    for (alpha, c) in log.iter() {
        let a: Vec<i64> = alpha.entries().iter().map(|&x| x as i64).collect();
        let v = if alpha.is_zero() {
            Complex64::new(0.5 - phi0.arg() / PI, 0.0)
        } else {
            Complex64::new(0.0, 1.0) * c / (2.0 * PI)
        };
        table.set(&a, v);
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        table.set(&neg, v.conj());
    }
    Ok(table)
}

/// `Im psi(0) = log|phi(0)| / pi`, the normalization needed by
/// [`reconstruct_phi`].
pub fn im_psi_at_origin(phi0: Complex64) -> f64 {
    phi0.norm().ln() / PI
}

/// `phi(z) = i exp(pi Im psi(0)) exp(-i pi integral H(z, xi) g(xi))` with the
/// integral taken by equal-weight quadrature over the grid.
pub fn reconstruct_phi(grid: &PhaseGrid, im_psi_0: f64, z: &[Complex64]) -> Result<Complex64> {
    if z.len() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), got: z.len() });
    }
    let total = grid.samples().len();
    let integral: Complex64 = (0..total)
        .into_par_iter()
        .map(|k| {
            let xi: Vec<Complex64> = grid.angles(k).iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
            kernel_h(z, &xi) * grid.samples()[k]
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum::<Complex64>()
        / total as f64;
    let i = Complex64::new(0.0, 1.0);
    Ok(i * (PI * im_psi_0).exp() * (-i * PI * integral).exp())
}

/// Mean over the grid of `|g - chi_(P > 0)|`.
pub fn indicator_fit(grid: &PhaseGrid, p: &TrigPoly) -> f64 {
    let total = grid.samples().len();
    (0..total)
        .into_par_iter()
        .map(|k| {
            let chi = if p.eval_angles(&grid.angles(k)) > 0.0 { 1.0 } else { 0.0 };
            (grid.samples()[k] - chi).abs()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum::<f64>()
        / total as f64
}

/// Least-squares fit of `2g - 1` by a real trigonometric polynomial with
/// frequencies in `Gamma_n`, read off the Fourier table (the basis
/// `Re xi^alpha, Im xi^alpha` is orthogonal on the grid): `r_0 = 2 g^(0) - 1`,
/// `r_alpha = 4 Re g^(alpha)`, `s_alpha = 4 Im g^(alpha)`.
pub fn fit_indicator_poly(table: &FourierTable, n: &MultiIndex) -> Result<TrigPoly> {
    let bx = IndexBox::new(n.clone());
    let (mut cos, mut sin) = (Vec::with_capacity(bx.len()), Vec::with_capacity(bx.len()));
    for alpha in bx.iter() {
        let a: Vec<i64> = alpha.entries().iter().map(|&x| x as i64).collect();
        let v = table
            .get(&a)
            .ok_or(Error::DegreeExceedsBound { index: alpha.entries().to_vec(), bound: table.bound().to_vec() })?;
        if alpha.is_zero() {
            cos.push(2.0 * v.re - 1.0);
            sin.push(0.0);
        } else {
            cos.push(4.0 * v.re);
            sin.push(4.0 * v.im);
        }
    }
    TrigPoly::new(bx, cos, sin)
}
