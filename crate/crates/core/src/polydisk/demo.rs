use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::multipoly::CPoly;
use crate::sampling::grid_max;

/// `f_lambda = z_1 + lambda z_2^2`.
pub fn f_lambda(lambda: f64) -> CPoly {
    CPoly::from_real_terms(2, &[(&[1, 0], 1.0), (&[0, 2], lambda)]).unwrap()
}

/// `g_lambda = (z_1 + z_2)/2 + lambda (z_1^2 - z_2^2)`.
pub fn g_lambda(lambda: f64) -> CPoly {
    CPoly::from_real_terms(2, &[(&[1, 0], 0.5), (&[0, 1], 0.5), (&[2, 0], lambda), (&[0, 2], -lambda)]).unwrap()
}

/// Terms of total degree at most one.
pub fn affine_section(p: &CPoly) -> CPoly {
    p.filter_terms(|a| a.total() <= 1)
}

/// Sup of `|p|` over the closed unit ball of `C^2`, taken on the sphere
/// `(cos s e^(ia), sin s e^(ib))`.
pub fn sup_on_ball2(p: &CPoly, n: usize) -> f64 {
    let f = |x: &[f64]| {
        let z = [Complex64::from_polar(x[0].cos(), x[1]), Complex64::from_polar(x[0].sin(), x[2])];
        p.eval(&z).norm()
    };
    grid_max(f, &[0.0, 0.0, 0.0], &[FRAC_PI_2, TAU, TAU], n, 2).1
}

/// Sup of `|p|` over the closed polydisk, taken on the torus.
pub fn sup_on_torus(p: &CPoly, n: usize) -> f64 {
    let d = p.dim();
    let f = |x: &[f64]| {
        let z: Vec<Complex64> = x.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        p.eval(&z).norm()
    };
    grid_max(f, &vec![0.0; d], &vec![TAU; d], n, 2).1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DemoRow {
    pub lambda: f64,
    pub sup_f: f64,
    pub sup_g: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoReport {
    pub rows: Vec<DemoRow>,
    /// Whether every family member has exactly the affine section of the
    /// `lambda = 0` member.
    pub affine_fixed: bool,
}

/// `lambda = k/40` for `k = 0..=10`, eleven points on `[0, 1/4]`.
pub fn demo_lambdas() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 40.0).collect()
}

/// Two families of self-maps sharing their affine Taylor sections: `f_lambda`
/// on the ball and `g_lambda` on the bidisk. Sup norms are estimated on the
/// boundary with a grid of `n` points per angle plus local refinement.
pub fn nonuniqueness_demo(lambdas: &[f64], n: usize) -> DemoReport {
    let (f0, g0) = (affine_section(&f_lambda(0.0)), affine_section(&g_lambda(0.0)));
    let mut affine_fixed = true;
    let rows = lambdas
        .iter()
        .map(|&lambda| {
            let (f, g) = (f_lambda(lambda), g_lambda(lambda));
            affine_fixed &= affine_section(&f) == f0 && affine_section(&g) == g0;
            DemoRow { lambda, sup_f: sup_on_ball2(&f, n), sup_g: sup_on_torus(&g, 8 * n) }
        })
        .collect();
    DemoReport { rows, affine_fixed }
}
