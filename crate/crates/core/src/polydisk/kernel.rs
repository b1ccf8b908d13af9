use num_complex::Complex64;
use serde::Serialize;

use crate::phase::FourierTable;

/// `H(z, xi) = 2 / prod (1 - z_j conj(xi_j)) - 1`.
pub fn kernel_h(z: &[Complex64], xi: &[Complex64]) -> Complex64 {
    assert_eq!(z.len(), xi.len(), "dimension mismatch");
    let prod: Complex64 = z.iter().zip(xi).map(|(a, x)| 1.0 - a * x.conj()).product();
    2.0 / prod - 1.0
}

/// `prod (1 - |z_j|^2) / |1 - z_j conj(xi_j)|^2`.
pub fn poisson_szego(z: &[Complex64], xi: &[Complex64]) -> f64 {
    assert_eq!(z.len(), xi.len(), "dimension mismatch");
    z.iter().zip(xi).map(|(a, x)| (1.0 - a.norm_sqr()) / (1.0 - a * x.conj()).norm_sqr()).product()
}

/// A Fourier coefficient that should vanish for a pluriharmonic measure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedSignViolation {
    pub alpha: Vec<i64>,
    pub modulus: f64,
}

/// Lists every mixed-sign index (some entry positive and another negative)
/// whose coefficient exceeds `tol` in modulus. Empty means the table is
/// consistent with a pluriharmonic measure.
pub fn pluriharmonic_check(table: &FourierTable, tol: f64) -> Vec<MixedSignViolation> {
    table
        .iter()
        .filter(|(a, _)| a.iter().any(|&x| x > 0) && a.iter().any(|&x| x < 0))
        .filter(|(_, c)| c.norm() > tol)
        .map(|(alpha, c)| MixedSignViolation { alpha, modulus: c.norm() })
        .collect()
}
