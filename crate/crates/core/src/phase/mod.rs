//! The exponential transform: phase functions on the torus, their Fourier
//! coefficients, the universal coefficient maps and reconstruction.

mod fourier;
mod grid;

pub use fourier::{
    fit_indicator_poly, fourier_coeffs, im_psi_at_origin, indicator_fit, reconstruct_phi, universal_l, FourierTable,
};
pub use grid::{phase_function, phase_value, PhaseGrid, RadialSchedule};
