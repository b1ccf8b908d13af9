//! Rational inner and Cayley inner functions on the polydisk, the
//! Koranyi-Pukanszky kernels, and the nonuniqueness families.

mod demo;
mod herglotz;
mod kernel;
mod rif;

pub use demo::{
    affine_section, demo_lambdas, f_lambda, g_lambda, nonuniqueness_demo, sup_on_ball2, sup_on_torus, DemoReport,
    DemoRow,
};
pub use herglotz::{FnHerglotz, Herglotz, RationalHerglotz};
pub use kernel::{kernel_h, pluriharmonic_check, poisson_szego, MixedSignViolation};
pub use rif::{
    cayley, cayley_inverse, rif_from_denominator, rif_with_check, taylor_section, CayleyInner, RationalInner,
    StabilityCheck,
};
