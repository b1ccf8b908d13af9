//! One-variable Schur algorithm: parameters, Wall polynomials, Blaschke
//! reconstruction and the explicit superresolution bound.

mod chain;
mod superres;
mod wall;

pub use chain::{schur_parameters, schur_parameters_raw, IntermediateTaylorTable, SchurChain, UNIT_TOL};
pub use superres::{
    min_modulus_on_circle, perturbation_family, superres_bound_1d, taylor_gap, verify_superres_1d, wall_lipschitz,
    Certificate, DiskGrid, SchurRow,
};
pub use wall::{
    blaschke_from_chain, schur_recombine, wall_from_parameters, wall_polynomials, RationalSchur, Recombined,
    SchurFunction, WallQuadruple,
};
