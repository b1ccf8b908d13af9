//! Sublevel-set geometry of the indicator polynomial on the torus and the
//! polydisk superresolution experiment built on it.

mod admissible;
mod charts;
mod lambda;
mod sweep;

pub use admissible::{admissible_index, dominates, permutations, AdmissibleIndex};
pub use charts::{chart_map, psi, pullback_density, pushforward_q, ChartAtlas, PushforwardPoly};
pub use lambda::{default_eps_grid, lambda_decay_check, ls_slope, LambdaDecay, LambdaProfile, DEFAULT_POINTS};
pub use sweep::{
    default_ts, fit_two_term, snap_small, superres_sweep, ChartReport, ExperimentReport, SweepConfig, SweepRow,
    SweepSummary,
};
