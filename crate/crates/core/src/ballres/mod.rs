//! Degree-one rational self-maps of the unit ball of `C^d`, sphere `L^2`
//! norms, and the affine-data superresolution inequality for automorphisms.

mod bound;
mod map;
mod series;

pub use bound::{verify_ball_bound, BallRow, BallTarget, SERIES_DEGREE};
pub use map::{ball_automorphism, random_automorphism, BallMap};
pub use series::{sphere_l2_norm, sphere_l2_sqr, sphere_mean, sphere_mean_rotated, sphere_weight, BallPowerSeries};
