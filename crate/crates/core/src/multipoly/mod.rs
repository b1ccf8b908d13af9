//! Multivariate polynomials, trigonometric polynomials on the torus, and
//! truncated power series.

mod cpoly;
mod index;
mod series;
mod trig;

pub use cpoly::CPoly;
pub use index::{IndexBox, MultiIndex};
pub use series::{series_divide, series_log, PowerSeries};
pub use trig::TrigPoly;
