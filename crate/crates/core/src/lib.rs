pub mod ballres;
pub mod error;
pub mod harness;
pub mod multipoly;
pub mod phase;
pub mod polydisk;
pub mod sampling;
pub mod schur1d;
pub mod semialg;

pub use error::{Error, Result};
