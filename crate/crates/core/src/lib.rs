//! Verification and search toolkit for k-generalized Fibonacci numbers and
//! Diophantine triples `ab+1 = F_x`, `ac+1 = F_y`, `bc+1 = F_z`.

pub mod error;
pub mod interval;

pub use error::{Error, Result};
pub mod charpoly;
pub mod sequence;
pub mod bounds;
pub mod squares;
pub mod multindep;
pub mod triples;
pub mod asymptotics;
pub mod cli;
pub(crate) mod json;
