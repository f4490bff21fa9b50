//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! Everything the crate certifies (root enclosures, Binet residuals, gcd
//! bounds, log embeddings) is computed with these types; a check passes only
//! when an interval lies strictly on the required side of its threshold.

mod complex;
mod dyadic;
pub mod elementary;
mod real;

pub use complex::{ComplexBall, ComplexInterval};
pub use dyadic::{Dyadic, Round};
pub use real::Interval;

use serde::Serialize;

/// JSON rendering of an enclosure: 30-significant-digit midpoint plus an
/// upward-rounded radius.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EnclosureRecord {
    pub mid: String,
    pub rad: String,
}

impl From<&Interval> for EnclosureRecord {
    fn from(x: &Interval) -> Self {
        let mid = x.mid();
        // cover the error of the 30-digit decimal midpoint as well
        let rad = x.rad().add(&mid.abs().mul_pow2(-96));
        EnclosureRecord {
            mid: mid.to_decimal(30),
            rad: rad.to_decimal_up(3),
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnclosureRecord::from(self).serialize(s)
    }
}
