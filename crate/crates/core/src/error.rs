use thiserror::Error;

/// Lowest working precision tried by the automatic precision policy.
pub const INITIAL_PRECISION: u32 = 128;
/// Hard cap on working precision; exceeding it is a fault, never a silent pass.
pub const PRECISION_CAP: u32 = 8192;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A comparison or certification could not be decided at this precision.
    /// Retrying with more bits is expected to succeed.
    #[error("insufficient precision at {bits} bits: {what} (retry with more bits)")]
    InsufficientPrecision { bits: u32, what: String },

    #[error("precision cap of {cap} bits reached: {what}")]
    PrecisionCap { cap: u32, what: String },

    #[error("expansion would produce {count} terms (cap {cap}); reduce T")]
    TermOverflow { count: u128, cap: usize },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        Error::Io(format!("{}: {e}", path.display()))
    }

    pub(crate) fn precision(bits: u32, what: impl Into<String>) -> Self {
        Error::InsufficientPrecision {
            bits,
            what: what.into(),
        }
    }
}

/// Runs `f` at 128 bits, doubling on [`Error::InsufficientPrecision`] until the
/// 8192-bit cap. Returns the result together with the precision that succeeded.
pub fn with_precision_policy<T, F>(start: u32, mut f: F) -> Result<(T, u32)>
where
    F: FnMut(u32) -> Result<T>,
{
    let mut bits = start.max(64);
    loop {
        match f(bits) {
            Ok(v) => return Ok((v, bits)),
            Err(Error::InsufficientPrecision { what, .. }) => {
                if bits >= PRECISION_CAP {
                    return Err(Error::PrecisionCap {
                        cap: PRECISION_CAP,
                        what,
                    });
                }
                bits = (bits * 2).min(PRECISION_CAP);
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_doubles_until_success() {
        let mut seen = vec![];
        let (v, bits) = with_precision_policy(INITIAL_PRECISION, |b| {
            seen.push(b);
            if b < 512 {
                Err(Error::precision(b, "too coarse"))
            } else {
                Ok(b * 2)
            }
        })
        .unwrap();
        assert_eq!(seen, vec![128, 256, 512]);
        assert_eq!((v, bits), (1024, 512));
    }

    #[test]
    fn policy_stops_at_cap() {
        let err = with_precision_policy::<(), _>(INITIAL_PRECISION, |b| {
            Err(Error::precision(b, "never"))
        })
        .unwrap_err();
        assert!(matches!(err, Error::PrecisionCap { cap: 8192, .. }));
    }

    #[test]
    fn policy_passes_other_errors_through() {
        let err = with_precision_policy::<(), _>(128, |_| Err(Error::invalid("k"))).unwrap_err();
        assert_eq!(err, Error::InvalidArgument("k".into()));
    }
}
