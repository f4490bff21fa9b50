//! Certified scans of the inequalities the finiteness argument rests on:
//! the dominant-root window, the Binet residual bound, the size bounds
//! `alpha^(n-2) < F_n < alpha^(n-1)` and the gcd bound
//! `gcd(F_x - 1, F_y - 1) < alpha^(kx/(k+1))`.
//!
//! Every check compares an exact integer against an enclosure and passes only
//! when the enclosure is strictly on the correct side. Undecided comparisons
//! raise the working precision; decided failures are reported as data.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::charpoly::{all_roots, binet_coefficients, RootSet};
use crate::error::{with_precision_policy, Error, Result, INITIAL_PRECISION};
use crate::interval::{Dyadic, Interval};
use crate::sequence::SequenceCache;

#[derive(Clone, Debug, Serialize)]
pub struct BinetResidualRecord {
    pub k: usize,
    pub n: u64,
    /// Enclosure of `F_n - f_1 alpha_1^n`.
    pub residual: Interval,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeBoundRecord {
    pub k: usize,
    pub n: u64,
    /// `alpha^(n-2) < F_n`
    pub lower_ok: bool,
    /// `F_n < alpha^(n-1)`
    pub upper_ok: bool,
}

impl SizeBoundRecord {
    pub fn ok(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GcdScanRecord {
    pub k: usize,
    pub x: u64,
    pub y: u64,
    #[serde(serialize_with = "crate::json::big")]
    pub gcd_value: BigInt,
    /// Enclosure of `alpha_1^(kx/(k+1))`.
    pub bound: Interval,
    pub ok: bool,
}

/// `Some(true)` when `v < x` for every point, `Some(false)` when decided
/// otherwise (including equality with a point enclosure), `None` if undecided.
fn int_below(v: &BigInt, x: &Interval) -> Option<bool> {
    match x.cmp_dyadic(&Dyadic::from(v)) {
        Some(Ordering::Greater) => Some(true),
        Some(_) => Some(false),
        None => None,
    }
}

fn int_above(v: &BigInt, x: &Interval) -> Option<bool> {
    match x.cmp_dyadic(&Dyadic::from(v)) {
        Some(Ordering::Less) => Some(true),
        Some(_) => Some(false),
        None => None,
    }
}

fn undecided(bits: u32, what: String) -> Error {
    Error::precision(bits, what)
}

/// True iff the certified dominant root lies strictly inside `(2 - 1/k, 2)`.
pub fn verify_root_window(k: usize) -> Result<bool> {
    let (ok, _) = with_precision_policy(INITIAL_PRECISION, |bits| {
        let roots = all_roots(k, bits)?;
        root_window(&roots)
    })?;
    Ok(ok)
}

pub fn root_window(roots: &RootSet) -> Result<bool> {
    let k = roots.k() as i64;
    let d = roots.dominant();
    let left = BigRational::new(BigInt::from(2 * k - 1), BigInt::from(k));
    let lo = d.lo().to_rational();
    let hi = d.hi().to_rational();
    let two = BigRational::from_integer(BigInt::from(2));
    if left < lo && hi < two {
        Ok(true)
    } else if hi <= left || lo >= two {
        Ok(false)
    } else {
        Err(undecided(d.prec(), "dominant enclosure straddles a window end".into()))
    }
}

/// Both size bounds for each `n` in `2..=n_max`. At `n = 2` the lower bound
/// reads `1 < 1` and is reported as failing.
pub fn verify_size_bounds(k: usize, n_max: u64) -> Result<Vec<SizeBoundRecord>> {
    if n_max < 2 {
        return Err(Error::invalid("n_max must be at least 2"));
    }
    let seq = SequenceCache::with_terms(k, n_max as i64)?;
    let (out, _) = with_precision_policy(INITIAL_PRECISION, |bits| {
        let roots = all_roots(k, bits)?;
        let a = roots.dominant();
        let mut pow = Interval::one(bits); // alpha^(n-2)
        let mut out = Vec::with_capacity(n_max as usize);
        for n in 2..=n_max {
            let next = &pow * a; // alpha^(n-1)
            let f = seq.get(n as i64).unwrap();
            let lower_ok = int_above(f, &pow)
                .ok_or_else(|| undecided(bits, format!("size lower bound at n={n}")))?;
            let upper_ok = int_below(f, &next)
                .ok_or_else(|| undecided(bits, format!("size upper bound at n={n}")))?;
            out.push(SizeBoundRecord {
                k,
                n,
                lower_ok,
                upper_ok,
            });
            pow = next;
        }
        Ok(out)
    })?;
    Ok(out)
}

/// Residuals `F_n - f_1 alpha^n` for `n` in `0..=n_max`. The bound is only
/// claimed for `n >= 1`; the `n = 0` record is informational.
pub fn verify_binet_residuals(k: usize, n_max: u64) -> Result<Vec<BinetResidualRecord>> {
    if n_max < 1 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let seq = SequenceCache::with_terms(k, n_max as i64)?;
    let half = Dyadic::one().mul_pow2(-1);
    let neg_half = half.neg();
    let (out, _) = with_precision_policy(INITIAL_PRECISION, |bits| {
        let roots = all_roots(k, bits)?;
        let f1 = binet_coefficients(&roots)?.f1().clone();
        let a = roots.dominant();
        let mut pow = Interval::one(bits);
        let mut out = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max {
            let f = Interval::from_int(seq.get(n as i64).unwrap().clone(), bits);
            let residual = &f - &(&f1 * &pow);
            let ok = residual.strictly_within(&neg_half, &half);
            let decided_bad = residual.hi() <= &neg_half || residual.lo() >= &half;
            if !ok && !decided_bad {
                return Err(undecided(bits, format!("Binet residual at n={n}")));
            }
            out.push(BinetResidualRecord {
                k,
                n,
                residual,
                ok,
            });
            pow = &pow * a;
        }
        Ok(out)
    })?;
    Ok(out)
}

/// One record per pair `3 <= y < x <= x_max`. A failing pair is reported,
/// never raised.
pub fn gcd_scan(k: usize, x_max: u64) -> Result<Vec<GcdScanRecord>> {
    gcd_scan_range(k, 4, x_max)
}

/// [`gcd_scan`] restricted to `x` in `x_min..=x_max` (for partitioned runs).
pub fn gcd_scan_range(k: usize, x_min: u64, x_max: u64) -> Result<Vec<GcdScanRecord>> {
    if x_max < 4 {
        return Err(Error::invalid("x_max must be at least 4"));
    }
    let x_min = x_min.max(4);
    let seq = SequenceCache::with_terms(k, x_max as i64)?;
    let one = BigInt::one();
    let (out, _) = with_precision_policy(INITIAL_PRECISION, |bits| {
        let roots = all_roots(k, bits)?;
        let a = roots.dominant();
        let mut out = Vec::new();
        for x in x_min..=x_max {
            let bound = a.powi(k as u64 * x).nth_root(k as u32 + 1)?;
            let fx = seq.get(x as i64).unwrap() - &one;
            for y in 3..x {
                let fy = seq.get(y as i64).unwrap() - &one;
                let d = fx.gcd(&fy);
                let ok = int_below(&d, &bound)
                    .ok_or_else(|| undecided(bits, format!("gcd bound at x={x} y={y}")))?;
                out.push(GcdScanRecord {
                    k,
                    x,
                    y,
                    gcd_value: d,
                    bound: bound.clone(),
                    ok,
                });
            }
        }
        Ok(out)
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn root_window_examples() {
        for k in [2, 3, 10] {
            assert!(verify_root_window(k).unwrap());
        }
        // oracle for k = 10: f64 bisection puts alpha_1 above 1.9
        assert!(all_roots(10, 128).unwrap().dominant().lo() > &Dyadic::from_f64(1.9));
    }

    #[test]
    fn size_bound_examples() {
        let r = verify_size_bounds(2, 10).unwrap();
        let last = r.last().unwrap();
        assert_eq!(last.n, 10);
        assert!(last.ok());
        // phi^8 ~ 46.98 < 55 < phi^9 ~ 76.01, by f64 evaluation
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(phi.powi(8) < 55.0 && 55.0 < phi.powi(9));

        let r = verify_size_bounds(3, 5).unwrap();
        assert_eq!(r[0].n, 2);
        assert!(!r[0].lower_ok, "1 < 1 must fail at n = 2");
        assert!(r[0].upper_ok);

        let r = verify_size_bounds(4, 50).unwrap();
        assert!(r.iter().filter(|x| x.n >= 3).all(|x| x.ok()));
        assert!(verify_size_bounds(4, 1).is_err());
    }

    #[test]
    fn binet_residual_examples() {
        let r = verify_binet_residuals(2, 1).unwrap();
        assert_eq!(r.len(), 2);
        // n = 0: -f_1 ~ -0.447
        assert!((r[0].residual.to_f64() + 0.447_213_595_5).abs() < 1e-9);
        assert!(r[0].ok);
        // n = 1: 1 - phi / sqrt 5 ~ 0.2764
        assert!((r[1].residual.to_f64() - 0.276_393_202_25).abs() < 1e-9);
        // F_10 = 149 and f_1 alpha^10 ~ 148.98 (float oracle), so zeta ~ +0.0198
        let r = verify_binet_residuals(3, 10).unwrap();
        let z = r[10].residual.to_f64();
        assert!(r[10].ok && (z - 0.019_830_78).abs() < 1e-6, "{z}");
    }

    #[test]
    fn binet_residuals_up_to_k12() {
        for k in 11..=12 {
            let r = verify_binet_residuals(k, 200).unwrap();
            assert!(r.iter().skip(1).all(|x| x.ok), "k={k}");
        }
    }

    #[test]
    fn gcd_examples() {
        let recs = gcd_scan(2, 7).unwrap();
        let r = recs.iter().find(|r| r.x == 7 && r.y == 5).unwrap();
        assert_eq!(r.gcd_value, BigInt::from(4));
        // phi^(14/3) ~ 9.447
        assert!((r.bound.to_f64() - 9.447).abs() < 1e-3);
        assert!(r.ok);
        let r = recs.iter().find(|r| r.x == 4 && r.y == 3).unwrap();
        assert_eq!(r.gcd_value, BigInt::one());

        let recs = gcd_scan(3, 6).unwrap();
        let r = recs.iter().find(|r| r.x == 6 && r.y == 5).unwrap();
        assert_eq!(r.gcd_value, BigInt::from(6));
        assert!((r.bound.to_f64() - 15.5).abs() < 0.1);
        assert!(r.ok);
        assert!(gcd_scan(3, 3).is_err());
    }

    #[test]
    fn gcd_divides_both() {
        let seq = SequenceCache::with_terms(4, 40).unwrap();
        for r in gcd_scan(4, 40).unwrap() {
            let fx: BigInt = seq.get(r.x as i64).unwrap() - 1;
            let fy: BigInt = seq.get(r.y as i64).unwrap() - 1;
            assert!((fx % &r.gcd_value).is_zero() && (fy % &r.gcd_value).is_zero());
            assert!(r.ok);
        }
    }

    #[test]
    fn record_counts() {
        // pairs 3 <= y < x <= 20
        assert_eq!(gcd_scan(2, 20).unwrap().len(), (4..=20).map(|x| x - 3).sum::<usize>());
        assert_eq!(verify_size_bounds(2, 20).unwrap().len(), 19);
    }
}
