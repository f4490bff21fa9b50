//! Enclosures of `ln`, `atan`, `pi` and complex argument built from
//! alternating / geometric Taylor tails with explicit remainder bounds.

use num_bigint::BigInt;

use super::complex::ComplexBall;
use super::dyadic::{Dyadic, Round};
use super::real::Interval;
use crate::error::{Error, Result};

const GUARD: u32 = 24;

/// `sum_{j<N} t^(2j+1)/(2j+1)` plus a symmetric bound on the tail.
/// `alternating` selects the atan series, otherwise atanh.
fn odd_series(t: &Interval, alternating: bool) -> Interval {
    let w = t.prec();
    let m = t.mag();
    let stop = Dyadic::one().mul_pow2(-(w as i64) - 4);
    let t2 = t.sqr();
    let mut pow = t.clone();
    let mut sum = Interval::zero(w);
    let mut j: i64 = 0;
    let mut mag_pow = m.clone();
    loop {
        let term = pow
            .checked_div(&Interval::from_int(2 * j + 1, w))
            .expect("odd denominators are nonzero");
        sum = if alternating && j % 2 == 1 {
            &sum - &term
        } else {
            &sum + &term
        };
        j += 1;
        pow = &pow * &t2;
        mag_pow = mag_pow.mul(&m).mul(&m).round(w, Round::Up);
        if mag_pow <= stop || m.is_zero() {
            break;
        }
    }
    // Remaining terms are bounded by |t|^(2j+1) * sum |t|^(2i) <= 2 |t|^(2j+1)
    // for |t| <= 1/2, and by the first omitted term for the alternating series.
    let tail = if alternating {
        mag_pow
    } else {
        mag_pow.mul_pow2(1)
    };
    sum.inflate(&tail)
}

fn ln2(w: u32) -> Interval {
    let third = Interval::from_int(1, w)
        .checked_div(&Interval::from_int(3, w))
        .unwrap();
    odd_series(&third, false).mul_pow2(1)
}

/// Natural log of a positive dyadic point.
pub fn ln_point(d: &Dyadic, prec: u32) -> Result<Interval> {
    if !d.is_positive() {
        return Err(Error::invalid("logarithm of non-positive value"));
    }
    let w = prec + GUARD;
    let mut e2 = d.floor_log2().unwrap();
    let mut r = d.mul_pow2(-e2);
    if r > Dyadic::from_f64(1.5) {
        r = r.mul_pow2(-1);
        e2 += 1;
    }
    let ri = Interval::point(r, w);
    let one = Interval::one(w);
    let t = (&ri - &one).checked_div(&(&ri + &one))?;
    let lnr = odd_series(&t, false).mul_pow2(1);
    let total = &ln2(w).mul_int(e2) + &lnr;
    Ok(total.with_prec(prec))
}

/// Natural log of a positive interval (monotone).
pub fn ln(x: &Interval) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::precision(x.prec(), "logarithm of interval touching zero"));
    }
    let p = x.prec();
    let lo = ln_point(x.lo(), p)?;
    let hi = ln_point(x.hi(), p)?;
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone(), p))
}

/// `atan` over an interval, via three half-angle reductions and the series.
pub fn atan(t: &Interval) -> Interval {
    let p = t.prec();
    let w = p + GUARD;
    let one = Interval::one(w);
    let mut u = t.with_prec(w);
    for _ in 0..3 {
        let s = (&one + &u.sqr()).sqrt().expect("1 + t^2 is positive");
        u = u.checked_div(&(&one + &s)).expect("denominator >= 2");
    }
    odd_series(&u, true).mul_pow2(3).with_prec(p)
}

pub fn pi(prec: u32) -> Interval {
    let w = prec + GUARD;
    let inv = |n: i64| {
        Interval::one(w)
            .checked_div(&Interval::from_int(n, w))
            .unwrap()
    };
    let a = atan(&inv(5)).mul_int(16);
    let b = atan(&inv(239)).mul_int(4);
    (&a - &b).with_prec(prec)
}

/// Argument in `(-pi, pi]` of a nonzero dyadic point.
pub fn arg_point(re: &Dyadic, im: &Dyadic, prec: u32) -> Result<Interval> {
    let w = prec + GUARD;
    if re.is_zero() && im.is_zero() {
        return Err(Error::invalid("argument of zero"));
    }
    let half_pi = pi(w).mul_pow2(-1);
    let out = if re.is_zero() {
        if im.is_positive() {
            half_pi
        } else {
            -&half_pi
        }
    } else {
        let q = Interval::point(im.clone(), w).checked_div(&Interval::point(re.clone(), w))?;
        let a = atan(&q);
        if re.is_positive() {
            a
        } else if im.is_negative() {
            &a - &pi(w)
        } else {
            &a + &pi(w)
        }
    };
    Ok(out.with_prec(prec))
}

/// Argument enclosure of every point of a disk not containing 0. Uses
/// `|arg z - arg c| <= asin(r/|c|) <= 2 r/|c|`.
pub fn arg_ball(b: &ComplexBall, prec: u32) -> Result<Interval> {
    let c = arg_point(&b.re, &b.im, prec)?;
    if b.radius.is_zero() {
        return Ok(c);
    }
    let m = b.center(prec + GUARD).abs()?;
    if m.lo() <= &b.radius {
        return Err(Error::precision(prec, "disk too wide for an argument enclosure"));
    }
    let spread = b
        .radius
        .mul_pow2(1)
        .div(m.lo(), prec + GUARD, Round::Up);
    Ok(c.inflate(&spread))
}

/// `2^bits`-scaled outward integer bounds of an interval.
pub fn fixed_point(x: &Interval, bits: i64) -> (BigInt, BigInt) {
    (x.lo().scaled(bits, Round::Down), x.hi().scaled(bits, Round::Up))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &Interval, v: f64, tol: f64) -> bool {
        (x.to_f64() - v).abs() < tol && x.width() < Dyadic::one().mul_pow2(-100)
    }

    #[test]
    fn ln_known_values() {
        let l2 = ln_point(&Dyadic::from_int(2), 128).unwrap();
        assert!(close(&l2, std::f64::consts::LN_2, 1e-15));
        let l10 = ln_point(&Dyadic::from_int(10), 128).unwrap();
        assert!(close(&l10, std::f64::consts::LN_10, 1e-14));
        let l1 = ln_point(&Dyadic::one(), 128).unwrap();
        assert!(l1.contains(&Dyadic::zero()));
        let small = ln_point(&Dyadic::from_f64(0.1), 128).unwrap();
        assert!(close(&small, 0.1f64.ln(), 1e-15));
        assert!(ln_point(&Dyadic::zero(), 64).is_err());
    }

    #[test]
    fn ln_is_additive() {
        let a = ln_point(&Dyadic::from_int(3), 200).unwrap();
        let b = ln_point(&Dyadic::from_int(7), 200).unwrap();
        let c = ln_point(&Dyadic::from_int(21), 200).unwrap();
        assert!((&a + &b).overlaps(&c));
    }

    #[test]
    fn pi_digits() {
        let p = pi(256);
        // 3.14159265358979323846264338327950288419716939937510...
        let s = p.mid().to_decimal(40);
        assert_eq!(&s[..40], "3.14159265358979323846264338327950288419");
        assert!(p.width() < Dyadic::one().mul_pow2(-240));
    }

    #[test]
    fn atan_identities() {
        let one = Interval::one(128);
        let quarter_pi = pi(128).mul_pow2(-2);
        assert!(atan(&one).overlaps(&quarter_pi));
        let big = atan(&Interval::from_int(1_000_000, 128));
        assert!((big.to_f64() - 1e6f64.atan()).abs() < 1e-15);
        let neg = atan(&Interval::from_int(-3, 128));
        assert!((neg.to_f64() + 3f64.atan()).abs() < 1e-15);
    }

    #[test]
    fn argument_quadrants() {
        let cases = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (0.0, -2.0), (-3.0, 0.0)];
        for (x, y) in cases {
            let a = arg_point(&Dyadic::from_f64(x), &Dyadic::from_f64(y), 128).unwrap();
            assert!((a.to_f64() - f64::atan2(y, x)).abs() < 1e-15, "{x} {y}");
        }
    }
}
