use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Closed real interval `[lo, hi]` with dyadic endpoints. Every operation
/// rounds outward to `prec` significant bits, so the result always encloses
/// the exact result for any choice of points in the operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        Interval::new(d.clone(), d, prec)
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::from_int(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Interval::from_int(1, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Upper bound on the distance from `mid()` to either endpoint.
    pub fn rad(&self) -> Dyadic {
        self.hi.sub(&self.lo).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Dyadic::from_int(v.clone()))
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Strictly inside the open interval `(a, b)`.
    pub fn strictly_within(&self, a: &Dyadic, b: &Dyadic) -> bool {
        *a < self.lo && self.hi < *b
    }

    /// Decided comparison of every point of `self` against `d`: `Some(Less)`
    /// if all points are below, `Some(Greater)` if all above, `Some(Equal)`
    /// only for the degenerate interval `[d, d]`, `None` when undecided.
    pub fn cmp_dyadic(&self, d: &Dyadic) -> Option<Ordering> {
        if self.hi < *d {
            Some(Ordering::Less)
        } else if self.lo > *d {
            Some(Ordering::Greater)
        } else if self.lo == *d && self.hi == *d {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// Widens symmetrically by `r >= 0`.
    pub fn inflate(&self, r: &Dyadic) -> Interval {
        Interval::new(self.lo.sub(r), self.hi.add(r), self.prec)
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.abs().max(self.hi.clone());
            Interval {
                lo: Dyadic::zero(),
                hi: m,
                prec: self.prec,
            }
        } else if self.hi.signum() <= 0 {
            Interval {
                lo: self.hi.neg(),
                hi: self.lo.neg(),
                prec: self.prec,
            }
        } else {
            self.clone()
        }
    }

    /// Largest absolute value of any point.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn sqr(&self) -> Interval {
        self.powi(2)
    }

    pub fn powi(&self, n: u64) -> Interval {
        if n == 0 {
            return Interval::one(self.prec);
        }
        let p = self.prec;
        let pow_abs = |d: &Dyadic, dir: Round| d.abs().pow_round(n, p, dir);
        if !self.lo.is_negative() {
            return Interval {
                lo: pow_abs(&self.lo, Round::Down),
                hi: pow_abs(&self.hi, Round::Up),
                prec: p,
            };
        }
        let odd = n % 2 == 1;
        if !self.hi.is_positive() {
            // entirely non-positive
            let lo_abs = (pow_abs(&self.hi, Round::Down), pow_abs(&self.lo, Round::Up));
            return if odd {
                Interval {
                    lo: lo_abs.1.neg(),
                    hi: lo_abs.0.neg(),
                    prec: p,
                }
            } else {
                Interval {
                    lo: lo_abs.0,
                    hi: lo_abs.1,
                    prec: p,
                }
            };
        }
        if odd {
            Interval {
                lo: pow_abs(&self.lo, Round::Up).neg(),
                hi: pow_abs(&self.hi, Round::Up),
                prec: p,
            }
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: pow_abs(&self.mag(), Round::Up),
                prec: p,
            }
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::precision(self.prec, "reciprocal of interval containing zero"));
        }
        let one = Dyadic::one();
        Ok(Interval {
            lo: one.div(&self.hi, self.prec, Round::Down),
            hi: one.div(&self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn checked_div(&self, other: &Interval) -> Result<Interval> {
        if self.lo == self.hi && other.lo == other.hi {
            let p = self.prec.max(other.prec);
            return Ok(Interval {
                lo: self.lo.div(&other.lo, p, Round::Down),
                hi: self.lo.div(&other.lo, p, Round::Up),
                prec: p,
            });
        }
        Ok(self * &other.recip()?)
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo.is_negative() {
            return Err(Error::precision(self.prec, "square root of interval reaching below zero"));
        }
        Ok(Interval {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Real `n`-th root of a non-negative interval.
    pub fn nth_root(&self, n: u32) -> Result<Interval> {
        if self.lo.is_negative() {
            return Err(Error::precision(self.prec, "root of interval reaching below zero"));
        }
        Ok(Interval {
            lo: self.lo.nth_root(n, self.prec, Round::Down),
            hi: self.hi.nth_root(n, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        self * &Interval::from_int(k, self.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval {
            lo: self.lo.add(&o.lo).round(p, Round::Down),
            hi: self.hi.add(&o.hi).round(p, Round::Up),
            prec: p,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval {
            lo: self.lo.sub(&o.hi).round(p, Round::Down),
            hi: self.hi.sub(&o.lo).round(p, Round::Up),
            prec: p,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        let cands = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = cands.iter().min().unwrap().round(p, Round::Down);
        let hi = cands.iter().max().unwrap().round(p, Round::Up);
        Interval { lo, hi, prec: p }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                (&self).$m(&o)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, o: &Interval) -> Interval {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}
