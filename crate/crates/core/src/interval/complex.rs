use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::dyadic::{Dyadic, Round};
use super::real::Interval;
use crate::error::Result;

/// Rectangular complex enclosure `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        ComplexInterval {
            re,
            im: Interval::zero(p),
        }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        ComplexInterval::real(Interval::from_int(v, prec))
    }

    pub fn point(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        ComplexInterval {
            re: Interval::point(re, prec),
            im: Interval::point(im, prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        ComplexInterval {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> Result<Interval> {
        self.norm_sqr().sqrt()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn scale(&self, s: &Interval) -> Self {
        ComplexInterval {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm_sqr().recip()?;
        Ok(self.conj().scale(&n))
    }

    pub fn checked_div(&self, other: &ComplexInterval) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, mut n: u64) -> Self {
        let mut acc = ComplexInterval::from_int(1, self.prec());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn sqr(&self) -> Self {
        // (a+bi)^2 = a^2 - b^2 + 2ab i, tighter than the generic product
        ComplexInterval {
            re: self.re.sqr() - self.im.sqr(),
            im: (&self.re * &self.im).mul_pow2(1),
        }
    }
}

impl Add for &ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> ComplexInterval {
        ComplexInterval {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, o: ComplexInterval) -> ComplexInterval {
        &self + &o
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, o: ComplexInterval) -> ComplexInterval {
        &self - &o
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, o: ComplexInterval) -> ComplexInterval {
        &self * &o
    }
}

/// Closed disk `|z - center| <= radius`. `real` marks a disk whose center was
/// placed on the real axis and which is certified to hold a real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    pub real: bool,
}

impl ComplexBall {
    pub fn to_rect(&self, prec: u32) -> ComplexInterval {
        let r = &self.radius;
        let im = if self.real {
            Interval::point(Dyadic::zero(), prec)
        } else {
            Interval::new(self.im.sub(r), self.im.add(r), prec)
        };
        ComplexInterval {
            re: Interval::new(self.re.sub(r), self.re.add(r), prec),
            im,
        }
    }

    pub fn center(&self, prec: u32) -> ComplexInterval {
        ComplexInterval::point(self.re.clone(), self.im.clone(), prec)
    }

    /// Enclosure of `|z|` over the disk.
    pub fn modulus(&self, prec: u32) -> Result<Interval> {
        let c = self.center(prec).abs()?;
        let lo = c.lo().sub(&self.radius);
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        Ok(Interval::new(lo, c.hi().add(&self.radius), prec))
    }

    /// Certified lower bound on the gap between two disks (negative if they may meet).
    pub fn gap(&self, other: &ComplexBall, prec: u32) -> Result<Dyadic> {
        let d = (&self.center(prec) - &other.center(prec)).abs()?;
        Ok(d
            .lo()
            .sub(&self.radius)
            .sub(&other.radius)
            .round(prec, Round::Down))
    }
}
