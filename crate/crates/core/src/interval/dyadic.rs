use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact dyadic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// Exact binary fraction `mantissa * 2^exponent`, kept normalized so that the
/// mantissa is odd (or the value is zero with exponent 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

/// `floor(m / 2^s)` or `ceil(m / 2^s)`.
pub(crate) fn shift_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let floor = m >> s;
    match dir {
        Round::Down => floor,
        Round::Up => {
            if (&floor << s) == *m {
                floor
            } else {
                floor + 1
            }
        }
    }
}

fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    match dir {
        Round::Down => q,
        Round::Up if r.is_zero() => q,
        Round::Up => q + 1,
    }
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite float");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// `floor(log2 |self|)`; `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.bits() as i64 - 1 + self.exponent)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    /// Rounds to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shift_round(&self.mantissa, s, dir), self.exponent + s as i64)
    }

    /// `self / other` rounded to `prec` significant bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + other.bits() as i64 - self.bits() as i64 + 2).max(0);
        let num = &self.mantissa << shift as u64;
        let (num, den) = if other.mantissa.is_negative() {
            (-num, -&other.mantissa)
        } else {
            (num, other.mantissa.clone())
        };
        let q = div_round(&num, &den, dir);
        Dyadic::new(q, self.exponent - shift - other.exponent).round(prec, dir)
    }

    /// Directed-rounded `n`-th root of a non-negative value.
    pub fn nth_root(&self, n: u32, prec: u32, dir: Round) -> Dyadic {
        assert!(n >= 1);
        assert!(!self.is_negative(), "root of negative dyadic");
        if self.is_zero() || n == 1 {
            return self.clone();
        }
        let n64 = n as i64;
        // Scale so the integer root carries at least `prec + 2` bits and the
        // exponent is a multiple of n.
        let want = (prec as i64 + 2) * n64;
        let mut shift = (want - self.bits() as i64).max(0);
        let rem = (self.exponent - shift).rem_euclid(n64);
        shift += rem;
        let scaled = &self.mantissa << shift as u64;
        let e = (self.exponent - shift) / n64;
        let mut r = scaled.nth_root(n);
        if dir == Round::Up && num_traits::pow(r.clone(), n as usize) != scaled {
            r += 1;
        }
        Dyadic::new(r, e).round(prec, dir)
    }

    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        self.nth_root(2, prec, dir)
    }

    /// `self^n` with every intermediate rounded in `dir`; requires `self >= 0`.
    pub fn pow_round(&self, mut n: u64, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative());
        let mut base = self.clone();
        let mut acc = Dyadic::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).round(prec, dir);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).round(prec, dir);
            }
        }
        acc
    }

    pub fn floor(&self) -> BigInt {
        self.scaled(0, Round::Down)
    }

    pub fn ceil(&self) -> BigInt {
        self.scaled(0, Round::Up)
    }

    /// `floor(self * 2^bits)` or `ceil(self * 2^bits)`.
    pub fn scaled(&self, bits: i64, dir: Round) -> BigInt {
        let e = self.exponent + bits;
        if e >= 0 {
            &self.mantissa << e as u64
        } else {
            shift_round(&self.mantissa, (-e) as u64, dir)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        if n.is_zero() {
            return Dyadic::zero();
        }
        if d.mantissa.is_one() {
            // power-of-two denominator: exact
            return Dyadic::new(n.mantissa.clone(), n.exponent - d.exponent);
        }
        n.div(&d, prec, dir)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 64 {
            let s = bits - 64;
            ((&self.mantissa >> s).to_f64().unwrap_or(0.0), self.exponent + s as i64)
        } else {
            (self.mantissa.to_f64().unwrap_or(0.0), self.exponent)
        };
        m * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Decimal rendering with `sig` significant digits, round-to-nearest.
    /// Plain notation for moderate magnitudes, scientific otherwise.
    pub fn to_decimal(&self, sig: usize) -> String {
        self.to_decimal_dir(sig, None)
    }

    /// Decimal rendering rounded away from zero; never understates magnitude.
    pub fn to_decimal_up(&self, sig: usize) -> String {
        self.to_decimal_dir(sig, Some(Round::Up))
    }

    fn to_decimal_dir(&self, sig: usize, dir: Option<Round>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let a = self.abs();
        // decimal exponent estimate, corrected below
        let l2 = a.floor_log2().unwrap() as f64;
        let mut e10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        let digits = loop {
            // scaled = a * 10^(sig - 1 - e10)
            let s = sig as i64 - 1 - e10;
            let r = a.to_rational();
            let scaled = if s >= 0 {
                r * BigRational::from_integer(num_traits::pow(BigInt::from(10), s as usize))
            } else {
                r / BigRational::from_integer(num_traits::pow(BigInt::from(10), (-s) as usize))
            };
            let int = match dir {
                None => {
                    let twice = &scaled * BigRational::from_integer(BigInt::from(2));
                    (twice.floor().to_integer() + 1) >> 1u32
                }
                Some(_) => scaled.ceil().to_integer(),
            };
            let str = int.to_str_radix(10);
            if str.len() > sig {
                e10 += 1;
                continue;
            }
            if str.len() < sig {
                e10 -= 1;
                continue;
            }
            break str;
        };
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if (-6..=(sig as i64 + 6)).contains(&e10) {
            if e10 >= 0 {
                let int_len = (e10 + 1) as usize;
                if int_len >= digits.len() {
                    out.push_str(&digits);
                    out.push_str(&"0".repeat(int_len - digits.len()));
                } else {
                    out.push_str(&digits[..int_len]);
                    let frac = digits[int_len..].trim_end_matches('0');
                    if !frac.is_empty() {
                        out.push('.');
                        out.push_str(frac);
                    }
                }
            } else {
                out.push_str("0.");
                out.push_str(&"0".repeat((-e10 - 1) as usize));
                out.push_str(digits.trim_end_matches('0'));
            }
        } else {
            out.push_str(&digits[..1]);
            let frac = digits[1..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
            out.push_str(&format!("e{e10}"));
        }
        out
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<&BigInt> for Dyadic {
    fn from(v: &BigInt) -> Self {
        Dyadic::from_int(v.clone())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shift_rounding_is_floor_and_ceil() {
        for m in -40i64..40 {
            for s in 0..5u64 {
                let d = 1i64 << s;
                let bm = BigInt::from(m);
                assert_eq!(shift_round(&bm, s, Round::Down), BigInt::from(m.div_euclid(d)));
                assert_eq!(
                    shift_round(&bm, s, Round::Up),
                    BigInt::from(-((-m).div_euclid(d)))
                );
            }
        }
    }

    #[test]
    fn normalizes_and_compares() {
        let a = Dyadic::new(BigInt::from(12), -2); // 3
        assert_eq!(a, Dyadic::from_int(3));
        assert!(Dyadic::from_f64(0.5) < Dyadic::one());
        assert!(Dyadic::from_f64(-0.5) < Dyadic::zero());
        assert_eq!(Dyadic::from_f64(1.25).to_f64(), 1.25);
    }

    #[test]
    fn directed_division_brackets_third() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 64, Round::Down);
        let hi = one.div(&three, 64, Round::Up);
        assert!(lo < hi);
        assert!(lo.mul(&three) < one);
        assert!(hi.mul(&three) > one);
        let neg = one.neg().div(&three, 64, Round::Down);
        assert!(neg.mul(&three) < one.neg());
    }

    #[test]
    fn sqrt_two_bracket() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(100, Round::Down);
        let hi = two.sqrt(100, Round::Up);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        assert!(hi.sub(&lo) <= Dyadic::one().mul_pow2(-98));
        assert_eq!(Dyadic::from_int(144).sqrt(10, Round::Down), Dyadic::from_int(12));
        assert_eq!(Dyadic::from_f64(0.25).sqrt(10, Round::Up), Dyadic::from_f64(0.5));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Dyadic::from_int(55).to_decimal(30), "55");
        assert_eq!(Dyadic::from_f64(0.375).to_decimal(30), "0.375");
        assert_eq!(Dyadic::from_f64(1.5).to_decimal(1), "2");
        assert_eq!(Dyadic::from_int(-1234).to_decimal(2), "-1200");
        let tiny = Dyadic::one().mul_pow2(-200);
        assert!(tiny.to_decimal_up(3).starts_with("6.23e-61"));
        let third = Dyadic::one().div(&Dyadic::from_int(3), 200, Round::Down);
        assert_eq!(third.to_decimal(5), "0.33333");
    }

    proptest! {
        #[test]
        fn rounding_brackets_value(m in -1_000_000_000i64..1_000_000_000, e in -40i64..40, p in 2u32..20) {
            let d = Dyadic::new(BigInt::from(m), e);
            let lo = d.round(p, Round::Down);
            let hi = d.round(p, Round::Up);
            prop_assert!(lo <= d && d <= hi);
            prop_assert!(lo.bits() <= p as u64 && hi.bits() <= p as u64);
        }

        #[test]
        fn add_mul_match_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (da, db) = (Dyadic::from_f64(a), Dyadic::from_f64(b));
            // products of two doubles are exact in 106 bits; check via rationals
            prop_assert_eq!(da.mul(&db).to_rational(), da.to_rational() * db.to_rational());
            prop_assert_eq!(da.add(&db).to_rational(), da.to_rational() + db.to_rational());
        }
    }
}
