//! The characteristic polynomial `Psi_k(X) = X^k - X^(k-1) - ... - X - 1`,
//! certified enclosures of its roots, the Binet coefficients and exact norms.
//!
//! Root layout: one real root `alpha_1` in `(2 - 1/k, 2)`, the remaining
//! `k - 1` strictly inside the unit disk. The dominant root is isolated by
//! bisection on the sign of `X^(k+1) - 2X^k + 1`. The others come from an
//! Aberth iteration in `f64`, Newton polishing at the working precision, and a
//! posteriori certification with Weierstrass-correction disks: with
//! `W_i = Psi(z_i) / prod_{j != i}(z_i - z_j)` every connected component of
//! the disks `|z - z_i| <= k |W_i|` holds as many roots as disks, so pairwise
//! disjoint disks hold exactly one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{with_precision_policy, Error, Result, INITIAL_PRECISION};
use crate::interval::{ComplexBall, ComplexInterval, Dyadic, Interval, Round};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharPoly {
    k: usize,
}

impl CharPoly {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {k}")));
        }
        Ok(CharPoly { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Coefficients in ascending degree: `[-1, ..., -1, 1]`.
    pub fn coefficients(&self) -> Vec<BigInt> {
        let mut c = vec![-BigInt::one(); self.k];
        c.push(BigInt::one());
        c
    }

    /// Ascending coefficients of `X^(k+1) - 2X^k + 1`.
    pub fn rational_numerator(&self) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); self.k + 2];
        c[0] = BigInt::one();
        c[self.k] = BigInt::from(-2);
        c[self.k + 1] = BigInt::one();
        c
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let one = BigRational::one();
        if *x == one {
            return BigRational::from_integer(BigInt::from(1 - self.k as i64));
        }
        let xk = num_traits::pow(x.clone(), self.k);
        let num = &xk * x - &xk * BigRational::from_integer(BigInt::from(2)) + &one;
        num / (x - one)
    }

    /// Exact sign of `X^(k+1) - 2X^k + 1 = X^k (X - 2) + 1` at a dyadic point.
    fn numerator_sign(&self, x: &Dyadic) -> i32 {
        let mut xk = Dyadic::one();
        for _ in 0..self.k {
            xk = xk.mul(x);
        }
        xk.mul(&x.sub(&Dyadic::from_int(2)))
            .add(&Dyadic::one())
            .signum()
    }

    fn horner_complex(&self, z: &ComplexInterval) -> ComplexInterval {
        let p = z.prec();
        let mut acc = ComplexInterval::from_int(1, p);
        for _ in 0..self.k {
            acc = &(&acc * z) - &ComplexInterval::from_int(1, p);
        }
        acc
    }

    fn horner_complex_derivative(&self, z: &ComplexInterval) -> ComplexInterval {
        let p = z.prec();
        // d/dX: k X^(k-1) - (k-1) X^(k-2) - ... - 1
        let mut acc = ComplexInterval::from_int(self.k as i64, p);
        for j in (0..self.k - 1).rev() {
            acc = &(&acc * z) - &ComplexInterval::from_int(j as i64 + 1, p);
        }
        acc
    }

    fn horner_f64(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for _ in 0..self.k {
            dp = dp * z + p;
            p = p * z - 1.0;
        }
        (p, dp)
    }
}

/// A real or complex enclosure argument for [`psi_eval`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enclosure {
    Real(Interval),
    Complex(ComplexInterval),
}

impl Enclosure {
    fn to_complex(&self) -> ComplexInterval {
        match self {
            Enclosure::Real(x) => ComplexInterval::real(x.clone()),
            Enclosure::Complex(z) => z.clone(),
        }
    }

    pub fn as_real(&self) -> Option<&Interval> {
        match self {
            Enclosure::Real(x) => Some(x),
            Enclosure::Complex(_) => None,
        }
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            Enclosure::Real(x) => x.contains_zero(),
            Enclosure::Complex(z) => z.contains_zero(),
        }
    }
}

/// `Psi_k` through the rational form `(X^(k+1) - 2X^k + 1)/(X - 1)`; fails
/// when the enclosure of `X - 1` contains zero.
pub fn psi_eval_rational_form(k: usize, x: &Enclosure) -> Result<Enclosure> {
    CharPoly::new(k)?;
    let z = x.to_complex();
    let p = z.prec();
    let one = ComplexInterval::from_int(1, p);
    let zk = z.powi(k as u64);
    let num = &(&(&zk * &z) - &zk.scale(&Interval::from_int(2, p))) + &one;
    let den = &z - &one;
    if den.contains_zero() {
        return Err(Error::precision(p, "rational form evaluated at an enclosure of 1"));
    }
    let v = num.checked_div(&den)?;
    Ok(match x {
        Enclosure::Real(_) => Enclosure::Real(v.re),
        Enclosure::Complex(_) => Enclosure::Complex(v),
    })
}

/// `Psi_k(x)`. Uses the rational form when `|x - 1| > 1/4` holds for the whole
/// enclosure, the monomial sum otherwise.
pub fn psi_eval(k: usize, x: &Enclosure) -> Result<Enclosure> {
    let poly = CharPoly::new(k)?;
    let z = x.to_complex();
    let p = z.prec();
    let dist2 = (&z - &ComplexInterval::from_int(1, p)).norm_sqr();
    if dist2.lo() > &Dyadic::from_f64(1.0 / 16.0) {
        return psi_eval_rational_form(k, x);
    }
    let v = poly.horner_complex(&z);
    Ok(match x {
        Enclosure::Real(_) => Enclosure::Real(v.re),
        Enclosure::Complex(_) => Enclosure::Complex(v),
    })
}

/// Certified enclosures of all roots of `Psi_k`.
#[derive(Clone, Debug)]
pub struct RootSet {
    k: usize,
    dominant: Interval,
    others: Vec<ComplexBall>,
    working_precision: u32,
}

impl RootSet {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Enclosure of `alpha_1`.
    pub fn dominant(&self) -> &Interval {
        &self.dominant
    }

    /// Disks around `alpha_2, ..., alpha_k`: real roots first, then conjugate
    /// pairs (upper half-plane member first) ordered by argument.
    pub fn others(&self) -> &[ComplexBall] {
        &self.others
    }

    pub fn working_precision(&self) -> u32 {
        self.working_precision
    }

    /// Rectangular enclosures of all k roots, `alpha_1` first.
    pub fn rects(&self) -> Vec<ComplexInterval> {
        let p = self.working_precision;
        std::iter::once(ComplexInterval::real(self.dominant.clone()))
            .chain(self.others.iter().map(|b| b.to_rect(p)))
            .collect()
    }

    /// Modulus enclosures of the non-dominant roots.
    pub fn other_moduli(&self) -> Result<Vec<Interval>> {
        self.others
            .iter()
            .map(|b| b.modulus(self.working_precision))
            .collect()
    }

    /// Enclosure of `|prod_i (p alpha_i - q)|` from the root enclosures.
    pub fn norm_product_enclosure(&self, p: &BigRational, q: &BigRational) -> Result<Interval> {
        let w = self.working_precision;
        let pi = ComplexInterval::real(Interval::from_rational(p, w));
        let qi = ComplexInterval::real(Interval::from_rational(q, w));
        let mut acc = ComplexInterval::from_int(1, w);
        for r in self.rects() {
            acc = &acc * &(&(&pi * &r) - &qi);
        }
        acc.abs()
    }
}

fn aberth_f64(poly: &CharPoly) -> Option<Vec<Complex64>> {
    let k = poly.k;
    let mut z: Vec<Complex64> = (0..k)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / k as f64 + 0.4;
            Complex64::from_polar(1.1, t)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..k {
            let (p, dp) = poly.horner_f64(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..k)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 {
            return Some(z);
        }
    }
    // accept slow final convergence if the residuals are already small
    z.iter()
        .all(|&r| poly.horner_f64(r).0.norm() < 1e-10)
        .then_some(z)
}

/// Bisection on `(2 - 1/k, 2)` down to width `2^-prec`.
fn isolate_dominant(poly: &CharPoly, prec: u32) -> Result<Interval> {
    let k = poly.k as i64;
    let two = Dyadic::from_int(2);
    let mut lo = two.sub(&Dyadic::one().div(&Dyadic::from_int(k), prec + 8, Round::Up));
    let mut hi = two;
    if poly.numerator_sign(&lo) >= 0 || poly.numerator_sign(&hi) <= 0 {
        return Err(Error::precision(prec, "no sign change on the dominant-root window"));
    }
    let target = Dyadic::one().mul_pow2(-(prec as i64));
    while hi.sub(&lo) > target {
        let mid = lo.add(&hi).mul_pow2(-1);
        match poly.numerator_sign(&mid) {
            0 => {
                lo = mid.clone();
                hi = mid;
            }
            s if s < 0 => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(Interval::new(lo, hi, prec + 8))
}

fn polish(poly: &CharPoly, start: Complex64, real: bool, prec: u32) -> (Dyadic, Dyadic) {
    let w = prec + 32;
    let mut re = Dyadic::from_f64(start.re);
    let mut im = if real { Dyadic::zero() } else { Dyadic::from_f64(start.im) };
    let tol = Dyadic::one().mul_pow2(-(prec as i64) - 16);
    for _ in 0..64 {
        let z = ComplexInterval::point(re.clone(), im.clone(), w);
        let f = poly.horner_complex(&z);
        let df = poly.horner_complex_derivative(&z);
        let Ok(step) = f.checked_div(&df) else { break };
        let (sr, si) = (step.re.mid(), if real { Dyadic::zero() } else { step.im.mid() });
        re = re.sub(&sr).round(w, Round::Down);
        im = im.sub(&si).round(w, Round::Down);
        if sr.abs() <= tol && si.abs() <= tol {
            break;
        }
    }
    (re, im)
}

/// Certified enclosures of all roots at `prec` bits (at least 64).
pub fn all_roots(k: usize, prec: u32) -> Result<RootSet> {
    let poly = CharPoly::new(k)?;
    if prec < 64 {
        return Err(Error::invalid("precision must be at least 64 bits"));
    }
    let dominant = isolate_dominant(&poly, prec)?;
    let dom_f = dominant.to_f64();

    let approx = aberth_f64(&poly)
        .ok_or_else(|| Error::precision(prec, "simultaneous root iteration did not converge"))?;
    let dom_idx = approx
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 - dom_f).norm();
            let db = (b.1 - dom_f).norm();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .unwrap();
    let rest: Vec<Complex64> = approx
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != dom_idx)
        .map(|(_, z)| *z)
        .collect();
    let mut reals: Vec<f64> = rest.iter().filter(|z| z.im.abs() < 1e-8).map(|z| z.re).collect();
    let mut uppers: Vec<Complex64> = rest.iter().filter(|z| z.im >= 1e-8).copied().collect();
    let lowers = rest.iter().filter(|z| z.im <= -1e-8).count();
    if uppers.len() != lowers || reals.len() + 2 * uppers.len() != k - 1 {
        return Err(Error::precision(prec, "could not pair conjugate root approximations"));
    }
    reals.sort_by(f64::total_cmp);
    uppers.sort_by(|a, b| a.arg().total_cmp(&b.arg()));

    let mut centers: Vec<(Dyadic, Dyadic, bool)> = Vec::with_capacity(k - 1);
    for r in &reals {
        let (re, _) = polish(&poly, Complex64::new(*r, 0.0), true, prec);
        centers.push((re, Dyadic::zero(), true));
    }
    for u in &uppers {
        let (re, im) = polish(&poly, *u, false, prec);
        centers.push((re.clone(), im.clone(), false));
        centers.push((re, im.neg(), false));
    }

    // Weierstrass corrections at all k centers, dominant midpoint included.
    let w = prec + 32;
    let mut all: Vec<(Dyadic, Dyadic)> = vec![(dominant.mid(), Dyadic::zero())];
    all.extend(centers.iter().map(|(r, i, _)| (r.clone(), i.clone())));
    let pts: Vec<ComplexInterval> = all
        .iter()
        .map(|(r, i)| ComplexInterval::point(r.clone(), i.clone(), w))
        .collect();
    let kk = Interval::from_int(k as i64, w);
    let mut radii = Vec::with_capacity(k);
    for i in 0..k {
        let mut den = ComplexInterval::from_int(1, w);
        for j in 0..k {
            if j != i {
                den = &den * &(&pts[i] - &pts[j]);
            }
        }
        let wi = poly.horner_complex(&pts[i]).checked_div(&den)?;
        let r = (&wi.abs()? * &kk).hi().round(prec, Round::Up);
        radii.push(r);
    }

    let balls: Vec<ComplexBall> = all
        .iter()
        .zip(&radii)
        .enumerate()
        .map(|(i, ((re, im), r))| ComplexBall {
            re: re.clone(),
            im: im.clone(),
            radius: r.clone(),
            real: i == 0 || centers[i - 1].2,
        })
        .collect();
    let dom_ball = ComplexBall {
        re: dominant.mid(),
        im: Dyadic::zero(),
        radius: dominant.rad(),
        real: true,
    };
    for i in 0..k {
        for j in (i + 1)..k {
            if !balls[i].gap(&balls[j], w)?.is_positive() {
                return Err(Error::precision(prec, "root disks are not disjoint"));
            }
        }
        if i > 0 && !balls[i].gap(&dom_ball, w)?.is_positive() {
            return Err(Error::precision(prec, "root disk meets the dominant enclosure"));
        }
    }

    let others: Vec<ComplexBall> = balls.into_iter().skip(1).collect();
    let set = RootSet {
        k,
        dominant,
        others,
        working_precision: prec,
    };
    set.check_layout()?;
    Ok(set)
}

impl RootSet {
    fn check_layout(&self) -> Result<()> {
        let p = self.working_precision;
        let one = Dyadic::one();
        if self.dominant.lo() <= &one {
            return Err(Error::precision(p, "dominant enclosure not above 1"));
        }
        for m in self.other_moduli()? {
            if m.hi() >= &one {
                return Err(Error::precision(p, "non-dominant root not certified inside the unit disk"));
            }
        }
        let mut prod = ComplexInterval::from_int(1, p);
        for r in self.rects() {
            prod = &prod * &r;
        }
        let sign = if self.k % 2 == 1 { 1 } else { -1 };
        if !prod.contains(&Dyadic::from_int(sign), &Dyadic::zero()) {
            return Err(Error::precision(p, "product of root enclosures misses (-1)^(k-1)"));
        }
        Ok(())
    }
}

/// [`all_roots`] under the doubling precision policy (128 bits up to the cap).
pub fn all_roots_auto(k: usize) -> Result<RootSet> {
    with_precision_policy(INITIAL_PRECISION, |bits| all_roots(k, bits)).map(|(r, _)| r)
}

#[derive(Clone, Debug)]
pub struct BinetCoefficients {
    values: Vec<ComplexInterval>,
    f1_real: Interval,
}

impl BinetCoefficients {
    /// `f_1, ..., f_k` in the order of [`RootSet::rects`].
    pub fn values(&self) -> &[ComplexInterval] {
        &self.values
    }

    pub fn f1(&self) -> &Interval {
        &self.f1_real
    }
}

fn binet_coefficient(k: usize, a: &ComplexInterval) -> Result<ComplexInterval> {
    let p = a.prec();
    let one = ComplexInterval::from_int(1, p);
    let two = ComplexInterval::from_int(2, p);
    let lin = &two + &(a - &two).scale(&Interval::from_int(k as i64 + 1, p));
    let den = a * &lin;
    if den.contains_zero() {
        return Err(Error::precision(p, "Binet denominator enclosure contains zero"));
    }
    (a - &one).checked_div(&den)
}

/// `f_i = (alpha_i - 1) / (alpha_i (2 + (k+1)(alpha_i - 2)))` at every root.
pub fn binet_coefficients(roots: &RootSet) -> Result<BinetCoefficients> {
    let k = roots.k;
    let values = roots
        .rects()
        .iter()
        .map(|r| binet_coefficient(k, r))
        .collect::<Result<Vec<_>>>()?;
    let f1_real = values[0].re.clone();
    let p = roots.working_precision;
    if !f1_real.strictly_within(&Dyadic::zero(), &Dyadic::one()) {
        return Err(Error::precision(p, "f_1 enclosure not inside (0, 1)"));
    }
    Ok(BinetCoefficients { values, f1_real })
}

/// Enclosure of `sum_i f_i alpha_i^n` (real part; the sum is real).
pub fn binet_eval(coeffs: &BinetCoefficients, roots: &RootSet, n: u64) -> Interval {
    let rects = roots.rects();
    let mut acc = ComplexInterval::from_int(0, roots.working_precision);
    for (f, a) in coeffs.values.iter().zip(&rects) {
        acc = &acc + &(f * &a.powi(n));
    }
    acc.re
}

/// Exact `|prod_i (p alpha_i - q)| = |p|^k |Psi_k(q/p)|`.
pub fn norm_linear_form(k: usize, p: &BigRational, q: &BigRational) -> Result<BigRational> {
    let poly = CharPoly::new(k)?;
    if p.is_zero() {
        return Err(Error::invalid("p must be nonzero"));
    }
    let v = poly.eval_rational(&(q / p));
    Ok((num_traits::pow(p.clone(), k) * v).abs())
}

/// Integer convenience wrapper around [`norm_linear_form`].
pub fn norm_linear_form_int(k: usize, p: i64, q: i64) -> Result<BigRational> {
    norm_linear_form(
        k,
        &BigRational::from_integer(BigInt::from(p)),
        &BigRational::from_integer(BigInt::from(q)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    // Independent oracle: plain f64 bisection of Psi_k on (2 - 1/k, 2).
    fn bisect_f64(k: usize) -> f64 {
        let psi = |x: f64| x.powi(k as i32) - (0..k).map(|j| x.powi(j as i32)).sum::<f64>();
        let (mut lo, mut hi) = (2.0 - 1.0 / k as f64, 2.0);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if psi(m) < 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        lo
    }

    #[test]
    fn rational_form_identity() {
        for k in 2..=12 {
            let c = CharPoly::new(k).unwrap().coefficients();
            // multiply ascending coefficients by (X - 1)
            let mut prod = vec![BigInt::zero(); c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                prod[i + 1] += a;
                prod[i] -= a;
            }
            assert_eq!(prod, CharPoly::new(k).unwrap().rational_numerator());
        }
    }

    #[test]
    fn psi_eval_examples() {
        let two = Enclosure::Real(Interval::from_int(2, 64));
        let v = psi_eval(3, &two).unwrap();
        assert_eq!(v.as_real().unwrap(), &Interval::from_int(1, 64));
        for k in 2..8 {
            let one = Enclosure::Real(Interval::from_int(1, 64));
            let v = psi_eval(k, &one).unwrap();
            assert!(v.as_real().unwrap().contains_int(&BigInt::from(1 - k as i64)));
            assert!(psi_eval_rational_form(k, &one).is_err());
        }
        let phi = all_roots(2, 128).unwrap();
        let v = psi_eval(2, &Enclosure::Real(phi.dominant().clone())).unwrap();
        assert!(v.contains_zero());
    }

    #[test]
    fn both_forms_agree_near_two() {
        let x = Enclosure::Real(Interval::new(Dyadic::from_f64(1.9), Dyadic::from_f64(1.9), 128));
        for k in 2..10 {
            let a = psi_eval_rational_form(k, &x).unwrap();
            let poly = CharPoly::new(k).unwrap();
            let b = poly.horner_complex(&ComplexInterval::real(x.as_real().unwrap().clone()));
            assert!(a.as_real().unwrap().overlaps(&b.re));
        }
    }

    #[test]
    fn dominant_root_values() {
        let r2 = all_roots(2, 128).unwrap();
        assert!(r2.dominant().to_f64() - 1.618_033_988_7 < 1e-10);
        assert_eq!(&r2.dominant().mid().to_decimal(11), "1.6180339887");
        let r3 = all_roots(3, 128).unwrap();
        assert_eq!(&r3.dominant().mid().to_decimal(11), "1.8392867552");
        for k in 2..=12 {
            let r = all_roots(k, 128).unwrap();
            assert!((r.dominant().to_f64() - bisect_f64(k)).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn root_layout_for_many_k() {
        for k in 2..=20 {
            let r = all_roots(k, 128).unwrap();
            assert_eq!(r.others().len(), k - 1);
            // exactly one root outside the closed unit disk
            assert!(r.dominant().lo() > &Dyadic::one());
            for m in r.other_moduli().unwrap() {
                assert!(m.hi() < &Dyadic::one());
            }
            let real_count = r.others().iter().filter(|b| b.real).count();
            // Psi_k has a negative real root exactly when k is even
            assert_eq!(real_count, usize::from(k % 2 == 0), "k={k}");
        }
    }

    #[test]
    fn low_precision_is_rejected() {
        assert!(all_roots(3, 32).is_err());
        assert!(all_roots(1, 128).is_err());
    }

    #[test]
    fn binet_coefficient_values() {
        let r = all_roots(2, 128).unwrap();
        let c = binet_coefficients(&r).unwrap();
        assert_eq!(&c.f1().mid().to_decimal(10), "0.4472135955");
        let inv_sqrt5 = Interval::from_int(5, 128).sqrt().unwrap().recip().unwrap();
        assert!(c.f1().overlaps(&inv_sqrt5));
        let r = all_roots(3, 128).unwrap();
        let c = binet_coefficients(&r).unwrap();
        assert_eq!(&c.f1().mid().to_decimal(10), "0.336228117");
        for k in 2..=10 {
            let c = binet_coefficients(&all_roots(k, 128).unwrap()).unwrap();
            assert!(c.f1().strictly_within(&Dyadic::zero(), &Dyadic::one()));
        }
    }

    #[test]
    fn binet_eval_examples() {
        let r = all_roots(2, 128).unwrap();
        let c = binet_coefficients(&r).unwrap();
        assert!(binet_eval(&c, &r, 10).contains_int(&BigInt::from(55)));
        let r = all_roots(3, 128).unwrap();
        let c = binet_coefficients(&r).unwrap();
        assert!(binet_eval(&c, &r, 7).contains_int(&BigInt::from(24)));
        let r = all_roots(4, 128).unwrap();
        let c = binet_coefficients(&r).unwrap();
        assert!(binet_eval(&c, &r, 0).contains_int(&BigInt::zero()));
    }

    #[test]
    fn binet_matches_sequence() {
        use crate::sequence::SequenceCache;
        let half = Dyadic::from_f64(0.5);
        // F_200 needs ~200 bits before the fractional part is resolved
        for k in 2..=12 {
            let r = all_roots(k, 320).unwrap();
            let c = binet_coefficients(&r).unwrap();
            let seq = SequenceCache::with_terms(k, 200).unwrap();
            for n in 1..=200i64 {
                let e = &binet_eval(&c, &r, n as u64)
                    - &Interval::from_int(seq.get(n).unwrap().clone(), 320);
                assert!(e.abs().hi() < &half, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_linear_form_int(2, 1, 1).unwrap(), rat(1));
        assert_eq!(norm_linear_form_int(2, 3, 4).unwrap(), rat(5));
        assert_eq!(norm_linear_form_int(3, 4, 6).unwrap(), rat(88));
        assert!(norm_linear_form_int(3, 0, 1).is_err());
        // |N(alpha)| = |Psi(0)| = 1 and |N(alpha - 1)| = k - 1
        for k in 2..=12 {
            assert_eq!(norm_linear_form_int(k, 1, 0).unwrap(), rat(1));
            assert_eq!(norm_linear_form_int(k, 1, 1).unwrap(), rat(k as i64 - 1));
        }
    }

    #[test]
    fn norm_closed_form_and_enclosure() {
        for k in 2..=12usize {
            let exact = norm_linear_form_int(k, k as i64 + 1, 2 * k as i64).unwrap();
            let kk = BigInt::from(k);
            let closed = (BigInt::one() << (k + 1)) * num_traits::pow(kk.clone(), k)
                - num_traits::pow(&kk + 1, k + 1);
            assert_eq!(exact.clone() * rat(k as i64 - 1), BigRational::from_integer(closed));
            let r = all_roots(k, 128).unwrap();
            let enc = r
                .norm_product_enclosure(&rat(k as i64 + 1), &rat(2 * k as i64))
                .unwrap();
            assert!(enc.contains_rational(&exact), "k={k}");
        }
    }
}
