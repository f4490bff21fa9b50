//! Truncated expansion of `c` in powers of the roots.
//!
//! Writing `F_n - 1 = f_1 alpha_1^n (1 + u_n)` with
//! `u_n = -alpha_1^(-n)/f_1 + sum_{i>=2} (f_i/f_1) alpha_i^n alpha_1^(-n)`,
//! the identity `c^2 = (F_y - 1)(F_z - 1)/(F_x - 1)` becomes
//!
//! ```text
//! c = sqrt(f_1) alpha_1^((-x+y+z)/2) (1+u_x)^(-1/2) (1+u_y)^(1/2) (1+u_z)^(1/2)
//! ```
//!
//! and each factor is expanded as a binomial series. Terms are kept up to
//! total order `T` across the three factors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::charpoly::{BinetCoefficients, RootSet};
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval};
use crate::sequence::SequenceCache;

/// Default cap on the number of generated terms.
pub const DEFAULT_TERM_CAP: usize = 250_000;
/// Largest supported truncation order.
pub const MAX_ORDER: u32 = 6;

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionTerm {
    /// `d_j`.
    pub coefficient: ComplexInterval,
    /// `exponents[i] = (a, b, c)` encodes `L_i = a x + b y + c z`, the power of
    /// the i-th root (`alpha_1` first) in `M_j`.
    pub exponents: Vec<[i64; 3]>,
}

impl ExpansionTerm {
    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|e| e == &[0, 0, 0])
    }

    /// Non-positive forms on `alpha_1`, non-negative ones elsewhere.
    pub fn signs_ok(&self) -> bool {
        self.exponents[0].iter().all(|&v| v <= 0)
            && self.exponents[1..].iter().flatten().all(|&v| v >= 0)
    }

    fn form(&self, i: usize, x: u64, y: u64, z: u64) -> i64 {
        let e = self.exponents[i];
        e[0] * x as i64 + e[1] * y as i64 + e[2] * z as i64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionConfig {
    #[serde(rename = "T")]
    pub order: u32,
    pub epsilon: u8,
    /// `log(3/2)`: each monomial is at most `e^(-kappa x)`.
    pub kappa: f64,
    pub term_cap: usize,
}

impl ExpansionConfig {
    pub fn new(order: u32, epsilon: u8) -> Self {
        ExpansionConfig {
            order,
            epsilon,
            kappa: 1.5f64.ln(),
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    /// Configuration whose parity bit matches the point `(x, y, z)`.
    pub fn for_point(order: u32, x: u64, y: u64, z: u64) -> Self {
        ExpansionConfig::new(order, parity(x, y, z))
    }
}

/// `(-x + y + z) mod 2`.
pub fn parity(x: u64, y: u64, z: u64) -> u8 {
    ((x + y + z) % 2) as u8
}

fn binomial_half(sign: i64, j: u32) -> BigRational {
    // binom(e, j) for e = sign/2
    let e = BigRational::new(BigInt::from(sign), BigInt::from(2));
    let mut acc = BigRational::one();
    for i in 0..j {
        acc = acc * (&e - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

fn binomial_u128(n: u128, r: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of multi-indices before collection: vectors in `N^(3k)` of sum `<= T`.
pub fn raw_term_count(k: usize, order: u32) -> Option<u128> {
    binomial_u128(3 * k as u128 + order as u128, order as u128)
}

fn compositions(len: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            go(len, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max_total, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Terms `d_j M_j` of the expansion, constant term first, then by total order.
pub fn expand_c(
    k: usize,
    config: &ExpansionConfig,
    roots: &RootSet,
    coeffs: &BinetCoefficients,
) -> Result<Vec<ExpansionTerm>> {
    if roots.k() != k {
        return Err(Error::invalid("root set does not match k"));
    }
    if config.order > MAX_ORDER {
        return Err(Error::invalid(format!("T must be at most {MAX_ORDER}")));
    }
    let count = raw_term_count(k, config.order).unwrap_or(u128::MAX);
    if count > config.term_cap as u128 {
        return Err(Error::TermOverflow {
            count,
            cap: config.term_cap,
        });
    }
    let p = roots.working_precision();
    let f1 = ComplexInterval::real(coeffs.f1().clone());
    let mut g = vec![-&ComplexInterval::from_int(1, p).checked_div(&f1)?];
    for fi in &coeffs.values()[1..] {
        g.push(fi.checked_div(&f1)?);
    }
    let t = config.order;
    let g_pows: Vec<Vec<ComplexInterval>> = g
        .iter()
        .map(|gi| (0..=t).map(|c| gi.powi(c as u64)).collect())
        .collect();
    let fact: Vec<BigInt> = (0..=t).map(factorial).collect();
    let signs = [-1i64, 1, 1];

    // keyed by exponent forms so like terms merge
    let mut collected: BTreeMap<(i64, Vec<[i64; 3]>), ComplexInterval> = BTreeMap::new();
    for idx in compositions(3 * k, t) {
        let mut scalar = BigRational::one();
        let mut coef = ComplexInterval::from_int(1, p);
        let mut exps = vec![[0i64; 3]; k];
        let mut total = 0i64;
        for f in 0..3 {
            let c = &idx[f * k..(f + 1) * k];
            let j: u32 = c.iter().sum();
            total += j as i64;
            let mut multinom = fact[j as usize].clone();
            for &ci in c {
                multinom /= &fact[ci as usize];
            }
            scalar = scalar * binomial_half(signs[f], j) * BigRational::from_integer(multinom);
            for (i, &ci) in c.iter().enumerate() {
                if ci > 0 {
                    coef = &coef * &g_pows[i][ci as usize];
                }
                if i > 0 {
                    exps[i][f] += ci as i64;
                }
            }
            exps[0][f] -= j as i64;
        }
        let coef = coef.scale(&Interval::from_rational(&scalar, p));
        collected
            .entry((total, exps))
            .and_modify(|acc| *acc = &*acc + &coef)
            .or_insert(coef);
    }
    Ok(collected
        .into_iter()
        .filter(|(_, c)| !(c.re.lo().is_zero() && c.re.hi().is_zero() && c.im.lo().is_zero() && c.im.hi().is_zero()))
        .map(|((_, exponents), coefficient)| ExpansionTerm {
            coefficient,
            exponents,
        })
        .collect())
}

fn monomial(term: &ExpansionTerm, rects: &[ComplexInterval], inv_alpha: &Interval, x: u64, y: u64, z: u64) -> ComplexInterval {
    let mut m = ComplexInterval::real(inv_alpha.powi(term.form(0, x, y, z).unsigned_abs()));
    for (i, r) in rects.iter().enumerate().skip(1) {
        let e = term.form(i, x, y, z);
        if e > 0 {
            m = &m * &r.powi(e as u64);
        }
    }
    m
}

/// `sqrt(f_1 alpha_1^eps) alpha_1^((-x+y+z-eps)/2) (1 + sum d_j M_j)`.
pub fn eval_expansion(
    terms: &[ExpansionTerm],
    config: &ExpansionConfig,
    x: u64,
    y: u64,
    z: u64,
    roots: &RootSet,
    coeffs: &BinetCoefficients,
) -> Result<Interval> {
    if !(x <= y && y <= z) {
        return Err(Error::invalid("evaluation point must satisfy x <= y <= z"));
    }
    if config.epsilon > 1 || parity(x, y, z) != config.epsilon {
        return Err(Error::invalid(format!(
            "parity: -x+y+z-eps must be even (eps = {})",
            config.epsilon
        )));
    }
    let a = roots.dominant();
    let inv = a.recip()?;
    let rects = roots.rects();
    let p = roots.working_precision();
    let mut sum = ComplexInterval::from_int(0, p);
    for t in terms {
        sum = &sum + &(&t.coefficient * &monomial(t, &rects, &inv, x, y, z));
    }
    let eps = config.epsilon as u64;
    let lead = (coeffs.f1() * &a.powi(eps)).sqrt()? * a.powi((y + z - x - eps) / 2);
    Ok(lead * sum.re)
}

/// For each non-constant term, whether `|M_j(x, y, z)| <= (3/2)^(-x)` is
/// certified.
pub fn monomial_decay_check(
    terms: &[ExpansionTerm],
    x: u64,
    y: u64,
    z: u64,
    roots: &RootSet,
) -> Result<Vec<bool>> {
    if x < 1 {
        return Err(Error::invalid("x must be at least 1"));
    }
    if terms.iter().all(ExpansionTerm::is_constant) {
        return Err(Error::invalid("no non-constant terms to check"));
    }
    let p = roots.working_precision();
    let inv = roots.dominant().recip()?;
    let rects = roots.rects();
    let limit = Interval::from_rational(&BigRational::new(2.into(), 3.into()), p).powi(x);
    terms
        .iter()
        .filter(|t| !t.is_constant())
        .map(|t| {
            let m = monomial(t, &rects, &inv, x, y, z).abs()?;
            Ok(m.hi() <= limit.lo())
        })
        .collect()
}

/// Enclosure of `sqrt((F_y - 1)(F_z - 1)/(F_x - 1))`.
pub fn exact_c(k: usize, x: u64, y: u64, z: u64, prec: u32) -> Result<Interval> {
    let seq = SequenceCache::with_terms(k, x.max(y).max(z) as i64)?;
    let f = |n: u64| -> BigInt { seq.get(n as i64).unwrap() - 1 };
    let den = f(x);
    if den.is_zero() {
        return Err(Error::invalid("F_x - 1 vanishes"));
    }
    let q = BigRational::new(f(y) * f(z), den);
    Interval::from_rational(&q, prec).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub k: usize,
    pub config: ExpansionConfig,
    pub at: [u64; 3],
    pub term_count: usize,
    pub approximation: Interval,
    pub exact: Interval,
    pub abs_error: Interval,
    pub rel_error: Interval,
    pub decay_ok: bool,
}

/// Expansion at order `T` evaluated at a point, compared with the exact `c`.
pub fn expansion_report(k: usize, order: u32, x: u64, y: u64, z: u64, roots: &RootSet, coeffs: &BinetCoefficients) -> Result<ExpansionReport> {
    let config = ExpansionConfig::for_point(order, x, y, z);
    let terms = expand_c(k, &config, roots, coeffs)?;
    let approximation = eval_expansion(&terms, &config, x, y, z, roots, coeffs)?;
    let exact = exact_c(k, x, y, z, roots.working_precision())?;
    let abs_error = (&approximation - &exact).abs();
    let rel_error = abs_error.checked_div(&exact)?;
    let decay_ok = order == 0 || monomial_decay_check(&terms, x, y, z, roots)?.iter().all(|&b| b);
    Ok(ExpansionReport {
        k,
        config,
        at: [x, y, z],
        term_count: terms.len(),
        approximation,
        exact,
        abs_error,
        rel_error,
        decay_ok,
    })
}
