//! Multiplicative independence of the roots of `Psi_k`.
//!
//! The regulator-style matrix `(log |sigma_i(alpha_j)|)` has the dominant log
//! on its diagonal and the remaining conjugate logs off it. Each full row of
//! logs sums to `log |alpha_1 ... alpha_k| = 0`, so strict diagonal dominance
//! of the transpose reduces to every non-dominant modulus being below 1, with
//! margin `min_i (-log |alpha_i|)`. This holds for any choice of `k-1` roots.
//!
//! [`relation_probe`] searches bounded exponent vectors for products of roots
//! that are roots of unity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::charpoly::{all_roots, RootSet};
use crate::error::{with_precision_policy, Error, Result, INITIAL_PRECISION};
use crate::interval::elementary::{arg_ball, fixed_point, ln, pi};
use crate::interval::{Dyadic, Interval};

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceCertificate {
    pub k: usize,
    /// 1-based indices of the `k-1` roots the certificate is stated for.
    pub subset: Vec<usize>,
    pub log_alpha1: Interval,
    /// `-log |alpha_i|` for `i = 2..k`.
    pub nondominant_log_moduli: Vec<Interval>,
    pub dominance_margin: Interval,
    /// The non-dominant values sum to `log alpha_1` within enclosure widths.
    pub row_sum_consistent: bool,
    pub passes: bool,
    pub precision: u32,
}

fn subset_from_mask(k: usize, mask: Option<&[bool]>) -> Result<Vec<usize>> {
    match mask {
        None => Ok((1..k).collect()),
        Some(m) => {
            if m.len() != k || m.iter().filter(|&&b| b).count() != k - 1 {
                return Err(Error::invalid(format!(
                    "subset mask must have length {k} with exactly {} roots selected",
                    k - 1
                )));
            }
            Ok(m.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i + 1)
                .collect())
        }
    }
}

/// Parses a mask such as `"1101"` (one character per root, `alpha_1` first).
pub fn parse_mask(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '1' => Ok(true),
            '0' => Ok(false),
            _ => Err(Error::invalid(format!("bad subset mask {s:?}"))),
        })
        .collect()
}

pub fn independence_certificate(roots: &RootSet) -> Result<IndependenceCertificate> {
    independence_certificate_subset(roots, None)
}

pub fn independence_certificate_subset(
    roots: &RootSet,
    mask: Option<&[bool]>,
) -> Result<IndependenceCertificate> {
    let k = roots.k();
    let subset = subset_from_mask(k, mask)?;
    let p = roots.working_precision();
    let one = Dyadic::one();
    let log_alpha1 = ln(roots.dominant())?;
    let mut logs = Vec::with_capacity(k - 1);
    for m in roots.other_moduli()? {
        if !(m.hi() < &one) || !m.is_positive() {
            return Err(Error::precision(p, "non-dominant modulus enclosure touches 1"));
        }
        logs.push(-ln(&m)?);
    }
    let margin = logs
        .iter()
        .skip(1)
        .fold(logs[0].clone(), |acc, l| acc.min(l));
    let sum = logs
        .iter()
        .fold(Interval::zero(p), |acc, l| &acc + l);
    let row_sum_consistent = sum.overlaps(&log_alpha1);
    let passes = log_alpha1.is_positive()
        && logs.iter().all(Interval::is_positive)
        && margin.is_positive()
        && row_sum_consistent;
    Ok(IndependenceCertificate {
        k,
        subset,
        log_alpha1,
        nondominant_log_moduli: logs,
        dominance_margin: margin,
        row_sum_consistent,
        passes,
        precision: p,
    })
}

/// Certificate for `k` under the doubling precision policy.
pub fn certify_independence(k: usize, mask: Option<&[bool]>) -> Result<IndependenceCertificate> {
    with_precision_policy(INITIAL_PRECISION, |bits| {
        let roots = all_roots(k, bits)?;
        independence_certificate_subset(&roots, mask)
    })
    .map(|(c, _)| c)
}

/// Largest order of a root of unity that can lie in a field of degree at most
/// `k!`: `phi(n) <= k!` and `phi(n) >= sqrt(n/2)` give `n <= 2 (k!)^2`.
fn root_of_unity_order_bound(k: usize) -> BigInt {
    let f: BigInt = (1..=k as u64).map(BigInt::from).product();
    &f * &f * 2
}

/// Log moduli and arguments (in turns) of all roots, `alpha_1` first, as
/// `2^bits`-scaled integer brackets.
struct Embedding {
    bits: i64,
    logs: Vec<(BigInt, BigInt)>,
    turns: Vec<(BigInt, BigInt)>,
}

fn embedding(roots: &RootSet, bits: u32) -> Result<Embedding> {
    let w = roots.working_precision();
    let two_pi = pi(w).mul_pow2(1);
    let mut logs = vec![fixed_point(&ln(roots.dominant())?, bits as i64)];
    let mut turns = vec![(BigInt::zero(), BigInt::zero())];
    let half = BigInt::one() << (bits - 1);
    for b in roots.others() {
        logs.push(fixed_point(&ln(&b.modulus(w)?)?, bits as i64));
        if b.real {
            if b.re.is_positive() {
                turns.push((BigInt::zero(), BigInt::zero()));
            } else {
                turns.push((half.clone(), half.clone()));
            }
        } else {
            let t = arg_ball(b, w)?.checked_div(&two_pi)?;
            turns.push(fixed_point(&t, bits as i64));
        }
    }
    Ok(Embedding {
        bits: bits as i64,
        logs,
        turns,
    })
}

fn bracket_sum(v: &[i64], xs: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (&m, (a, b)) in v.iter().zip(xs) {
        if m >= 0 {
            lo += a * m;
            hi += b * m;
        } else {
            lo += b * m;
            hi += a * m;
        }
    }
    (lo, hi)
}

/// Rational with the smallest denominator in `[lo, hi]` (`0 <= lo <= hi`).
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + BigRational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Both filters at the embedding's precision: log modulus within
/// `2^(-bits/4)` of zero and an argument sum that may be a rational of
/// denominator at most `q_max`.
fn survives(v: &[i64], e: &Embedding, q_max: &BigInt) -> bool {
    let weight: i64 = 1 + v.iter().map(|m| m.abs()).sum::<i64>();
    let eps = (BigInt::one() << (e.bits - e.bits / 4)) * weight;
    let (lo, hi) = bracket_sum(v, &e.logs);
    if lo > eps || hi < -eps {
        return false;
    }
    let (lo, hi) = bracket_sum(v, &e.turns);
    let scale = BigInt::one() << e.bits;
    if &hi - &lo >= scale {
        return true;
    }
    let shift = lo.div_floor(&scale) * &scale;
    let lo = BigRational::new(lo - &shift, scale.clone());
    let hi = BigRational::new(hi - &shift, scale);
    simplest_between(&lo, &hi).denom() <= q_max
}

const COARSE_BITS: i64 = 100;

/// Exponent vectors with `|m_i| <= bound` whose log-modulus sum may vanish,
/// by depth-first enumeration over 100-bit brackets with a reachability cut.
fn coarse_candidates(e: &Embedding, bound: i64, eps_bits: i64) -> Vec<Vec<i64>> {
    let shift = e.bits - COARSE_BITS;
    let logs: Vec<(i128, i128)> = e
        .logs
        .iter()
        .map(|(a, b)| {
            let lo = a >> shift;
            let hi = -((-b) >> shift);
            (lo.to_i128().unwrap(), hi.to_i128().unwrap())
        })
        .collect();
    let k = logs.len();
    let eps: i128 = (1i128 << (COARSE_BITS - eps_bits)) * (1 + k as i128 * bound as i128);
    let mut reach = vec![0i128; k + 1];
    for i in (0..k).rev() {
        reach[i] = reach[i + 1] + bound as i128 * logs[i].0.abs().max(logs[i].1.abs());
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        i: usize,
        lo: i128,
        hi: i128,
        m: &mut Vec<i64>,
        logs: &[(i128, i128)],
        reach: &[i128],
        bound: i64,
        eps: i128,
        out: &mut Vec<Vec<i64>>,
    ) {
        if lo - reach[i] > eps || hi + reach[i] < -eps {
            return;
        }
        if i == logs.len() {
            out.push(m.clone());
            return;
        }
        let (a, b) = logs[i];
        for v in -bound..=bound {
            let v128 = v as i128;
            let (da, db) = if v >= 0 { (a * v128, b * v128) } else { (b * v128, a * v128) };
            m.push(v);
            walk(i + 1, lo + da, hi + db, m, logs, reach, bound, eps, out);
            m.pop();
        }
    }

    (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|first| {
            let (a, b) = logs[0];
            let f = first as i128;
            let (lo, hi) = if first >= 0 { (a * f, b * f) } else { (b * f, a * f) };
            let mut out = Vec::new();
            let mut m = vec![first];
            walk(1, lo, hi, &mut m, &logs, &reach, bound, eps, &mut out);
            out
        })
        .collect()
}

/// Precision at which the argument filter can separate rationals of
/// denominator up to the root-of-unity bound.
pub fn probe_precision(k: usize) -> u32 {
    let q_bits = root_of_unity_order_bound(k).bits() as u32;
    4 * (2 * q_bits + 32)
}

/// Nonzero vectors `(m_1, ..., m_k)` with `|m_i| <= exponent_bound` for which
/// `alpha_1^m_1 ... alpha_k^m_k` may be a root of unity, sorted. Candidates
/// are re-checked at twice the working precision. The all-ones multiples are
/// genuine (`alpha_1 ... alpha_k = (-1)^(k-1)`); anything else would be a
/// relation not explained by the norm.
pub fn relation_probe(roots: &RootSet, exponent_bound: u32) -> Result<Vec<Vec<i64>>> {
    if exponent_bound == 0 {
        return Err(Error::invalid("exponent bound must be at least 1"));
    }
    let k = roots.k();
    let need = probe_precision(k);
    let fresh;
    let roots = if roots.working_precision() < need {
        fresh = all_roots(k, need)?;
        &fresh
    } else {
        roots
    };
    let w = roots.working_precision();
    let q_max = root_of_unity_order_bound(k);
    let bound = exponent_bound as i64;

    let e = embedding(roots, w)?;
    let eps_bits = (w as i64 / 4).min(COARSE_BITS - 10);
    let mut found: Vec<Vec<i64>> = coarse_candidates(&e, bound, eps_bits)
        .into_iter()
        .filter(|v| v.iter().any(|&m| m != 0))
        .filter(|v| survives(v, &e, &q_max))
        .collect();
    if !found.is_empty() {
        let fine = all_roots(k, 2 * w)?;
        let e2 = embedding(&fine, 2 * w)?;
        found.retain(|v| survives(v, &e2, &q_max));
    }
    found.sort();
    Ok(found)
}

/// [`relation_probe`] with roots computed at the probe precision.
pub fn probe_relations(k: usize, exponent_bound: u32) -> Result<Vec<Vec<i64>>> {
    let roots = all_roots(k, probe_precision(k))?;
    relation_probe(&roots, exponent_bound)
}

/// True iff `v` is `t (1, ..., 1)` for some integer `t`.
pub fn is_multiple_of_ones(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_examples() {
        let c = certify_independence(2, None).unwrap();
        assert!(c.passes);
        assert_eq!(c.nondominant_log_moduli.len(), 1);
        // -log|psi| = log phi for k = 2
        assert!(c.nondominant_log_moduli[0].overlaps(&c.log_alpha1));

        let c = certify_independence(3, None).unwrap();
        assert!(c.passes && c.row_sum_consistent);
        // both complex roots have modulus alpha^(-1/2): log(1.839286755)/2
        let half = 1.839_286_755_214_161f64.ln() / 2.0;
        for l in &c.nondominant_log_moduli {
            assert!((l.to_f64() - half).abs() < 1e-12);
        }
        assert!((c.log_alpha1.to_f64() - 2.0 * half).abs() < 1e-12);

        let roots = all_roots(10, 256).unwrap();
        assert!(independence_certificate(&roots).unwrap().passes);
    }

    #[test]
    fn subset_masks() {
        let roots = all_roots(4, 128).unwrap();
        let mask = parse_mask("1011").unwrap();
        let c = independence_certificate_subset(&roots, Some(&mask)).unwrap();
        assert_eq!(c.subset, vec![1, 3, 4]);
        assert!(c.passes);
        assert!(independence_certificate_subset(&roots, Some(&parse_mask("1111").unwrap())).is_err());
        assert!(independence_certificate_subset(&roots, Some(&parse_mask("101").unwrap())).is_err());
        assert!(parse_mask("10x1").is_err());
    }

    #[test]
    fn certificates_through_twenty() {
        for k in 2..=20 {
            let c = certify_independence(k, None).unwrap();
            assert!(c.passes, "k={k}");
            assert_eq!(c.nondominant_log_moduli.len(), k - 1);
        }
    }

    #[test]
    fn simplest_rational() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(simplest_between(&q(1, 3), &q(1, 2)), q(1, 2));
        assert_eq!(simplest_between(&q(3, 10), &q(4, 10)), q(1, 3));
        assert_eq!(simplest_between(&q(0, 1), &q(1, 5)), q(0, 1));
        assert_eq!(simplest_between(&q(7, 5), &q(7, 5)), q(7, 5));
        assert_eq!(simplest_between(&q(5, 2), &q(7, 2)), q(3, 1));
    }

    #[test]
    fn probe_fibonacci() {
        let r = probe_relations(2, 3).unwrap();
        let expected: Vec<Vec<i64>> = [-3, -2, -1, 1, 2, 3].iter().map(|&t| vec![t, t]).collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn probe_tribonacci() {
        let r = probe_relations(3, 2).unwrap();
        let expected: Vec<Vec<i64>> = [-2, -1, 1, 2].iter().map(|&t| vec![t, t, t]).collect();
        assert_eq!(r, expected);
        assert!(relation_probe(&all_roots(3, 128).unwrap(), 0).is_err());
    }

    #[test]
    fn conjugate_modulus_pairs_fail_the_argument_filter() {
        // alpha_2 / alpha_3 has modulus 1 but is not a root of unity
        let roots = all_roots(3, probe_precision(3)).unwrap();
        let e = embedding(&roots, roots.working_precision()).unwrap();
        let q = root_of_unity_order_bound(3);
        assert!(!survives(&[0, 1, -1], &e, &q));
        assert!(survives(&[1, 1, 1], &e, &q));
        assert!(!survives(&[1, 0, 0], &e, &q));
    }
}
