//! Exact k-generalized Fibonacci numbers.
//!
//! Indexing follows the convention `F_i = 0` for `i = -(k-2), ..., 0` and
//! `F_1 = 1`, so for every k the sequence reads `0, ..., 0, 1, 1, 2, 4, ...`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Append-only cache of `F_n^{(k)}` for indices `-(k-2)..=high_water`.
#[derive(Clone, Debug)]
pub struct SequenceCache {
    k: usize,
    // terms[i] holds F_{i - (k-2)}
    terms: Vec<BigInt>,
    // running sum of the last k materialized terms
    window: BigInt,
}

impl SequenceCache {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {k}")));
        }
        let mut terms = vec![BigInt::zero(); k - 1];
        terms.push(BigInt::one());
        Ok(SequenceCache {
            k,
            terms,
            window: BigInt::one(),
        })
    }

    /// Cache materialized through index `n`.
    pub fn with_terms(k: usize, n: i64) -> Result<Self> {
        let mut c = SequenceCache::new(k)?;
        c.materialize(n)?;
        Ok(c)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn min_index(&self) -> i64 {
        -(self.k as i64 - 2)
    }

    pub fn high_water(&self) -> i64 {
        self.terms.len() as i64 - 1 + self.min_index()
    }

    fn slot(&self, n: i64) -> Result<usize> {
        if n < self.min_index() {
            return Err(Error::invalid(format!(
                "index {n} is below {} for k = {}",
                self.min_index(),
                self.k
            )));
        }
        Ok((n - self.min_index()) as usize)
    }

    pub fn materialize(&mut self, n: i64) -> Result<()> {
        let slot = self.slot(n)?;
        if slot < self.terms.len() {
            return Ok(());
        }
        // grow geometrically so repeated single-step extensions stay amortized
        let target = slot.max(self.terms.len() * 2);
        self.terms.reserve(target + 1 - self.terms.len());
        while self.terms.len() <= target {
            let next = self.window.clone();
            let dropped = &self.terms[self.terms.len() - self.k];
            self.window = &self.window * 2u32 - dropped;
            self.terms.push(next);
        }
        Ok(())
    }

    /// `F_n`, extending the cache as needed.
    pub fn term(&mut self, n: i64) -> Result<&BigInt> {
        self.materialize(n)?;
        let slot = self.slot(n)?;
        Ok(&self.terms[slot])
    }

    /// `F_n` from the already materialized range, for shared read-only use.
    pub fn get(&self, n: i64) -> Option<&BigInt> {
        let slot = self.slot(n).ok()?;
        self.terms.get(slot)
    }

    /// Smallest `n >= 1` with `F_n = v`, or `None`.
    ///
    /// Since `1.5 <= alpha < 2`, `alpha^(n-2) < F_n < alpha^(n-1)` brackets the
    /// index between `log2(v) + 1` and `log_{1.5}(v) + 2`; the search inside
    /// the bracket is an exact binary search on the non-decreasing tail.
    pub fn membership(&mut self, v: &BigInt) -> Result<Option<i64>> {
        if v < &BigInt::one() {
            return Err(Error::invalid("membership requires v >= 1"));
        }
        let bits = v.bits() as i64; // 2^(bits-1) <= v < 2^bits
        let lo = 1i64.max(bits - 2);
        // log_{1.5}(v) < bits / log2(1.5) < 1.71 * bits
        let hi = (bits * 171) / 100 + 4;
        self.materialize(hi)?;
        let (mut a, mut b) = (lo, hi);
        // smallest n in [a, b] with F_n >= v
        while a < b {
            let m = a + (b - a) / 2;
            if self.get(m).unwrap() >= v {
                b = m;
            } else {
                a = m + 1;
            }
        }
        Ok((self.get(a).unwrap() == v).then_some(a))
    }
}

/// `F_n^{(k)}` computed from a fresh cache.
pub fn kfib(k: usize, n: i64) -> Result<BigInt> {
    let mut c = SequenceCache::new(k)?;
    Ok(c.term(n)?.clone())
}

/// Smallest index of `v` in the k-sequence, if any.
pub fn membership(k: usize, v: &BigInt) -> Result<Option<i64>> {
    SequenceCache::new(k)?.membership(v)
}
