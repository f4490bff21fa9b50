//! Exhaustive index-side search for triples `1 < a < b < c` with
//! `ab + 1 = F_x`, `ac + 1 = F_y`, `bc + 1 = F_z`.
//!
//! For indices `x <= y <= z` the triple is forced:
//! `a^2 = (F_x - 1)(F_y - 1) / (F_z - 1)`, `b = (F_x - 1)/a`, `c = (F_y - 1)/a`.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SequenceCache;
use crate::squares::exact_sqrt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TripleIndex {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl TripleIndex {
    /// Inside the pruned region `2y >= z - 4` and `(k+1) x > z - 4(k+1)`,
    /// i.e. `y >= z/2 - 2` and `x > z/(k+1) - 4`.
    pub fn admissible(&self, k: usize) -> bool {
        let k1 = k as u64 + 1;
        4 <= self.x
            && self.x <= self.y
            && self.y <= self.z
            && 2 * self.y + 4 >= self.z
            && k1 * self.x + 4 * k1 > self.z
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSolution {
    pub k: usize,
    #[serde(serialize_with = "crate::json::big", deserialize_with = "crate::json::big_de")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::json::big", deserialize_with = "crate::json::big_de")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::json::big", deserialize_with = "crate::json::big_de")]
    pub c: BigInt,
    #[serde(with = "crate::json::dec")]
    pub x: u64,
    #[serde(with = "crate::json::dec")]
    pub y: u64,
    #[serde(with = "crate::json::dec")]
    pub z: u64,
}

impl TripleSolution {
    pub fn index(&self) -> TripleIndex {
        TripleIndex {
            x: self.x,
            y: self.y,
            z: self.z,
        }
    }

    /// Re-checks the defining identities from scratch.
    pub fn check(&self) -> Result<bool> {
        let seq = SequenceCache::with_terms(self.k, self.z as i64)?;
        let f = |n: u64| seq.get(n as i64).unwrap() - 1;
        let (fx, fy, fz) = (f(self.x), f(self.y), f(self.z));
        let (a, b, c) = (&self.a, &self.b, &self.c);
        Ok(BigInt::one() < *a
            && a < b
            && b < c
            && a * b == fx
            && a * c == fy
            && b * c == fz
            && a * a * &fz == &fx * &fy)
    }
}

/// Progress of a search: every layer `z <= cursor` has been processed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub k: usize,
    pub z_max: u64,
    pub cursor: u64,
    pub prune: bool,
    pub solutions: Vec<TripleSolution>,
    pub timestamp: String,
}

impl SearchCheckpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::io(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        // write-then-rename so an interrupted write never leaves a torn file
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub prune: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Where to write the checkpoint after each finished layer.
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: true,
            jobs: None,
            checkpoint_path: None,
        }
    }
}

/// The unique candidate triple at indices `(x, y, z)`, if it exists.
pub fn solve_indices(seq: &SequenceCache, x: u64, y: u64, z: u64) -> Option<TripleSolution> {
    let f = |n: u64| seq.get(n as i64).map(|v| v - 1u32);
    let (fx, fy, fz) = (f(x)?, f(y)?, f(z)?);
    if fz.is_zero() {
        return None;
    }
    let g = &fx * &fy;
    let (q, r) = g.div_rem(&fz);
    if !r.is_zero() {
        return None;
    }
    let a = exact_sqrt(&q)?;
    if a <= BigInt::one() {
        return None;
    }
    let (b, rb) = fx.div_rem(&a);
    let (c, rc) = fy.div_rem(&a);
    if !rb.is_zero() || !rc.is_zero() || !(a < b && b < c) || &b * &c != fz {
        return None;
    }
    Some(TripleSolution {
        k: seq.k(),
        a,
        b,
        c,
        x,
        y,
        z,
    })
}

fn layer(seq: &SequenceCache, z: u64, prune: bool) -> Vec<TripleSolution> {
    let k1 = seq.k() as u64 + 1;
    let y_min = if prune { 4.max(z.saturating_sub(4).div_ceil(2)) } else { 4 };
    let mut out = Vec::new();
    for y in y_min..=z {
        // (k+1) x > z - 4(k+1)
        let x_min = if prune {
            4.max((z + 1).saturating_sub(4 * k1).div_ceil(k1))
        } else {
            4
        };
        for x in x_min..=y {
            if let Some(s) = solve_indices(seq, x, y, z) {
                out.push(s);
            }
        }
    }
    out
}

fn sort_solutions(v: &mut [TripleSolution]) {
    v.sort_by(|p, q| (p.z, p.y, p.x, &p.a).cmp(&(q.z, q.y, q.x, &q.a)));
}

/// All triples with `z <= z_max`, optionally resuming from a checkpoint.
/// The returned checkpoint has `cursor = z_max` and the solutions sorted by
/// `(z, y, x)`.
pub fn search(
    k: usize,
    z_max: u64,
    resume: Option<&SearchCheckpoint>,
    opts: &SearchOptions,
) -> Result<SearchCheckpoint> {
    if z_max < 6 {
        return Err(Error::invalid("z_max must be at least 6"));
    }
    let mut state = match resume {
        Some(cp) => {
            if cp.k != k || cp.prune != opts.prune || cp.cursor > z_max {
                return Err(Error::invalid(format!(
                    "checkpoint (k={}, prune={}, cursor={}) does not match this search",
                    cp.k, cp.prune, cp.cursor
                )));
            }
            let mut s = cp.clone();
            s.z_max = z_max;
            s
        }
        None => SearchCheckpoint {
            k,
            z_max,
            cursor: 3,
            prune: opts.prune,
            solutions: Vec::new(),
            timestamp: String::new(),
        },
    };
    let seq = SequenceCache::with_terms(k, z_max as i64)?;
    let pool = match opts.jobs {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::invalid(e.to_string()))?,
        ),
        None => None,
    };
    let chunk = opts.jobs.unwrap_or_else(rayon::current_num_threads).max(1) as u64 * 2;
    while state.cursor < z_max {
        let start = state.cursor + 1;
        let end = (start + chunk - 1).min(z_max);
        let run = || {
            (start..=end)
                .into_par_iter()
                .map(|z| layer(&seq, z, opts.prune))
                .collect::<Vec<_>>()
        };
        let layers = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for (z, found) in (start..=end).zip(layers) {
            state.solutions.extend(found);
            state.cursor = z;
            if let Some(path) = &opts.checkpoint_path {
                state.timestamp = chrono::Utc::now().to_rfc3339();
                state.save(path)?;
            }
        }
    }
    sort_solutions(&mut state.solutions);
    state.timestamp = chrono::Utc::now().to_rfc3339();
    Ok(state)
}

/// Indices of `(a, b, c)` if `ab+1`, `ac+1` and `bc+1` are all k-Fibonacci
/// numbers. Requires `1 < a < b < c`.
pub fn verify_solution(k: usize, a: &BigInt, b: &BigInt, c: &BigInt) -> Result<Option<TripleIndex>> {
    if !(BigInt::one() < *a && a < b && b < c) {
        return Err(Error::invalid("verify_solution requires 1 < a < b < c"));
    }
    let mut seq = SequenceCache::new(k)?;
    let mut idx = |v: BigInt| seq.membership(&(v + 1u32));
    let (Some(x), Some(y), Some(z)) = (idx(a * b)?, idx(a * c)?, idx(b * c)?) else {
        return Ok(None);
    };
    Ok(Some(TripleIndex {
        x: x as u64,
        y: y as u64,
        z: z as u64,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(k: usize, z_max: u64, prune: bool) -> Vec<TripleSolution> {
        let opts = SearchOptions {
            prune,
            ..Default::default()
        };
        search(k, z_max, None, &opts).unwrap().solutions
    }

    #[test]
    fn fibonacci_has_no_triples() {
        assert!(run(2, 40, true).is_empty());
    }

    #[test]
    fn degenerate_indices_rejected() {
        let seq = SequenceCache::with_terms(3, 10).unwrap();
        assert!(solve_indices(&seq, 6, 6, 6).is_none());
        assert!(search(3, 5, None, &SearchOptions::default()).is_err());
    }

    #[test]
    fn solutions_reverify() {
        for k in 3..=5 {
            for s in run(k, 30, true) {
                assert!(s.check().unwrap());
                assert_eq!(verify_solution(k, &s.a, &s.b, &s.c).unwrap(), Some(s.index()));
                assert!(s.index().admissible(k));
            }
        }
    }

    #[test]
    fn pruning_is_safe() {
        for k in 2..=4 {
            assert_eq!(run(k, 30, true), run(k, 30, false), "k={k}");
        }
    }

    #[test]
    fn verify_examples() {
        let b = |v: i64| BigInt::from(v);
        // 2*6+1 = 13 = F_7; no c <= 2000 completes it
        for c in 7..2000 {
            assert_eq!(verify_solution(2, &b(2), &b(6), &b(c)).unwrap(), None);
        }
        assert!(verify_solution(2, &b(3), &b(3), &b(5)).is_err());
        assert!(verify_solution(2, &b(1), &b(3), &b(5)).is_err());
        // Tribonacci: 2*3+1 = 7 = F_5 but 2c+1, 3c+1 are never both members for small c
        for c in 4..2000 {
            assert_eq!(verify_solution(3, &b(2), &b(3), &b(c)).unwrap(), None);
        }
    }

    #[test]
    fn resume_matches_uninterrupted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let opts = SearchOptions {
            checkpoint_path: Some(path.clone()),
            jobs: Some(2),
            ..Default::default()
        };
        let full = search(4, 32, None, &SearchOptions::default()).unwrap();
        let part = search(4, 20, None, &opts).unwrap();
        let loaded = SearchCheckpoint::load(&path).unwrap();
        assert_eq!(loaded.cursor, 20);
        assert_eq!(loaded.solutions.len(), part.solutions.len());
        let resumed = search(4, 32, Some(&loaded), &SearchOptions::default()).unwrap();
        assert_eq!(resumed.solutions, full.solutions);
        assert_eq!(resumed.cursor, 32);
        let wrong = SearchCheckpoint { k: 3, ..loaded };
        assert!(search(4, 32, Some(&wrong), &SearchOptions::default()).is_err());
    }

    #[test]
    fn solution_json_uses_strings() {
        let s = TripleSolution {
            k: 3,
            a: 2.into(),
            b: 3.into(),
            c: 4.into(),
            x: 5,
            y: 6,
            z: 7,
        };
        let v = serde_json::to_value(&s).unwrap();
        for f in ["a", "b", "c", "x", "y", "z"] {
            assert!(v[f].is_string(), "{f}");
        }
        let back: TripleSolution = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
