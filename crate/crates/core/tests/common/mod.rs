//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

/// `F_1, F_2, ...` for the k-sequence up to `limit`, by direct summation of
/// the previous k terms (no caching tricks).
pub fn values_up_to(k: usize, limit: u64) -> Vec<u64> {
    let mut v: Vec<u64> = vec![0; k - 1];
    v.push(1);
    loop {
        let next: u64 = v[v.len() - k..].iter().sum();
        if next > limit {
            break;
        }
        v.push(next);
    }
    v[k - 1..].to_vec()
}

/// Every `1 < a < b < c` with `ab+1`, `ac+1`, `bc+1` in the sequence and
/// `bc + 1 <= limit`, found from the value side.
pub fn brute_force_triples(k: usize, limit: u64) -> BTreeSet<(u64, u64, u64)> {
    let members: HashSet<u64> = values_up_to(k, limit).into_iter().collect();
    triples_over(&members, limit)
}

/// Value-side enumeration against an arbitrary membership set.
pub fn triples_over(members: &HashSet<u64>, limit: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut sorted: Vec<u64> = members.iter().copied().filter(|&s| s >= 7).collect();
    sorted.sort_unstable();
    let mut out = BTreeSet::new();
    let mut a = 2u64;
    while a * (a + 1) < limit {
        for &s in &sorted {
            if (s - 1) % a != 0 {
                continue;
            }
            let b = (s - 1) / a;
            if b <= a {
                continue;
            }
            for &t in &sorted {
                if (t - 1) % a != 0 {
                    continue;
                }
                let c = (t - 1) / a;
                if c <= b {
                    continue;
                }
                match b.checked_mul(c) {
                    Some(bc) if bc < limit && members.contains(&(bc + 1)) => {
                        out.insert((a, b, c));
                    }
                    _ => {}
                }
            }
        }
        a += 1;
    }
    out
}

/// Largest index with `F_z <= limit`.
pub fn last_index_below(k: usize, limit: u64) -> u64 {
    values_up_to(k, limit).len() as u64
}
