mod common;

use std::collections::BTreeSet;

use kfib_core::triples::{search, verify_solution, SearchOptions};
use num_traits::ToPrimitive;

fn index_side(k: usize, z_max: u64, prune: bool) -> BTreeSet<(u64, u64, u64)> {
    let opts = SearchOptions {
        prune,
        ..Default::default()
    };
    search(k, z_max, None, &opts)
        .unwrap()
        .solutions
        .iter()
        .map(|s| (s.a.to_u64().unwrap(), s.b.to_u64().unwrap(), s.c.to_u64().unwrap()))
        .collect()
}

#[test]
fn oracle_values_match_sequence() {
    for k in 2..=6 {
        let vals = common::values_up_to(k, 1_000_000);
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(kfib_core::sequence::kfib(k, i as i64 + 1).unwrap(), (*v).into());
        }
    }
}

#[test]
fn brute_force_finds_planted_triples() {
    // (2, 3, 4): 7, 9, 13; (3, 5, 8): 16, 25, 41; and (2, 4, 6): 9, 13, 25
    let set = [7u64, 9, 13, 16, 25, 41].into_iter().collect();
    let found = common::triples_over(&set, 100);
    assert_eq!(found, [(2, 3, 4), (2, 4, 6), (3, 5, 8)].into_iter().collect());
}

#[test]
fn index_search_matches_brute_force() {
    for k in 2..=4 {
        let z_max = common::last_index_below(k, 1_000_000);
        let limit = *common::values_up_to(k, 1_000_000).last().unwrap();
        let oracle = common::brute_force_triples(k, limit);
        assert_eq!(index_side(k, z_max, true), oracle, "k={k} pruned");
        assert_eq!(index_side(k, z_max, false), oracle, "k={k} unpruned");
    }
}

#[test]
fn every_solution_reverifies() {
    for k in 3..=6 {
        for s in search(k, 45, None, &SearchOptions::default()).unwrap().solutions {
            assert!(s.check().unwrap());
            let idx = verify_solution(k, &s.a, &s.b, &s.c).unwrap().unwrap();
            assert_eq!(idx, s.index());
        }
    }
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let one = SearchOptions {
        jobs: Some(1),
        ..Default::default()
    };
    let four = SearchOptions {
        jobs: Some(4),
        ..Default::default()
    };
    for k in [3, 5] {
        assert_eq!(
            search(k, 40, None, &one).unwrap().solutions,
            search(k, 40, None, &four).unwrap().solutions
        );
    }
}
