#![allow(dead_code)]

use proptest::prelude::*;
use switchctl_core::{Pattern, SwitchedNetwork, Topology};

/// Candidate undirected pairs for `n` agents whose first `leaders` ids are
/// leaders: every pair except leader-leader.
pub fn candidate_pairs(n: usize, leaders: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !(a < leaders && b < leaders) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn topology_from_mask(n: usize, leaders: usize, mask: &[bool]) -> Topology {
    let edges = candidate_pairs(n, leaders)
        .into_iter()
        .zip(mask)
        .filter(|(_, &keep)| keep)
        .map(|(e, _)| e);
    Topology::new(n, 0..leaders, edges).unwrap()
}

/// Random switched networks with `agents` in the given range.
pub fn arb_network(
    agents: std::ops::RangeInclusive<usize>,
    max_leaders: usize,
    max_snapshots: usize,
) -> impl Strategy<Value = SwitchedNetwork> {
    (agents, 1..=max_snapshots, 0.1f64..0.9)
        .prop_flat_map(move |(n, m, p)| (Just(n), 1..=max_leaders.min(n - 1), Just(m), Just(p)))
        .prop_flat_map(|(n, l, m, p)| {
            let k = candidate_pairs(n, l).len();
            let snapshot = proptest::collection::vec(proptest::bool::weighted(p), k);
            (Just(n), Just(l), proptest::collection::vec(snapshot, m))
        })
        .prop_map(|(n, l, masks)| {
            SwitchedNetwork::new(masks.iter().map(|mask| topology_from_mask(n, l, mask)).collect()).unwrap()
        })
}

pub fn arb_single_leader_topology(max_agents: usize) -> impl Strategy<Value = Topology> {
    (2..=max_agents, 0.1f64..0.9).prop_flat_map(|(n, p)| {
        let k = candidate_pairs(n, 1).len();
        proptest::collection::vec(proptest::bool::weighted(p), k)
            .prop_map(move |mask| topology_from_mask(n, 1, &mask))
    })
}

pub fn arb_pattern(rows: usize, cols: usize, density: f64) -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(proptest::bool::weighted(density), rows * cols).prop_map(move |bits| {
        let rows_v: Vec<Vec<bool>> = bits.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect();
        if cols == 0 {
            Pattern::empty(rows, 0)
        } else {
            Pattern::from_rows(&rows_v)
        }
    })
}

/// Every permutation of `0..n` drawn uniformly.
pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Pattern with bits taken from `code`, row-major.
pub fn pattern_from_bits(rows: usize, cols: usize, code: u64) -> Pattern {
    let mut p = Pattern::empty(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            p.set(i, j, code >> (i * cols + j) & 1 == 1);
        }
    }
    p
}
