//! Controllability of switched follower dynamics.
//!
//! The verdict comes from the graph criteria on the union graph: plain
//! connectivity with one leader, leader-follower connectivity with several.
//! A verdict can be corroborated numerically: random positive integer
//! weights are substituted into every subsystem and the rank of the
//! switched controllability matrix is computed exactly. One full-rank draw
//! proves controllability. A rank-deficient draw proves nothing, so
//! negative verdicts carry a graph witness instead.
//!
//! The production rank routine is a subspace fixpoint: start from the span
//! of every `B_j` and close it under every `A_i`. The explicit matrix of
//! all words `A_{i_k}⋯A_{i_1} B_j` with `k < N'` is available through
//! [`enumerate_controllability_matrix`] for cross-checking on small cases.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Matrix, SpanBasis};
use crate::graph::{
    connected_components, follower_subgraph, is_connected, is_leader_follower_connected,
    union_graph, unserved_components, SwitchedNetwork, Topology,
};
use crate::structured::{extract_pair, instantiate_all, NumericPair, StructuredPair};

pub const DEFAULT_BOUND: u64 = 1 << 31;
pub const DEFAULT_TRIALS: usize = 5;
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000;

fn common_shape(pairs: &[NumericPair]) -> Result<(usize, usize)> {
    let first = pairs
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no subsystems".into()))?;
    let (n, n_l) = (first.n_states(), first.n_inputs());
    for (i, p) in pairs.iter().enumerate() {
        if p.a.rows() != n || p.a.cols() != n || p.b.rows() != n || p.b.cols() != n_l {
            return Err(Error::DimensionMismatch(format!(
                "subsystem {i} is ({}x{}, {}x{}), expected ({n}x{n}, {n}x{n_l})",
                p.a.rows(),
                p.a.cols(),
                p.b.rows(),
                p.b.cols()
            )));
        }
    }
    Ok((n, n_l))
}

/// Smallest subspace containing every column of every `B_j` and invariant
/// under every `A_i`.
pub fn reachable_subspace(pairs: &[NumericPair]) -> Result<SpanBasis> {
    let (n, _) = common_shape(pairs)?;
    let mut basis = SpanBasis::new(n);
    let mut pending: Vec<Vec<BigInt>> = Vec::new();
    for p in pairs {
        for col in p.b.columns() {
            if let Some(v) = basis.insert(col) {
                pending.push(v.to_vec());
            }
        }
    }
    while let Some(v) = pending.pop() {
        if basis.is_full() {
            break;
        }
        for p in pairs {
            if let Some(w) = basis.insert(p.a.mul_vec(&v)) {
                pending.push(w.to_vec());
            }
        }
    }
    Ok(basis)
}

/// Rank of the switched controllability matrix, via the subspace fixpoint.
pub fn reachable_subspace_rank(pairs: &[NumericPair]) -> Result<usize> {
    reachable_subspace(pairs).map(|b| b.rank())
}

/// Column label of the switched controllability matrix: the product
/// `A_{letters[k-1]} ⋯ A_{letters[0]} B_source`, column `input`.
/// Subsystems are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    /// Subsystems in the order they are applied (innermost first).
    pub letters: Vec<usize>,
    pub source: usize,
    pub input: usize,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters.iter().rev() {
            write!(f, "A{}", l + 1)?;
        }
        write!(f, "B{}", self.source + 1)?;
        write!(f, "[{}]", self.input)
    }
}

#[derive(Clone, Debug)]
pub struct ControllabilityMatrix {
    pub words: Vec<Word>,
    pub matrix: Matrix,
}

/// Column count of the switched controllability matrix:
/// `m · n_l · (1 + m + … + m^(n-1))`, saturating.
pub fn controllability_column_count(n_states: usize, n_subsystems: usize, n_inputs: usize) -> u128 {
    let m = n_subsystems as u128;
    let mut words: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..n_states {
        words = words.saturating_add(level);
        level = level.saturating_mul(m);
    }
    words.saturating_mul(m).saturating_mul(n_inputs as u128)
}

/// Builds the switched controllability matrix explicitly.
///
/// Columns are ordered by word length, then by source subsystem `B_j`,
/// then lexicographically by the applied subsystems (innermost first), then
/// by input column. For two subsystems, three states and one input this is
/// `B1, B2, A1B1, A2B1, A1B2, A2B2, A1A1B1, A2A1B1, A1A2B1, A2A2B1, …`.
pub fn enumerate_controllability_matrix(pairs: &[NumericPair], cap: u128) -> Result<ControllabilityMatrix> {
    let (n, n_l) = common_shape(pairs)?;
    let m = pairs.len();
    let required = controllability_column_count(n, m, n_l);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }

    // one frontier per source: (letters, A-word applied to B_source)
    let mut frontiers: Vec<Vec<(Vec<usize>, Matrix)>> =
        pairs.iter().map(|p| vec![(Vec::new(), p.b.clone())]).collect();
    let mut words = Vec::with_capacity(required as usize);
    let mut columns = Vec::with_capacity(required as usize);

    for length in 0..n {
        if length > 0 {
            for frontier in frontiers.iter_mut() {
                *frontier = frontier
                    .iter()
                    .flat_map(|(letters, product)| {
                        pairs.iter().enumerate().map(move |(i, p)| {
                            let mut next = letters.clone();
                            next.push(i);
                            (next, p.a.mul(product))
                        })
                    })
                    .collect();
            }
        }
        for (source, frontier) in frontiers.iter().enumerate() {
            for (letters, product) in frontier {
                for input in 0..n_l {
                    words.push(Word {
                        letters: letters.clone(),
                        source,
                        input,
                    });
                    columns.push(product.column(input));
                }
            }
        }
    }

    Ok(ControllabilityMatrix {
        words,
        matrix: Matrix::from_columns(n, &columns),
    })
}

/// `[B, AB, …, A^(n-1)B]` of a single pair.
pub fn kalman_matrix(pair: &NumericPair) -> Matrix {
    let n = pair.n_states();
    let mut blocks = Vec::with_capacity(n);
    let mut current = pair.b.clone();
    for k in 0..n {
        if k > 0 {
            current = pair.a.mul(&current);
        }
        blocks.push(current.clone());
    }
    let columns: Vec<Vec<BigInt>> = blocks.iter().flat_map(|b| b.columns().collect::<Vec<_>>()).collect();
    Matrix::from_columns(n, &columns)
}

/// Which graph criterion produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// One snapshot, one leader: the graph is connected.
    Connected,
    /// One snapshot, several leaders: the graph is leader-follower connected.
    LeaderFollowerConnected,
    /// Several snapshots, one leader: the union graph is connected.
    UnionConnected,
    /// Several snapshots, several leaders: the union graph is
    /// leader-follower connected.
    UnionLeaderFollowerConnected,
}

impl Criterion {
    pub fn for_shape(n_snapshots: usize, n_leaders: usize) -> Self {
        match (n_snapshots > 1, n_leaders > 1) {
            (false, false) => Criterion::Connected,
            (false, true) => Criterion::LeaderFollowerConnected,
            (true, false) => Criterion::UnionConnected,
            (true, true) => Criterion::UnionLeaderFollowerConnected,
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Criterion::Connected => "fixed topology, single leader: graph connected",
            Criterion::LeaderFollowerConnected => "fixed topology, multiple leaders: graph leader-follower connected",
            Criterion::UnionConnected => "switching topology, single leader: union graph connected",
            Criterion::UnionLeaderFollowerConnected => {
                "switching topology, multiple leaders: union graph leader-follower connected"
            }
        }
    }
}

/// Why a network is not structurally controllable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Followers no leader can reach in the union graph; these are the
    /// rows that stay zero in the controllability matrix for every weight
    /// choice.
    pub unreachable: Vec<usize>,
    /// Follower components of the union graph without any leader link.
    pub unserved_components: Vec<Vec<usize>>,
    /// No leader has any link, so every input column is zero.
    pub null_input: bool,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.null_input {
            return write!(f, "every leader is isolated (null input matrix)");
        }
        let parts: Vec<String> = self
            .unserved_components
            .iter()
            .map(|c| match c.as_slice() {
                [v] => format!("isolated agent {v}"),
                _ => format!(
                    "follower component {{{}}} has no leader link",
                    c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                ),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEvidence {
    pub union_components: Vec<Vec<usize>>,
    pub follower_components: Vec<Vec<usize>>,
    pub witness: Option<Witness>,
}

/// Outcome of randomized rank certification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Seed of the reported draw; re-instantiating with it reproduces the
    /// matrices.
    pub seed: u64,
    pub trial: usize,
    pub trials_run: usize,
    pub bound: u64,
    pub achieved_rank: usize,
    pub required_rank: usize,
}

impl Certificate {
    pub fn is_full_rank(&self) -> bool {
        self.achieved_rank == self.required_rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub structurally_controllable: bool,
    pub criterion: Criterion,
    pub n_states: usize,
    pub n_inputs: usize,
    pub n_snapshots: usize,
    pub evidence: GraphEvidence,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub certify: bool,
    pub seed: u64,
    pub trials: usize,
    pub bound: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            certify: false,
            seed: 0,
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
        }
    }
}

/// Seed used for certification trial `trial`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Draws up to `trials` instantiations of all subsystems and stops at the
/// first one whose controllability matrix has full row rank. Returns the
/// first full-rank draw, or the best draw when none reaches full rank.
pub fn certify(pairs: &[StructuredPair], seed: u64, trials: usize, bound: u64) -> Result<Option<Certificate>> {
    let required = pairs.first().map_or(0, StructuredPair::n_states);
    let mut best: Option<Certificate> = None;
    for trial in 0..trials {
        let s = trial_seed(seed, trial);
        let numeric = instantiate_all(pairs, s, bound)?;
        let achieved = reachable_subspace_rank(&numeric)?;
        let cert = Certificate {
            seed: s,
            trial,
            trials_run: trial + 1,
            bound,
            achieved_rank: achieved,
            required_rank: required,
        };
        if cert.is_full_rank() {
            return Ok(Some(cert));
        }
        if best.as_ref().is_none_or(|b| achieved > b.achieved_rank) {
            best = Some(cert);
        }
        if let Some(b) = best.as_mut() {
            b.trials_run = trial + 1;
        }
    }
    Ok(best)
}

/// Decides structural controllability of a switched leader-follower
/// network from its union graph.
pub fn decide(network: &SwitchedNetwork, options: &DecideOptions) -> Result<Verdict> {
    let union = union_graph(network);
    let n_leaders = network.leaders().len();
    let criterion = Criterion::for_shape(network.len(), n_leaders);
    let controllable = if n_leaders == 1 {
        is_connected(&union)
    } else {
        is_leader_follower_connected(&union)
    };

    let pairs: Vec<StructuredPair> = network.snapshots().iter().map(extract_pair).collect();
    let summed = StructuredPair::sum(&pairs)?;
    let n_states = summed.n_states();

    let witness = if controllable {
        None
    } else {
        let unreachable: Vec<usize> = summed
            .form_i_witness()
            .unwrap_or_default()
            .into_iter()
            .map(|q| summed.followers()[q])
            .collect();
        Some(Witness {
            unreachable,
            unserved_components: unserved_components(&union),
            null_input: summed.b().count_free() == 0,
        })
    };
    debug_assert_eq!(
        witness.as_ref().is_none_or(|w| w.unreachable.is_empty()),
        controllable,
        "graph criterion and reachability disagree"
    );

    let certificate = if options.certify && controllable {
        certify(&pairs, options.seed, options.trials, options.bound)?
    } else {
        None
    };

    Ok(Verdict {
        structurally_controllable: controllable,
        criterion,
        n_states,
        n_inputs: n_leaders,
        n_snapshots: network.len(),
        evidence: GraphEvidence {
            union_components: connected_components(&union),
            follower_components: follower_subgraph(&union).connected_components(),
            witness,
        },
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRank {
    pub agents: Vec<usize>,
    pub served: bool,
    pub rank: usize,
}

/// Per-component controllability ranks of a fixed topology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRankReport {
    pub components: Vec<ComponentRank>,
    pub sum_of_ranks: usize,
    pub full_rank: usize,
    pub n_states: usize,
}

impl BlockRankReport {
    pub fn is_additive(&self) -> bool {
        self.sum_of_ranks == self.full_rank
    }
}

/// Splits the followers of a fixed topology into follower-subgraph
/// components and computes the controllability rank of each component's
/// diagonal block of `(A, B)` under `assignment`. `A` is block diagonal
/// over these components, so the ranks add up to the rank of the whole.
pub fn block_rank_check(topology: &Topology, assignment: &NumericPair) -> Result<BlockRankReport> {
    let followers = topology.followers();
    let n = followers.len();
    let n_l = topology.leaders().len();
    if assignment.n_states() != n || assignment.n_inputs() != n_l {
        return Err(Error::DimensionMismatch(format!(
            "assignment has {} states/{} inputs, topology has {n}/{n_l}",
            assignment.n_states(),
            assignment.n_inputs()
        )));
    }
    let inputs: Vec<usize> = (0..n_l).collect();
    let unserved = unserved_components(topology);

    let components: Vec<ComponentRank> = follower_subgraph(topology)
        .connected_components()
        .into_iter()
        .map(|agents| {
            let idx: Vec<usize> = agents
                .iter()
                .map(|a| followers.binary_search(a).expect("component member is a follower"))
                .collect();
            let block = NumericPair {
                a: assignment.a.submatrix(&idx, &idx),
                b: assignment.b.submatrix(&idx, &inputs),
                assignment: Vec::new(),
            };
            ComponentRank {
                served: !unserved.contains(&agents),
                rank: kalman_matrix(&block).rank(),
                agents,
            }
        })
        .collect();

    Ok(BlockRankReport {
        sum_of_ranks: components.iter().map(|c| c.rank).sum(),
        full_rank: kalman_matrix(assignment).rank(),
        components,
        n_states: n,
    })
}
