//! Structured follower dynamics extracted from a topology, and the
//! pattern-level tests on them.
//!
//! For a topology with followers `f_0 < f_1 < …` and leaders `l_0 < l_1 < …`
//! the follower state `q` is agent `f_q` and input column `p` is leader
//! `l_p`. `A` is free at `(q, p)` when followers `q` and `p` are linked, and
//! on the whole diagonal (every agent weighs its own state). `B` is free at
//! `(q, p)` when follower `q` is linked to leader `p`. Every free entry is an
//! independent parameter; the row-sum coupling of a true Laplacian is not
//! modelled.

use std::collections::VecDeque;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Matrix;
use crate::graph::Topology;
use crate::pattern::{g_rank, Pattern};

/// Identifier of one free parameter inside a [`StructuredPair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParamId(pub usize);

/// Zero/free pattern of a pair `(A, B)` together with parameter ids.
///
/// Parameters are numbered diagonal of `A` first, then the off-diagonal of
/// `A` in row-major order, then `B` in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredPair {
    followers: Vec<usize>,
    leaders: Vec<usize>,
    a: Pattern,
    b: Pattern,
    a_ids: Vec<Option<ParamId>>,
    b_ids: Vec<Option<ParamId>>,
    n_params: usize,
}

impl StructuredPair {
    /// Wraps arbitrary patterns. States and inputs are labelled `0..n` and
    /// `0..n_l`.
    pub fn from_patterns(a: Pattern, b: Pattern) -> Result<Self> {
        let n = a.rows();
        Self::labelled((0..n).collect(), (0..b.cols()).collect(), a, b)
    }

    fn labelled(followers: Vec<usize>, leaders: Vec<usize>, a: Pattern, b: Pattern) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n || b.rows() != n || b.cols() != leaders.len() || followers.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        let mut next = 0;
        let mut fresh = || {
            next += 1;
            Some(ParamId(next - 1))
        };
        let mut a_ids = vec![None; n * n];
        for i in 0..n {
            if a.get(i, i) {
                a_ids[i * n + i] = fresh();
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && a.get(i, j) {
                    a_ids[i * n + j] = fresh();
                }
            }
        }
        let n_l = b.cols();
        let mut b_ids = vec![None; n * n_l];
        for i in 0..n {
            for j in 0..n_l {
                if b.get(i, j) {
                    b_ids[i * n_l + j] = fresh();
                }
            }
        }
        Ok(StructuredPair {
            followers,
            leaders,
            a,
            b,
            a_ids,
            b_ids,
            n_params: next,
        })
    }

    /// Number of follower states `N'`.
    pub fn n_states(&self) -> usize {
        self.a.rows()
    }

    /// Number of input columns `n_l`.
    pub fn n_inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn a(&self) -> &Pattern {
        &self.a
    }

    pub fn b(&self) -> &Pattern {
        &self.b
    }

    /// Agent id of each state row.
    pub fn followers(&self) -> &[usize] {
        &self.followers
    }

    /// Agent id of each input column.
    pub fn leaders(&self) -> &[usize] {
        &self.leaders
    }

    pub fn a_param(&self, i: usize, j: usize) -> Option<ParamId> {
        self.a_ids[i * self.n_states() + j]
    }

    pub fn b_param(&self, i: usize, j: usize) -> Option<ParamId> {
        self.b_ids[i * self.n_inputs() + j]
    }

    /// `[A B]`.
    pub fn concatenated(&self) -> Pattern {
        self.a.hstack(&self.b)
    }

    /// Pattern of `(A_1 + … + A_m, B_1 + … + B_m)` with fresh parameters.
    pub fn sum(pairs: &[StructuredPair]) -> Result<StructuredPair> {
        let first = pairs
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no pairs to sum".into()))?;
        let mut a = first.a.clone();
        let mut b = first.b.clone();
        for p in &pairs[1..] {
            check_same_shape(first, p)?;
            a = a.or(&p.a);
            b = b.or(&p.b);
        }
        Self::labelled(first.followers.clone(), first.leaders.clone(), a, b)
    }

    /// States not reachable from any input in the representation digraph,
    /// which has an arc `x_p → x_q` when `A[q][p]` is free and `u_p → x_q`
    /// when `B[q][p]` is free.
    pub fn unreachable_states(&self) -> Vec<usize> {
        let n = self.n_states();
        let mut reached = vec![false; n];
        let mut queue = VecDeque::new();
        for (q, r) in reached.iter_mut().enumerate() {
            if !self.b.row_is_zero(q) {
                *r = true;
                queue.push_back(q);
            }
        }
        while let Some(p) = queue.pop_front() {
            for (q, r) in reached.iter_mut().enumerate() {
                if !*r && self.a.get(q, p) {
                    *r = true;
                    queue.push_back(q);
                }
            }
        }
        (0..n).filter(|&q| !reached[q]).collect()
    }

    /// Reducibility witness: the unreachable states, or `None` when every
    /// state is reachable from the inputs.
    ///
    /// Ordering the witness states first gives the block-triangular form
    /// with a zero input block, and conversely the leading block of any
    /// such form is closed under predecessors, so it is unreachable.
    pub fn form_i_witness(&self) -> Option<Vec<usize>> {
        let w = self.unreachable_states();
        (!w.is_empty()).then_some(w)
    }

    pub fn is_form_i(&self) -> bool {
        self.form_i_witness().is_some()
    }

    /// Some `k` rows of `[A B]` have free entries in fewer than `k` columns,
    /// i.e. the term rank of `[A B]` is below `N'` (Hall's condition).
    pub fn is_form_ii(&self) -> bool {
        g_rank(&self.concatenated()) < self.n_states()
    }

    /// Draws every parameter uniformly from `[1, bound]`; deterministic in
    /// `seed`.
    pub fn instantiate(&self, seed: u64, bound: u64) -> Result<NumericPair> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.instantiate_with_rng(&mut rng, bound)
    }

    pub fn instantiate_with_rng<R: Rng + ?Sized>(&self, rng: &mut R, bound: u64) -> Result<NumericPair> {
        if bound < 1 {
            return Err(Error::InvalidBound(bound));
        }
        let assignment: Vec<u64> = (0..self.n_params).map(|_| rng.gen_range(1..=bound)).collect();
        self.with_assignment(assignment)
    }

    /// Substitutes `assignment[id]` for each parameter.
    pub fn with_assignment(&self, assignment: Vec<u64>) -> Result<NumericPair> {
        if assignment.len() != self.n_params {
            return Err(Error::DimensionMismatch(format!(
                "assignment has {} values for {} parameters",
                assignment.len(),
                self.n_params
            )));
        }
        let n = self.n_states();
        let n_l = self.n_inputs();
        let mut a = Matrix::zeros(n, n);
        let mut b = Matrix::zeros(n, n_l);
        for i in 0..n {
            for j in 0..n {
                if let Some(ParamId(id)) = self.a_param(i, j) {
                    a.set(i, j, BigInt::from(assignment[id]));
                }
            }
            for j in 0..n_l {
                if let Some(ParamId(id)) = self.b_param(i, j) {
                    b.set(i, j, BigInt::from(assignment[id]));
                }
            }
        }
        Ok(NumericPair { a, b, assignment })
    }

    /// Every parameter set to `value`.
    pub fn constant(&self, value: u64) -> NumericPair {
        self.with_assignment(vec![value; self.n_params])
            .expect("assignment length matches")
    }
}

fn check_same_shape(a: &StructuredPair, b: &StructuredPair) -> Result<()> {
    if a.n_states() != b.n_states() || a.n_inputs() != b.n_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "pair with {} states/{} inputs vs {} states/{} inputs",
            a.n_states(),
            a.n_inputs(),
            b.n_states(),
            b.n_inputs()
        )));
    }
    Ok(())
}

/// Extracts the structured follower pair `(A, B)` of one snapshot.
pub fn extract_pair(topology: &Topology) -> StructuredPair {
    let followers = topology.followers();
    let leaders: Vec<usize> = topology.leaders().iter().copied().collect();
    let n = followers.len();
    let mut a = Pattern::empty(n, n);
    let mut b = Pattern::empty(n, leaders.len());
    for i in 0..n {
        a.set(i, i, true);
    }
    for e in topology.edges() {
        let (u, v) = e.endpoints();
        let fu = followers.binary_search(&u).ok();
        let fv = followers.binary_search(&v).ok();
        match (fu, fv) {
            (Some(i), Some(j)) => {
                a.set(i, j, true);
                a.set(j, i, true);
            }
            (Some(i), None) => b.set(i, leaders.binary_search(&v).expect("non-follower is a leader"), true),
            (None, Some(j)) => b.set(j, leaders.binary_search(&u).expect("non-follower is a leader"), true),
            (None, None) => unreachable!("leader-leader edges are rejected by Topology::new"),
        }
    }
    StructuredPair::labelled(followers, leaders, a, b).expect("shapes are consistent")
}

/// Instantiates a family of pairs from one random stream, so parameters of
/// different subsystems are independent.
pub fn instantiate_all(pairs: &[StructuredPair], seed: u64, bound: u64) -> Result<Vec<NumericPair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.iter().map(|p| p.instantiate_with_rng(&mut rng, bound)).collect()
}

/// A structured pair with integer values substituted for its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericPair {
    pub a: Matrix,
    pub b: Matrix,
    /// Value of each parameter, indexed by [`ParamId`].
    pub assignment: Vec<u64>,
}

impl NumericPair {
    /// Pair with no parameter bookkeeping, for hand-built matrices.
    pub fn from_matrices(a: Matrix, b: Matrix) -> Result<Self> {
        if a.rows() != a.cols() || b.rows() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(NumericPair {
            a,
            b,
            assignment: Vec::new(),
        })
    }

    pub fn n_states(&self) -> usize {
        self.a.rows()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.cols()
    }
}
