//! Undirected communication topologies with leader/follower roles.
//!
//! A [`Topology`] is one snapshot of who talks to whom. A [`SwitchedNetwork`]
//! is an ordered family of snapshots over the same agents and leaders. The
//! two graph criteria used by the analysis live here: plain connectivity and
//! leader-follower connectivity.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered pair of distinct agents, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    /// Returns `None` for a self-pair.
    pub fn new(a: usize, b: usize) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn touches(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Partition `vertices` into connected components using only edges whose
/// endpoints both lie in `vertices`. Components are sorted internally and
/// ordered by their smallest member.
fn components_of(vertices: &[usize], edges: &BTreeSet<Edge>) -> Vec<Vec<usize>> {
    let mut sorted: Vec<usize> = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let index = |v: usize| sorted.binary_search(&v).ok();

    let mut sets = DisjointSets::new(sorted.len());
    for e in edges {
        if let (Some(a), Some(b)) = (index(e.lo), index(e.hi)) {
            sets.union(a, b);
        }
    }

    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); sorted.len()];
    for (i, &v) in sorted.iter().enumerate() {
        let r = sets.find(i);
        by_root[r].push(v);
    }
    // vertices were visited in ascending order, so each part is already
    // sorted and its first element is its minimum
    let mut parts: Vec<Vec<usize>> = by_root.into_iter().filter(|p| !p.is_empty()).collect();
    parts.sort_by_key(|p| p[0]);
    parts
}

/// One communication snapshot: agents `0..n_agents`, a leader set, and
/// undirected links.
///
/// Every link stands for two independent directed weights, and every
/// follower additionally carries a free self-weight. Those parameters only
/// materialize in [`crate::structured`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    n_agents: usize,
    leaders: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
}

impl Topology {
    /// Builds a validated topology.
    ///
    /// Rejects empty or all-leader role splits, out-of-range ids, repeated
    /// leaders, self-pairs, repeated edges and leader-leader edges.
    pub fn new<L, E>(n_agents: usize, leaders: L, edges: E) -> Result<Self>
    where
        L: IntoIterator<Item = usize>,
        E: IntoIterator<Item = (usize, usize)>,
    {
        let mut leader_set = BTreeSet::new();
        for l in leaders {
            if l >= n_agents {
                return Err(Error::AgentOutOfRange { agent: l, agents: n_agents });
            }
            if !leader_set.insert(l) {
                return Err(Error::DuplicateLeader(l));
            }
        }
        if leader_set.is_empty() {
            return Err(Error::NoLeaders);
        }
        if leader_set.len() >= n_agents {
            return Err(Error::NoFollowers);
        }

        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n_agents {
                    return Err(Error::AgentOutOfRange { agent: v, agents: n_agents });
                }
            }
            let e = Edge::new(a, b).ok_or(Error::SelfLoop(a))?;
            if leader_set.contains(&a) && leader_set.contains(&b) {
                return Err(Error::LeaderLeaderEdge(e.lo, e.hi));
            }
            if !edge_set.insert(e) {
                return Err(Error::DuplicateEdge(e.lo, e.hi));
            }
        }

        Ok(Topology {
            n_agents,
            leaders: leader_set,
            edges: edge_set,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn leaders(&self) -> &BTreeSet<usize> {
        &self.leaders
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn is_leader(&self, agent: usize) -> bool {
        self.leaders.contains(&agent)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        Edge::new(a, b).is_some_and(|e| self.edges.contains(&e))
    }

    /// Followers in ascending id order. This order defines the state index
    /// used by the structured matrices.
    pub fn followers(&self) -> Vec<usize> {
        (0..self.n_agents).filter(|v| !self.leaders.contains(v)).collect()
    }

    pub fn neighbors(&self, agent: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.touches(agent))
            .map(move |e| if e.lo == agent { e.hi } else { e.lo })
    }

    /// Same agents and same leaders.
    pub fn same_roles(&self, other: &Topology) -> bool {
        self.n_agents == other.n_agents && self.leaders == other.leaders
    }

    /// Edge-set union of two snapshots over the same roles.
    pub fn union(&self, other: &Topology) -> Result<Topology> {
        if !self.same_roles(other) {
            return Err(Error::MismatchedTopologies);
        }
        Ok(Topology {
            n_agents: self.n_agents,
            leaders: self.leaders.clone(),
            edges: self.edges.union(&other.edges).copied().collect(),
        })
    }

    /// Returns a copy with one more edge; validation as in [`Topology::new`]
    /// except that an already present edge is accepted silently.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Topology> {
        if self.has_edge(a, b) {
            return Ok(self.clone());
        }
        let edges = self.edges.iter().map(Edge::endpoints).chain([(a, b)]);
        Topology::new(self.n_agents, self.leaders.iter().copied(), edges)
    }

    /// Renames agent `v` to `perm[v]`. Roles travel with the agents.
    pub fn relabel(&self, perm: &[usize]) -> Result<Topology> {
        check_permutation(perm, self.n_agents)?;
        Topology::new(
            self.n_agents,
            self.leaders.iter().map(|&l| perm[l]),
            self.edges.iter().map(|e| (perm[e.lo], perm[e.hi])),
        )
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!("{perm:?}")));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
    }
    Ok(())
}

/// Ordered family of snapshots over a shared agent set and leader set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchedNetwork {
    snapshots: Vec<Topology>,
}

impl SwitchedNetwork {
    pub fn new(snapshots: Vec<Topology>) -> Result<Self> {
        let first = snapshots.first().ok_or(Error::EmptyNetwork)?;
        if let Some(index) = snapshots.iter().position(|s| !s.same_roles(first)) {
            return Err(Error::MismatchedSnapshot { index });
        }
        Ok(SwitchedNetwork { snapshots })
    }

    /// Convenience constructor from raw edge lists.
    pub fn from_edge_lists<L>(n_agents: usize, leaders: L, lists: &[Vec<(usize, usize)>]) -> Result<Self>
    where
        L: IntoIterator<Item = usize>,
    {
        let leaders: Vec<usize> = leaders.into_iter().collect();
        if lists.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let snapshots = lists
            .iter()
            .map(|edges| Topology::new(n_agents, leaders.iter().copied(), edges.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        SwitchedNetwork::new(snapshots)
    }

    pub fn snapshots(&self) -> &[Topology] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn n_agents(&self) -> usize {
        self.snapshots[0].n_agents
    }

    pub fn leaders(&self) -> &BTreeSet<usize> {
        &self.snapshots[0].leaders
    }

    pub fn followers(&self) -> Vec<usize> {
        self.snapshots[0].followers()
    }

    pub fn with_snapshot(&self, snapshot: Topology) -> Result<SwitchedNetwork> {
        let mut snapshots = self.snapshots.clone();
        snapshots.push(snapshot);
        SwitchedNetwork::new(snapshots)
    }

    /// Reorders snapshots: position `i` of the result is `order[i]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Result<SwitchedNetwork> {
        check_permutation(order, self.snapshots.len())?;
        SwitchedNetwork::new(order.iter().map(|&i| self.snapshots[i].clone()).collect())
    }

    pub fn relabel(&self, perm: &[usize]) -> Result<SwitchedNetwork> {
        let snapshots = self
            .snapshots
            .iter()
            .map(|s| s.relabel(perm))
            .collect::<Result<Vec<_>>>()?;
        SwitchedNetwork::new(snapshots)
    }
}

/// Graph induced on a subset of agents, without role information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub edges: BTreeSet<Edge>,
}

impl Subgraph {
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        components_of(&self.vertices, &self.edges)
    }
}

/// Union of every snapshot's edge set over the shared vertex set.
pub fn union_graph(network: &SwitchedNetwork) -> Topology {
    let first = network.snapshots[0].clone();
    network.snapshots[1..].iter().fold(first, |acc, s| {
        acc.union(s).expect("snapshots share roles by construction")
    })
}

/// Every pair of agents, leaders included, is joined by a path.
pub fn is_connected(topology: &Topology) -> bool {
    connected_components(topology).len() <= 1
}

/// Maximal connected vertex sets, each sorted, ordered by smallest member.
pub fn connected_components(topology: &Topology) -> Vec<Vec<usize>> {
    let vertices: Vec<usize> = (0..topology.n_agents).collect();
    components_of(&vertices, &topology.edges)
}

/// Subgraph induced by the followers: only follower-follower edges survive.
pub fn follower_subgraph(topology: &Topology) -> Subgraph {
    Subgraph {
        vertices: topology.followers(),
        edges: topology
            .edges
            .iter()
            .filter(|e| !topology.is_leader(e.lo) && !topology.is_leader(e.hi))
            .copied()
            .collect(),
    }
}

/// Follower components with no edge to any leader, in component order.
pub fn unserved_components(topology: &Topology) -> Vec<Vec<usize>> {
    follower_subgraph(topology)
        .connected_components()
        .into_iter()
        .filter(|component| {
            !component
                .iter()
                .any(|&f| topology.neighbors(f).any(|v| topology.is_leader(v)))
        })
        .collect()
}

/// Every connected component of the follower subgraph has at least one
/// edge to some leader.
pub fn is_leader_follower_connected(topology: &Topology) -> bool {
    unserved_components(topology).is_empty()
}
