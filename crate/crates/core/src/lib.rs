//! Structural controllability of leader-follower multi-agent networks under
//! switching communication topologies.
//!
//! A network is a list of undirected snapshots over a fixed set of agents,
//! some of which are leaders (external inputs). Followers run a weighted
//! nearest-neighbour law, so each snapshot yields a structured pair
//! `(A_i, B_i)` whose free entries are the link weights. The switched system
//! is structurally controllable when some choice of weights makes it
//! controllable. [`switched::decide`] answers this from the union graph and
//! can back a positive answer with an exact-rank certificate.
//!
//! ```
//! use switchctl_core::{decide, DecideOptions, SwitchedNetwork};
//!
//! let net = SwitchedNetwork::from_edge_lists(
//!     4,
//!     [0],
//!     &[vec![(1, 3), (0, 2)], vec![(0, 3), (1, 2)]],
//! )
//! .unwrap();
//! let opts = DecideOptions { certify: true, ..Default::default() };
//! let verdict = decide(&net, &opts).unwrap();
//! assert!(verdict.structurally_controllable);
//! assert!(verdict.certificate.unwrap().is_full_rank());
//! ```

pub mod error;
pub mod exact;
pub mod graph;
pub mod oracle;
pub mod pattern;
pub mod structured;
pub mod switched;

pub use error::{Error, Result};
pub use graph::{
    connected_components, follower_subgraph, is_connected, is_leader_follower_connected, union_graph, Edge,
    SwitchedNetwork, Topology,
};
pub use pattern::{g_rank, Pattern};
pub use structured::{extract_pair, instantiate_all, NumericPair, ParamId, StructuredPair};
pub use switched::{
    block_rank_check, decide, enumerate_controllability_matrix, kalman_matrix, reachable_subspace_rank,
    Certificate, Criterion, DecideOptions, Verdict, Witness,
};
