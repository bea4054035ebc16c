use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("network has no leaders")]
    NoLeaders,
    #[error("network has no followers (every agent is a leader)")]
    NoFollowers,
    #[error("agent {agent} is out of range for a network of {agents} agents")]
    AgentOutOfRange { agent: usize, agents: usize },
    #[error("leader {0} is listed more than once")]
    DuplicateLeader(usize),
    #[error("self-loop on agent {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} is listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} joins two leaders")]
    LeaderLeaderEdge(usize, usize),
    #[error("switched network needs at least one snapshot")]
    EmptyNetwork,
    #[error("snapshot {index} does not share the network's agent set or leader set")]
    MismatchedSnapshot { index: usize },
    #[error("topologies have different agent or leader sets")]
    MismatchedTopologies,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter bound must be at least 1, got {0}")]
    InvalidBound(u64),
    #[error("enumeration needs {required} items, above the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("{0} is not a permutation of the agent ids")]
    InvalidPermutation(String),
}
