//! Seeded random network documents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::document::NetworkDocument;

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub agents: usize,
    pub leaders: usize,
    pub snapshots: usize,
    pub edge_prob: f64,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("need at least one leader")]
    NoLeaders,
    #[error("need agents >= leaders + 1 (got {agents} agents, {leaders} leaders)")]
    NoFollowers { agents: usize, leaders: usize },
    #[error("need at least one snapshot")]
    NoSnapshots,
    #[error("edge probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
}

/// Leaders are agents `0..leaders`. Each snapshot includes every
/// non-leader-leader pair `a < b` independently with probability
/// `edge_prob`, visiting pairs in lexicographic order.
pub fn generate(params: &GenParams) -> Result<NetworkDocument, GenError> {
    let GenParams {
        agents,
        leaders,
        snapshots,
        edge_prob,
        seed,
    } = *params;
    if leaders == 0 {
        return Err(GenError::NoLeaders);
    }
    if agents < leaders + 1 {
        return Err(GenError::NoFollowers { agents, leaders });
    }
    if snapshots == 0 {
        return Err(GenError::NoSnapshots);
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(GenError::BadProbability(edge_prob));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topologies = (0..snapshots)
        .map(|_| {
            let mut edges = Vec::new();
            for a in 0..agents {
                for b in a + 1..agents {
                    if b < leaders {
                        continue;
                    }
                    if rng.gen_bool(edge_prob) {
                        edges.push([a, b]);
                    }
                }
            }
            edges
        })
        .collect();

    Ok(NetworkDocument {
        name: Some(format!(
            "gen-n{agents}-l{leaders}-m{snapshots}-p{edge_prob}-s{seed}"
        )),
        agents,
        leaders: (0..leaders).collect(),
        topologies,
    })
}
