//! JSON network documents.
//!
//! ```json
//! {
//!   "name": "fig1",
//!   "agents": 4,
//!   "leaders": [0],
//!   "topologies": [[[1, 3], [0, 2]], [[0, 3], [1, 2]]]
//! }
//! ```
//!
//! Agents are `0..agents`. Each topology lists every undirected link once.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use switchctl_core::{SwitchedNetwork, Topology};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub agents: usize,
    pub leaders: Vec<usize>,
    pub topologies: Vec<Vec<[usize; 2]>>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {field}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl DocumentError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Field path the error refers to, like `leaders[1]`.
    pub fn field(&self) -> Option<&str> {
        match self {
            DocumentError::Io { .. } => None,
            DocumentError::Syntax { field, .. } | DocumentError::Invalid { field, .. } => Some(field),
        }
    }
}

impl NetworkDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: NetworkDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            DocumentError::Syntax {
                line: inner.line(),
                column: inner.column(),
                field,
                message: inner.to_string(),
            }
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Checks every field and reports the first problem with its path.
    pub fn validate(&self) -> Result<(), DocumentError> {
        let n = self.agents;
        let mut leaders = BTreeSet::new();
        for (i, &l) in self.leaders.iter().enumerate() {
            if l >= n {
                return Err(DocumentError::invalid(
                    format!("leaders[{i}]"),
                    format!("agent id {l} out of range 0..{n}"),
                ));
            }
            if !leaders.insert(l) {
                return Err(DocumentError::invalid(format!("leaders[{i}]"), format!("leader {l} listed twice")));
            }
        }
        if leaders.is_empty() {
            return Err(DocumentError::invalid("leaders", "at least one leader is required"));
        }
        if leaders.len() >= n {
            return Err(DocumentError::invalid("leaders", "at least one follower is required"));
        }
        if self.topologies.is_empty() {
            return Err(DocumentError::invalid("topologies", "at least one topology is required"));
        }
        for (s, edges) in self.topologies.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for (e, &[a, b]) in edges.iter().enumerate() {
                let field = format!("topologies[{s}][{e}]");
                if let Some(bad) = [a, b].into_iter().find(|&v| v >= n) {
                    return Err(DocumentError::invalid(field, format!("agent id {bad} out of range 0..{n}")));
                }
                if a == b {
                    return Err(DocumentError::invalid(field, format!("self-loop on agent {a}")));
                }
                if leaders.contains(&a) && leaders.contains(&b) {
                    return Err(DocumentError::invalid(field, format!("edge {a}-{b} joins two leaders")));
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(DocumentError::invalid(field, format!("edge {a}-{b} listed twice")));
                }
            }
        }
        Ok(())
    }

    pub fn to_network(&self) -> Result<SwitchedNetwork, DocumentError> {
        self.validate()?;
        let snapshots = self
            .topologies
            .iter()
            .enumerate()
            .map(|(s, edges)| {
                Topology::new(self.agents, self.leaders.iter().copied(), edges.iter().map(|&[a, b]| (a, b)))
                    .map_err(|e| DocumentError::invalid(format!("topologies[{s}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SwitchedNetwork::new(snapshots).map_err(|e| DocumentError::invalid("topologies", e.to_string()))
    }

    pub fn from_network(network: &SwitchedNetwork, name: Option<String>) -> Self {
        NetworkDocument {
            name,
            agents: network.n_agents(),
            leaders: network.leaders().iter().copied().collect(),
            topologies: network
                .snapshots()
                .iter()
                .map(|t| t.edges().iter().map(|e| [e.lo(), e.hi()]).collect())
                .collect(),
        }
    }

    /// Compact, stable rendering: one line per topology.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            out.push_str(&format!("  \"name\": {},\n", serde_json::to_string(name).expect("string serializes")));
        }
        out.push_str(&format!("  \"agents\": {},\n", self.agents));
        out.push_str(&format!(
            "  \"leaders\": {},\n",
            serde_json::to_string(&self.leaders).expect("ids serialize")
        ));
        out.push_str("  \"topologies\": [");
        for (i, t) in self.topologies.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            out.push_str(&serde_json::to_string(t).expect("edges serialize"));
        }
        out.push_str(if self.topologies.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        out
    }
}
