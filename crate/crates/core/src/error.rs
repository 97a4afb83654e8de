use thiserror::Error;

use crate::model::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Node indices in messages are one-based, matching the file formats.

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cost model: {0}")]
    InvalidCostModel(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("node {} out of range for a network of {len} nodes", .index + 1)]
    NodeOutOfRange { index: NodeId, len: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("zero-energy plan: lifetime is unbounded")]
    ZeroEnergyPlan,

    #[error("source {} is not a border node of L_{len}; use the internal solution", .source_node + 1)]
    NotBorderNode { source_node: NodeId, len: usize },

    #[error("source {} is a border node of L_{len}; use the border solution", .source_node + 1)]
    BorderNode { source_node: NodeId, len: usize },

    #[error("network is not a regular line (nodes at 1..N in one dimension)")]
    NotRegularLine,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("network has {len} nodes, above the enumeration cap of {cap}")]
    AboveCap { len: usize, cap: usize },

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("equal-energy weights unavailable ({0}); use LP weights instead")]
    EqualEnergy(#[from] crate::heuristic::EqualEnergyFailure),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
