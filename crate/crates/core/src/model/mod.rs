//! Networks, cost evaluation, plans and energy accounting.

pub mod cost;
pub mod energy;
pub mod network;
pub mod plan;
pub mod tree;

pub use cost::{
    check_superadditive, check_superadditive_line, CostModel, CostTerm, SuperadditivityCheck,
};
pub use energy::{lifetime_cycles, node_energy, part_energy, EnergyReport};
pub use network::Network;
pub use plan::{flow_matrix, verify_broadcast, BroadcastCheck, BroadcastPlan, FlowMatrix, Part};
pub use tree::RootedTree;

/// Zero-based node index. Files and the CLI use one-based indices.
pub type NodeId = usize;

/// Directed transmission `(sender, receiver)`.
pub type Edge = (NodeId, NodeId);

/// Relative tolerance for constraint checks (demand, delivery, feasibility).
pub const CONSTRAINT_TOL: f64 = 1e-9;
