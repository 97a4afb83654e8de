//! Maximum-lifetime broadcast planning for wireless sensor networks.
//!
//! A source node broadcasts `Q` units of data. The data may be split into
//! parts sent along different spanning trees; the goal is to minimize the
//! largest energy any single node spends. The crate provides:
//!
//! * [`model`]: networks, cost models, plans and energy accounting;
//! * [`analytic1d`]: closed-form optimal plans on the regular line;
//! * [`oracle`]: the exact optimum for small networks by tree enumeration;
//! * [`heuristic`]: a polynomial planner for networks in any dimension;
//! * [`wma`]: energies when one transmission reaches several receivers.
//!
//! Node indices are zero-based in the API and one-based in files.

pub mod analytic1d;
pub mod error;
pub mod generate;
pub mod heuristic;
pub mod io;
pub mod model;
pub mod oracle;
pub mod wma;

pub use error::{Error, Result};
pub use model::{
    node_energy, BroadcastPlan, CostModel, CostTerm, Edge, EnergyReport, Network, NodeId, Part,
    RootedTree,
};
