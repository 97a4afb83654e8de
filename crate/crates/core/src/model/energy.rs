use crate::error::{Error, Result};
use crate::model::{BroadcastPlan, Edge, Network, NodeId};

/// Per-node transmission energies of a plan and the resulting lifetime figures.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub per_node: Vec<f64>,
    pub objective: f64,
    /// Node with the largest energy (lowest index on ties).
    pub bottleneck: NodeId,
    pub cycles: Option<u64>,
}

impl EnergyReport {
    pub fn from_energies(per_node: Vec<f64>) -> Self {
        let mut bottleneck = 0;
        for (i, &e) in per_node.iter().enumerate() {
            if e > per_node[bottleneck] {
                bottleneck = i;
            }
        }
        let objective = per_node.get(bottleneck).copied().unwrap_or(0.0);
        Self {
            per_node,
            objective,
            bottleneck,
            cycles: None,
        }
    }

    /// Attaches `N_cycles` for a battery of `battery` energy units.
    pub fn with_battery(mut self, battery: f64) -> Result<Self> {
        self.cycles = Some(lifetime_cycles(battery, &self)?);
        Ok(self)
    }

    /// `(max - min) / max` over all nodes; zero for an all-zero report.
    pub fn relative_spread(&self) -> f64 {
        if self.objective == 0.0 {
            return 0.0;
        }
        let min = self.per_node.iter().copied().fold(f64::INFINITY, f64::min);
        (self.objective - min) / self.objective
    }
}

/// Energy each node spends on one unit of data sent along `edges`.
pub fn part_energy(net: &Network, edges: &[Edge]) -> Vec<f64> {
    let mut e = vec![0.0; net.len()];
    for &(i, j) in edges {
        e[i] += net.cost(i, j);
    }
    e
}

/// `E_i = sum_r q_r sum_{(i,j) in part r} E_ij`, summed over parts in order.
pub fn node_energy(net: &Network, plan: &BroadcastPlan) -> Result<EnergyReport> {
    net.check_node(plan.source())?;
    let mut per_node = vec![0.0; net.len()];
    for part in plan.parts() {
        for &(i, j) in &part.edges {
            net.check_node(i)?;
            net.check_node(j)?;
            per_node[i] += part.weight * net.cost(i, j);
        }
    }
    Ok(EnergyReport::from_energies(per_node))
}

/// Number of full broadcasts a battery of `battery` units sustains before
/// the bottleneck node is exhausted.
pub fn lifetime_cycles(battery: f64, report: &EnergyReport) -> Result<u64> {
    if !battery.is_finite() || battery <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "battery must be positive, got {battery}"
        )));
    }
    if report.objective <= 0.0 {
        return Err(Error::ZeroEnergyPlan);
    }
    Ok((battery / report.objective).floor() as u64)
}
