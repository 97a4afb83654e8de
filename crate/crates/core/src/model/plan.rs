use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{Edge, NodeId, CONSTRAINT_TOL};

/// One transmission subgraph and the amount of data sent along it. Every
/// edge of the part carries the same amount.
#[derive(Debug, Clone, PartialEq)]
pub struct Part {
    pub edges: Vec<Edge>,
    pub weight: f64,
}

impl Part {
    pub fn new(edges: Vec<Edge>, weight: f64) -> Self {
        Self { edges, weight }
    }
}

/// Source `k` broadcasts `demand` units split across weighted parts.
#[derive(Debug, Clone, PartialEq)]
pub struct BroadcastPlan {
    source: NodeId,
    demand: f64,
    parts: Vec<Part>,
}

impl BroadcastPlan {
    /// Checks the weight invariants; structural checks against a network
    /// size are done by [`BroadcastPlan::validate`].
    pub fn new(source: NodeId, demand: f64, parts: Vec<Part>) -> Result<Self> {
        if !demand.is_finite() || demand < 0.0 {
            return Err(Error::InvalidPlan(format!(
                "demand must be finite and nonnegative, got {demand}"
            )));
        }
        if parts.is_empty() {
            return Err(Error::InvalidPlan("plan has no parts".into()));
        }
        for (r, p) in parts.iter().enumerate() {
            if !p.weight.is_finite() || p.weight < 0.0 {
                return Err(Error::InvalidPlan(format!(
                    "part {} has invalid weight {}",
                    r + 1,
                    p.weight
                )));
            }
        }
        let total: f64 = parts.iter().map(|p| p.weight).sum();
        if (total - demand).abs() > CONSTRAINT_TOL * demand.max(1.0) {
            return Err(Error::InvalidPlan(format!(
                "weights sum to {total}, demand is {demand}"
            )));
        }
        Ok(Self {
            source,
            demand,
            parts,
        })
    }

    /// Single-part plan.
    pub fn single(source: NodeId, demand: f64, edges: Vec<Edge>) -> Result<Self> {
        Self::new(source, demand, vec![Part::new(edges, demand)])
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn demand(&self) -> f64 {
        self.demand
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Largest node index referenced plus one.
    pub fn implied_node_count(&self) -> usize {
        self.parts
            .iter()
            .flat_map(|p| p.edges.iter())
            .map(|&(i, j)| i.max(j) + 1)
            .max()
            .unwrap_or(0)
            .max(self.source + 1)
    }

    /// Checks the plan against a network of `n` nodes: indices in range and
    /// every part, following edges reachable from the source, delivering
    /// data to all other nodes.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.source >= n {
            return Err(Error::NodeOutOfRange {
                index: self.source,
                len: n,
            });
        }
        for (r, part) in self.parts.iter().enumerate() {
            let mut adj = vec![Vec::new(); n];
            for &(i, j) in &part.edges {
                if i >= n || j >= n {
                    return Err(Error::NodeOutOfRange {
                        index: i.max(j),
                        len: n,
                    });
                }
                if i == j {
                    return Err(Error::InvalidPlan(format!(
                        "part {} has a self-loop at node {}",
                        r + 1,
                        i + 1
                    )));
                }
                adj[i].push(j);
            }
            let mut seen = vec![false; n];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            if let Some(missing) = seen.iter().position(|&s| !s) {
                return Err(Error::InvalidPlan(format!(
                    "part {} does not deliver data to node {}",
                    r + 1,
                    missing + 1
                )));
            }
        }
        Ok(())
    }

    /// Same subgraphs with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.source,
            self.demand * factor,
            self.parts
                .iter()
                .map(|p| Part::new(p.edges.clone(), p.weight * factor))
                .collect(),
        )
    }
}

/// Dense `N x N` matrix of the data sent over each directed edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMatrix {
    n: usize,
    data: Vec<f64>,
}

impl FlowMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: NodeId, j: NodeId, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn add(&mut self, i: NodeId, j: NodeId, value: f64) {
        self.data[i * self.n + j] += value;
    }
}

/// Aggregates part weights onto edges: `q_ij = sum_r q_r [(i,j) in part r]`.
pub fn flow_matrix(plan: &BroadcastPlan, n: usize) -> Result<FlowMatrix> {
    plan.validate(n)?;
    let mut flow = FlowMatrix::zeros(n);
    for part in plan.parts() {
        for &(i, j) in &part.edges {
            flow.add(i, j, part.weight);
        }
    }
    Ok(flow)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BroadcastCheck {
    pub delivered: bool,
    /// `Q` minus the data received by each node; zero at the source.
    pub deficits: Vec<f64>,
}

/// Checks that every node other than `source` receives exactly `demand`.
pub fn verify_broadcast(flow: &FlowMatrix, source: NodeId, demand: f64) -> BroadcastCheck {
    let n = flow.len();
    let mut deficits = vec![0.0; n];
    let mut delivered = true;
    for (j, deficit) in deficits.iter_mut().enumerate() {
        if j == source {
            continue;
        }
        let received: f64 = (0..n).filter(|&i| i != j).map(|i| flow.get(i, j)).sum();
        *deficit = demand - received;
        if deficit.abs() > CONSTRAINT_TOL * demand.max(1.0) {
            delivered = false;
        }
    }
    BroadcastCheck {
        delivered,
        deficits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_plan(q: f64) -> BroadcastPlan {
        BroadcastPlan::single(0, q, vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_tree_flow() {
        let flow = flow_matrix(&path_plan(2.5), 3).unwrap();
        assert_eq!(flow.get(0, 1), 2.5);
        assert_eq!(flow.get(1, 2), 2.5);
        assert_eq!(flow.get(0, 2), 0.0);
        let check = verify_broadcast(&flow, 0, 2.5);
        assert!(check.delivered);
        assert_eq!(check.deficits, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn shared_edges_add_up() {
        let plan = BroadcastPlan::new(
            1,
            1.0,
            vec![
                Part::new(vec![(1, 0), (1, 2)], 0.4),
                Part::new(vec![(1, 2), (2, 0)], 0.6),
            ],
        )
        .unwrap();
        let flow = flow_matrix(&plan, 3).unwrap();
        assert_eq!(flow.get(1, 2), 1.0);
        assert!(verify_broadcast(&flow, 1, 1.0).delivered);
    }

    #[test]
    fn halved_edge_reports_deficit() {
        let mut flow = flow_matrix(&path_plan(1.0), 3).unwrap();
        flow.set(1, 2, 0.5);
        let check = verify_broadcast(&flow, 0, 1.0);
        assert!(!check.delivered);
        assert_eq!(check.deficits, vec![0.0, 0.0, 0.5]);
    }

    #[test]
    fn weight_invariants() {
        assert!(BroadcastPlan::new(0, 1.0, vec![]).is_err());
        assert!(BroadcastPlan::new(0, 1.0, vec![Part::new(vec![(0, 1)], 0.5)]).is_err());
        assert!(BroadcastPlan::new(
            0,
            1.0,
            vec![Part::new(vec![(0, 1)], -0.5), Part::new(vec![(0, 1)], 1.5)]
        )
        .is_err());
        assert!(BroadcastPlan::new(0, 0.0, vec![Part::new(vec![(0, 1)], 0.0)]).is_ok());
    }

    #[test]
    fn validate_requires_spanning_parts() {
        let plan = BroadcastPlan::single(0, 1.0, vec![(0, 1)]).unwrap();
        assert!(plan.validate(2).is_ok());
        assert!(matches!(plan.validate(3), Err(Error::InvalidPlan(_))));
        assert!(matches!(
            plan.validate(1),
            Err(Error::NodeOutOfRange { .. })
        ));
        // an unreachable edge does not count as delivery
        let plan = BroadcastPlan::single(0, 1.0, vec![(0, 1), (2, 3)]).unwrap();
        assert!(plan.validate(4).is_err());
    }
}
