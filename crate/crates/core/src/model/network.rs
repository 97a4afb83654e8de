use crate::error::{Error, Result};
use crate::model::cost::CostModel;
use crate::model::NodeId;

/// Nodes embedded in `R^d` together with the cost model that prices every
/// ordered pair. The induced graph is complete: any node may transmit to
/// any other node.
#[derive(Debug, Clone)]
pub struct Network {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    cost_model: CostModel,
    cost: Vec<f64>,
}

impl Network {
    pub fn new(dim: usize, nodes: Vec<Vec<f64>>, cost_model: CostModel) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidNetwork("dimension must be at least 1".into()));
        }
        if nodes.len() < 2 {
            return Err(Error::InvalidNetwork(format!(
                "at least 2 nodes are required, got {}",
                nodes.len()
            )));
        }
        for (i, x) in nodes.iter().enumerate() {
            if x.len() != dim {
                return Err(Error::InvalidNetwork(format!(
                    "node {} has {} coordinates, expected {dim}",
                    i + 1,
                    x.len()
                )));
            }
            if x.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidNetwork(format!(
                    "node {} has a non-finite coordinate",
                    i + 1
                )));
            }
        }
        let n = nodes.len();
        let mut cost = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = cost_model.eval(euclidean(&nodes[i], &nodes[j]));
                cost[i * n + j] = c;
                cost[j * n + i] = c;
            }
        }
        Ok(Self {
            dim,
            nodes,
            cost_model,
            cost,
        })
    }

    /// The regular line `L_n`: nodes at `x_i = i`, `i = 1..=n`.
    pub fn regular_line(n: usize, cost_model: CostModel) -> Result<Self> {
        Self::new(1, (1..=n).map(|i| vec![i as f64]).collect(), cost_model)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn position(&self, i: NodeId) -> &[f64] {
        &self.nodes[i]
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost_model
    }

    /// Per-unit cost of transmitting from `i` to `j`.
    pub fn cost(&self, i: NodeId, j: NodeId) -> f64 {
        self.cost[i * self.len() + j]
    }

    pub fn distance(&self, i: NodeId, j: NodeId) -> f64 {
        euclidean(&self.nodes[i], &self.nodes[j])
    }

    /// True when the network is `L_N`: one dimension, nodes at `1..=N` in order.
    pub fn is_regular_line(&self) -> bool {
        self.dim == 1
            && self
                .nodes
                .iter()
                .enumerate()
                .all(|(i, x)| (x[0] - (i + 1) as f64).abs() <= 1e-12)
    }

    pub fn check_node(&self, i: NodeId) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// Copy of the network with node `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[NodeId]) -> Result<Self> {
        let mut nodes = vec![Vec::new(); self.len()];
        for (i, &p) in perm.iter().enumerate() {
            nodes[p] = self.nodes[i].clone();
        }
        Self::new(self.dim, nodes, self.cost_model.clone())
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
