//! Broadcast planning for networks in any dimension.
//!
//! For a source `k` the planner builds one subgraph per node `r`: the
//! shortest path from `k` to `r`, followed by a spanning tree of the
//! remaining nodes rooted at `r` in which no node sends to more than two
//! children. The subgraph for `r = k` is the degree-limited spanning tree of
//! the whole network; if that tree is already a path it is used alone. The
//! data is then split across the subgraphs by the min-max LP, or by solving
//! the equal-energy linear system.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::model::{node_energy, BroadcastPlan, EnergyReport, Network, NodeId, Part};
use crate::model::{Edge, CONSTRAINT_TOL};
use crate::oracle::{lp_minmax, CoefficientMatrix};

/// Largest out-degree allowed in the spanning-tree part of a subgraph.
pub const MAX_OUT_DEGREE: usize = 2;

/// Smallest-to-largest singular value ratio below which the equal-energy
/// system is treated as singular.
const SINGULAR_TOL: f64 = 1e-12;

/// Relative tolerance under which two path costs count as tied.
const PATH_COST_TIE: f64 = 1e-12;

/// Shortest path from `source` to `target` followed by a degree-limited tree
/// rooted at `target` over the nodes not on the path.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeGraph {
    pub source: NodeId,
    pub target: NodeId,
    /// Node sequence from `source` to `target`, both included.
    pub path: Vec<NodeId>,
    /// Tree edges in attachment order.
    pub tree: Vec<Edge>,
}

impl CompositeGraph {
    /// Path edges followed by tree edges; a valid transmission order.
    pub fn edges(&self) -> Vec<Edge> {
        self.path
            .windows(2)
            .map(|w| (w[0], w[1]))
            .chain(self.tree.iter().copied())
            .collect()
    }

    pub fn path_cost(&self, net: &Network) -> f64 {
        self.path.windows(2).map(|w| net.cost(w[0], w[1])).sum()
    }

    pub fn tree_cost(&self, net: &Network) -> f64 {
        self.tree.iter().map(|&(i, j)| net.cost(i, j)).sum()
    }

    /// Energy each node spends per unit of data sent along this subgraph.
    pub fn energy_column(&self, net: &Network) -> Vec<f64> {
        let mut col = vec![0.0; net.len()];
        for (i, j) in self.edges() {
            col[i] += net.cost(i, j);
        }
        col
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct PathLabel {
    cost: f64,
    hops: usize,
}

fn cost_less(a: f64, b: f64) -> bool {
    a < b - PATH_COST_TIE * a.abs().max(b.abs())
}

/// Whether the path `(la, pa)` beats `(lb, pb)`: lower cost, then fewer
/// hops, then the lexicographically smaller node sequence.
fn path_better(la: PathLabel, pa: &[NodeId], lb: PathLabel, pb: &[NodeId]) -> bool {
    if cost_less(la.cost, lb.cost) {
        return true;
    }
    if cost_less(lb.cost, la.cost) {
        return false;
    }
    (la.hops, pa) < (lb.hops, pb)
}

/// Shortest paths from `source` to every node. Entry `source` is `[source]`.
pub fn shortest_paths(net: &Network, source: NodeId) -> Result<Vec<Vec<NodeId>>> {
    net.check_node(source)?;
    let n = net.len();
    let mut label = vec![None::<PathLabel>; n];
    let mut path: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    label[source] = Some(PathLabel { cost: 0.0, hops: 0 });
    path[source] = vec![source];

    for _ in 0..n {
        let mut next: Option<NodeId> = None;
        for v in 0..n {
            let Some(lv) = label[v] else { continue };
            if settled[v] {
                continue;
            }
            let better = match next {
                None => true,
                Some(u) => path_better(lv, &path[v], label[u].unwrap(), &path[u]),
            };
            if better {
                next = Some(v);
            }
        }
        let Some(u) = next else { break };
        settled[u] = true;
        let lu = label[u].unwrap();
        for v in 0..n {
            if settled[v] {
                continue;
            }
            let cand = PathLabel {
                cost: lu.cost + net.cost(u, v),
                hops: lu.hops + 1,
            };
            let mut cand_path = path[u].clone();
            cand_path.push(v);
            let improves = match label[v] {
                None => true,
                Some(lv) => path_better(cand, &cand_path, lv, &path[v]),
            };
            if improves {
                label[v] = Some(cand);
                path[v] = cand_path;
            }
        }
    }
    Ok(path)
}

/// Shortest path from `source` to `target` as a node sequence.
pub fn shortest_path(net: &Network, source: NodeId, target: NodeId) -> Result<Vec<NodeId>> {
    net.check_node(target)?;
    if source == target {
        return Err(Error::InvalidArgument("path endpoints must differ".into()));
    }
    Ok(shortest_paths(net, source)?.swap_remove(target))
}

/// Greedy spanning tree over `nodes` rooted at `root` where every node sends
/// to at most two children. Repeatedly attaches the cheapest edge from an
/// attached node with spare out-degree to an unattached node; ties go to the
/// lower sender, then the lower receiver. Edges are returned in attachment
/// order.
pub fn constrained_mst(net: &Network, nodes: &[NodeId], root: NodeId) -> Result<Vec<Edge>> {
    for &v in nodes {
        net.check_node(v)?;
    }
    if !nodes.contains(&root) {
        return Err(Error::InvalidArgument(format!(
            "root {root} is not in the node set"
        )));
    }
    let n = net.len();
    let mut out_degree = vec![0usize; n];
    let mut senders: Vec<NodeId> = vec![root];
    let mut pending: Vec<NodeId> = nodes.iter().copied().filter(|&v| v != root).collect();
    pending.sort_unstable();
    pending.dedup();

    let best_sender = |v: NodeId, senders: &[NodeId], out_degree: &[usize]| -> NodeId {
        let mut best: Option<NodeId> = None;
        for &s in senders {
            if out_degree[s] >= MAX_OUT_DEGREE {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => (net.cost(s, v), s) < (net.cost(b, v), b),
            };
            if better {
                best = Some(s);
            }
        }
        best.expect("a tree always has a node with spare out-degree")
    };
    // cheapest available sender for each pending node
    let mut best: Vec<NodeId> = vec![root; n];

    let mut edges = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let (pos, &v) = pending
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                (net.cost(best[a], a), best[a], a)
                    .partial_cmp(&(net.cost(best[b], b), best[b], b))
                    .unwrap()
            })
            .unwrap();
        let s = best[v];
        edges.push((s, v));
        pending.swap_remove(pos);
        out_degree[s] += 1;
        senders.push(v);
        let saturated = out_degree[s] >= MAX_OUT_DEGREE;
        for &w in &pending {
            if saturated && best[w] == s {
                best[w] = best_sender(w, &senders, &out_degree);
            } else if (net.cost(v, w), v) < (net.cost(best[w], w), best[w]) {
                best[w] = v;
            }
        }
    }
    Ok(edges)
}

/// The subgraphs built for one source.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSet {
    pub source: NodeId,
    /// One graph per target in increasing target order, or the single
    /// spanning tree when it is a path.
    pub graphs: Vec<CompositeGraph>,
    pub early_exit: bool,
}

/// Builds the subgraph for every target. Targets are processed in parallel;
/// the result does not depend on the thread count.
pub fn build_graphs(net: &Network, source: NodeId) -> Result<GraphSet> {
    net.check_node(source)?;
    let n = net.len();
    let all: Vec<NodeId> = (0..n).collect();
    let spanning = CompositeGraph {
        source,
        target: source,
        path: vec![source],
        tree: constrained_mst(net, &all, source)?,
    };
    let is_path = {
        let mut deg = vec![0usize; n];
        spanning.tree.iter().all(|&(i, _)| {
            deg[i] += 1;
            deg[i] <= 1
        })
    };
    if is_path {
        return Ok(GraphSet {
            source,
            graphs: vec![spanning],
            early_exit: true,
        });
    }

    let paths = shortest_paths(net, source)?;
    let graphs = (0..n)
        .into_par_iter()
        .map(|r| {
            if r == source {
                return Ok(spanning.clone());
            }
            let path = paths[r].clone();
            let interior = &path[..path.len() - 1];
            let residual: Vec<NodeId> = (0..n).filter(|v| !interior.contains(v)).collect();
            let tree = constrained_mst(net, &residual, r)?;
            Ok(CompositeGraph {
                source,
                target: r,
                path,
                tree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphSet {
        source,
        graphs,
        early_exit: false,
    })
}

fn energy_matrix(net: &Network, graphs: &[CompositeGraph]) -> CoefficientMatrix {
    CoefficientMatrix::from_columns(net.len(), graphs.iter().map(|g| g.energy_column(net)))
        .expect("edge costs are finite and nonnegative")
}

fn plan_from_weights(
    source: NodeId,
    demand: f64,
    graphs: &[CompositeGraph],
    weights: &[f64],
) -> Result<BroadcastPlan> {
    let parts = graphs
        .iter()
        .zip(weights)
        .map(|(g, &w)| Part::new(g.edges(), w))
        .collect();
    BroadcastPlan::new(source, demand, parts)
}

#[derive(Debug, Clone)]
pub struct WeightedPlan {
    pub weights: Vec<f64>,
    pub plan: BroadcastPlan,
    pub report: EnergyReport,
    pub lp_iterations: usize,
}

/// Min-max weights over the given subgraphs. A single subgraph gets the
/// whole demand. Subgraphs with zero weight stay in the plan.
pub fn optimize_weights(
    net: &Network,
    graphs: &[CompositeGraph],
    demand: f64,
) -> Result<WeightedPlan> {
    let first = graphs
        .first()
        .ok_or_else(|| Error::InvalidArgument("no subgraphs to weight".into()))?;
    let (weights, lp_iterations) = if graphs.len() == 1 {
        (vec![demand], 0)
    } else {
        let solution = lp_minmax(&energy_matrix(net, graphs), demand)?;
        (solution.weights, solution.iterations)
    };
    let plan = plan_from_weights(first.source, demand, graphs, &weights)?;
    let report = node_energy(net, &plan)?;
    Ok(WeightedPlan {
        weights,
        plan,
        report,
        lp_iterations,
    })
}

/// Why the equal-energy system gave no usable weights.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EqualEnergyFailure {
    #[error("expected {expected} subgraphs, got {got}")]
    WrongGraphCount { expected: usize, got: usize },
    #[error("node {} transmits in no subgraph", .0 + 1)]
    IdleNode(NodeId),
    #[error("the equal-energy system is singular")]
    Singular,
    #[error("subgraph {} would get negative weight {weight}", .graph + 1)]
    NegativeWeight { graph: usize, weight: f64 },
}

/// Weights that give every node the same energy, from the linear system
/// `sum(q) = Q`, `E_i(q) = E_{i+1}(q)` for consecutive nodes. Weights above
/// `-1e-12` are clamped to zero.
pub fn equal_energy_solve(
    net: &Network,
    graphs: &[CompositeGraph],
    demand: f64,
) -> Result<Vec<f64>, EqualEnergyFailure> {
    let n = net.len();
    if graphs.len() != n {
        return Err(EqualEnergyFailure::WrongGraphCount {
            expected: n,
            got: graphs.len(),
        });
    }
    let cols: Vec<Vec<f64>> = graphs.iter().map(|g| g.energy_column(net)).collect();
    if let Some(idle) = (0..n).find(|&i| cols.iter().all(|c| c[i] == 0.0)) {
        return Err(EqualEnergyFailure::IdleNode(idle));
    }
    let system = DMatrix::from_fn(n, n, |row, r| {
        if row == 0 {
            1.0
        } else {
            cols[r][row - 1] - cols[r][row]
        }
    });
    let singular = system.singular_values();
    if singular.min() <= SINGULAR_TOL * singular.max() {
        return Err(EqualEnergyFailure::Singular);
    }
    let mut rhs = DVector::zeros(n);
    rhs[0] = demand;
    let weights = system
        .lu()
        .solve(&rhs)
        .ok_or(EqualEnergyFailure::Singular)?;
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(EqualEnergyFailure::Singular);
    }
    let mut out = Vec::with_capacity(n);
    for (graph, &w) in weights.iter().enumerate() {
        if w < -1e-12 {
            return Err(EqualEnergyFailure::NegativeWeight { graph, weight: w });
        }
        out.push(w.max(0.0));
    }
    // clamping can shift the sum by rounding noise
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        for w in &mut out {
            *w *= demand / total;
        }
    }
    Ok(out)
}

/// LP and equal-energy objectives side by side for one graph set.
#[derive(Debug, Clone)]
pub struct EqualEnergyComparison {
    pub lp_objective: f64,
    pub equal_energy: Result<f64, EqualEnergyFailure>,
}

impl EqualEnergyComparison {
    /// Whether equal-energy weights exist but miss the min-max optimum.
    pub fn mismatch(&self) -> bool {
        match self.equal_energy {
            Ok(obj) => {
                (obj - self.lp_objective).abs() > CONSTRAINT_TOL * self.lp_objective.abs().max(1.0)
            }
            Err(_) => false,
        }
    }
}

pub fn compare_equal_energy(
    net: &Network,
    graphs: &[CompositeGraph],
    demand: f64,
) -> Result<EqualEnergyComparison> {
    let lp = optimize_weights(net, graphs, demand)?;
    let equal_energy = match equal_energy_solve(net, graphs, demand) {
        Ok(w) => {
            let plan = plan_from_weights(graphs[0].source, demand, graphs, &w)?;
            Ok(node_energy(net, &plan)?.objective)
        }
        Err(e) => Err(e),
    };
    Ok(EqualEnergyComparison {
        lp_objective: lp.report.objective,
        equal_energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMethod {
    #[default]
    Lp,
    EqualEnergy,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeuristicStats {
    pub early_exit: bool,
    /// Cost of each subgraph's path part, in target order.
    pub path_costs: Vec<f64>,
    /// Cost of each subgraph's tree part, in target order.
    pub tree_costs: Vec<f64>,
    pub lp_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct HeuristicSolution {
    pub graphs: GraphSet,
    pub weights: Vec<f64>,
    pub plan: BroadcastPlan,
    pub report: EnergyReport,
    pub stats: HeuristicStats,
    /// Non-fatal caveats about the input.
    pub warnings: Vec<String>,
}

/// Builds the subgraphs for `source` and weights them.
pub fn solve_heuristic(
    net: &Network,
    source: NodeId,
    demand: f64,
    method: WeightMethod,
) -> Result<HeuristicSolution> {
    let mut warnings = Vec::new();
    let min_exponent = net.cost_model().min_exponent();
    if net.dim() >= 2 && min_exponent < 2.0 {
        warnings.push(format!(
            "cost exponent {min_exponent} is below 2 in {} dimensions; edge costs may not be superadditive",
            net.dim()
        ));
    }
    let graphs = build_graphs(net, source)?;
    let (weights, lp_iterations) = match method {
        WeightMethod::EqualEnergy if !graphs.early_exit => {
            (equal_energy_solve(net, &graphs.graphs, demand)?, 0)
        }
        _ => {
            let w = optimize_weights(net, &graphs.graphs, demand)?;
            (w.weights, w.lp_iterations)
        }
    };
    let plan = plan_from_weights(source, demand, &graphs.graphs, &weights)?;
    let report = node_energy(net, &plan)?;
    let stats = HeuristicStats {
        early_exit: graphs.early_exit,
        path_costs: graphs.graphs.iter().map(|g| g.path_cost(net)).collect(),
        tree_costs: graphs.graphs.iter().map(|g| g.tree_cost(net)).collect(),
        lp_iterations,
    };
    Ok(HeuristicSolution {
        graphs,
        weights,
        plan,
        report,
        stats,
        warnings,
    })
}
