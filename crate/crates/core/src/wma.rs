//! Point-to-multipoint transmission with the wireless multicast advantage.
//!
//! A tree's edge sequence is its transmission schedule. A transmission from
//! `i` to `j` also reaches every node inside its footprint, so a later edge
//! whose receiver was already covered costs nothing. Footprints:
//!
//! * bidirectional antenna: every node `n` with `d(i, n) <= d(i, j)`;
//! * directional antenna (1-D only): nodes on the same side of `i` as `j`
//!   with `d(i, n) <= d(i, j)`.
//!
//! A transmission with zero effective cost covers nothing.

use serde::{Deserialize, Serialize};

use crate::analytic1d::{internal_solution, LineSolution};
use crate::error::{Error, Result};
use crate::model::{BroadcastPlan, CostModel, Edge, EnergyReport, Network, NodeId, RootedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntennaModel {
    /// No multicast advantage: every edge pays its full cost.
    PointToPoint,
    Bidirectional,
    Directional,
}

impl std::str::FromStr for AntennaModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point-to-point" => Ok(Self::PointToPoint),
            "bidirectional" => Ok(Self::Bidirectional),
            "directional" => Ok(Self::Directional),
            other => Err(Error::InvalidArgument(format!(
                "unknown antenna model {other:?}"
            ))),
        }
    }
}

/// Cost of one scheduled transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledEdge {
    pub edge: Edge,
    pub raw_cost: f64,
    pub effective_cost: f64,
    /// Nodes this transmission reaches for free; empty when it costs nothing.
    pub coverage: Vec<NodeId>,
}

/// Effective per-unit cost of every edge of `tree`, in schedule order.
pub fn wma_cost_matrix(
    tree: &RootedTree,
    antenna: AntennaModel,
    net: &Network,
) -> Result<Vec<ScheduledEdge>> {
    if antenna == AntennaModel::Directional && net.dim() != 1 {
        return Err(Error::Unsupported(format!(
            "directional coverage is only defined in one dimension, network has {}",
            net.dim()
        )));
    }
    if tree.node_count() != net.len() {
        return Err(Error::InvalidTree(format!(
            "tree spans {} nodes, network has {}",
            tree.node_count(),
            net.len()
        )));
    }
    let mut covered = vec![false; net.len()];
    let mut out = Vec::with_capacity(tree.edges().len());
    for &(i, j) in tree.edges() {
        let raw_cost = net.cost(i, j);
        let effective_cost = if covered[j] { 0.0 } else { raw_cost };
        let coverage = if effective_cost > 0.0 {
            footprint(net, antenna, i, j)
        } else {
            Vec::new()
        };
        for &n in &coverage {
            covered[n] = true;
        }
        out.push(ScheduledEdge {
            edge: (i, j),
            raw_cost,
            effective_cost,
            coverage,
        });
    }
    Ok(out)
}

fn footprint(net: &Network, antenna: AntennaModel, i: NodeId, j: NodeId) -> Vec<NodeId> {
    let reach = net.distance(i, j);
    let within = |n: NodeId| net.distance(i, n) <= reach * (1.0 + 1e-12) + 1e-12;
    match antenna {
        AntennaModel::PointToPoint => Vec::new(),
        AntennaModel::Bidirectional => (0..net.len()).filter(|&n| n != i && within(n)).collect(),
        AntennaModel::Directional => {
            let xi = net.position(i)[0];
            let side = (net.position(j)[0] - xi).signum();
            (0..net.len())
                .filter(|&n| {
                    let offset = net.position(n)[0] - xi;
                    n != i && offset != 0.0 && offset.signum() == side && within(n)
                })
                .collect()
        }
    }
}

/// Node energies of a plan whose parts are ordered trees, under `antenna`.
pub fn wma_node_energy(
    net: &Network,
    plan: &BroadcastPlan,
    antenna: AntennaModel,
) -> Result<EnergyReport> {
    let mut per_node = vec![0.0; net.len()];
    for part in plan.parts() {
        let tree = RootedTree::new(net.len(), plan.source(), part.edges.clone())?;
        for e in wma_cost_matrix(&tree, antenna, net)? {
            per_node[e.edge.0] += part.weight * e.effective_cost;
        }
    }
    Ok(EnergyReport::from_energies(per_node))
}

/// Whether two schedules cost every node the same energy per unit of data.
pub fn schedules_equivalent(
    net: &Network,
    a: &RootedTree,
    b: &RootedTree,
    antenna: AntennaModel,
) -> Result<bool> {
    let energy = |t: &RootedTree| -> Result<Vec<f64>> {
        let mut e = vec![0.0; net.len()];
        for s in wma_cost_matrix(t, antenna, net)? {
            e[s.edge.0] += s.effective_cost;
        }
        Ok(e)
    };
    let (ea, eb) = (energy(a)?, energy(b)?);
    Ok(ea
        .iter()
        .zip(&eb)
        .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)))
}

#[derive(Debug, Clone)]
pub struct WmaSolution {
    pub plan: BroadcastPlan,
    pub antenna: AntennaModel,
    pub report: EnergyReport,
}

/// Bidirectional antennas on `L_N`: one tree, both chains from the source.
/// The source's second transmission is covered by its first.
pub fn wma_bidirectional_solution(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
) -> Result<WmaSolution> {
    if source >= n {
        return Err(Error::NodeOutOfRange {
            index: source,
            len: n,
        });
    }
    if source == 0 || source == n - 1 {
        return Err(Error::BorderNode {
            source_node: source,
            len: n,
        });
    }
    let edges: Vec<Edge> = (1..=source)
        .rev()
        .map(|i| (i, i - 1))
        .chain((source..n - 1).map(|i| (i, i + 1)))
        .collect();
    let plan = BroadcastPlan::single(source, demand, edges)?;
    let net = Network::regular_line(n, model.clone())?;
    let report = wma_node_energy(&net, &plan, AntennaModel::Bidirectional)?;
    Ok(WmaSolution {
        plan,
        antenna: AntennaModel::Bidirectional,
        report,
    })
}

/// Directional antennas on `L_N`: the point-to-point closed form, evaluated
/// with directional coverage.
pub fn wma_directional_solution(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
) -> Result<WmaSolution> {
    let solution: LineSolution = internal_solution(n, source, demand, model)?;
    let plan = solution.plan();
    let net = Network::regular_line(n, model.clone())?;
    let report = wma_node_energy(&net, &plan, AntennaModel::Directional)?;
    Ok(WmaSolution {
        plan,
        antenna: AntennaModel::Directional,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::node_energy;

    fn line(n: usize) -> Network {
        Network::regular_line(n, CostModel::power(2.0).unwrap()).unwrap()
    }

    fn l6_chain_tree() -> RootedTree {
        RootedTree::new(6, 1, vec![(1, 0), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn bidirectional_covers_the_other_neighbour() {
        let costs =
            wma_cost_matrix(&l6_chain_tree(), AntennaModel::Bidirectional, &line(6)).unwrap();
        assert_eq!(costs[0].effective_cost, 1.0);
        assert_eq!(costs[0].coverage, vec![0, 2]);
        assert_eq!(costs[1].effective_cost, 0.0);
        assert!(costs[1].coverage.is_empty());
    }

    #[test]
    fn directional_beam_stays_on_one_side() {
        let costs = wma_cost_matrix(&l6_chain_tree(), AntennaModel::Directional, &line(6)).unwrap();
        assert_eq!(costs[0].coverage, vec![0]);
        assert_eq!(costs[1].effective_cost, 1.0);
    }

    #[test]
    fn point_to_point_pays_raw_costs() {
        let net = line(6);
        let tree = RootedTree::new(6, 1, vec![(1, 0), (1, 3), (3, 2), (3, 4), (4, 5)]).unwrap();
        for e in wma_cost_matrix(&tree, AntennaModel::PointToPoint, &net).unwrap() {
            assert_eq!(e.effective_cost, e.raw_cost);
            assert!(e.coverage.is_empty());
        }
    }

    #[test]
    fn directional_rejected_above_one_dimension() {
        let net = Network::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            CostModel::power(2.0).unwrap(),
        )
        .unwrap();
        let tree = RootedTree::new(2, 0, vec![(0, 1)]).unwrap();
        assert!(matches!(
            wma_cost_matrix(&tree, AntennaModel::Directional, &net),
            Err(Error::Unsupported(_))
        ));
        assert!(wma_cost_matrix(&tree, AntennaModel::Bidirectional, &net).is_ok());
    }

    #[test]
    fn zero_cost_edges_cover_nothing() {
        // nodes 0 and 1 coincide
        let net = Network::new(
            1,
            vec![vec![0.0], vec![0.0], vec![1.0]],
            CostModel::power(2.0).unwrap(),
        )
        .unwrap();
        let tree = RootedTree::new(3, 0, vec![(0, 1), (1, 2)]).unwrap();
        let costs = wma_cost_matrix(&tree, AntennaModel::Bidirectional, &net).unwrap();
        assert_eq!(costs[0].effective_cost, 0.0);
        assert!(costs[0].coverage.is_empty());
        assert_eq!(costs[1].effective_cost, 1.0);
    }

    #[test]
    fn bidirectional_line_plan() {
        let s = wma_bidirectional_solution(5, 2, 1.0, &CostModel::power(2.0).unwrap()).unwrap();
        assert_eq!(
            s.plan.parts()[0].edges,
            vec![(2, 1), (1, 0), (2, 3), (3, 4)]
        );
        assert_eq!(s.report.per_node, vec![0.0, 1.0, 1.0, 1.0, 0.0]);
        let s = wma_bidirectional_solution(3, 1, 2.0, &CostModel::power(2.0).unwrap()).unwrap();
        assert_eq!(s.report.objective, 2.0);
        assert!(wma_bidirectional_solution(5, 0, 1.0, &CostModel::power(2.0).unwrap()).is_err());
    }

    #[test]
    fn directional_solution_keeps_point_to_point_energies() {
        let model = CostModel::power(2.0).unwrap();
        for (n, k, expected) in [(4, 1, 81.0 / 58.0), (3, 1, 4.0 / 3.0)] {
            let s = wma_directional_solution(n, k, 1.0, &model).unwrap();
            assert!((s.report.objective - expected).abs() < 1e-14);
            let p2p = node_energy(&line(n), &s.plan).unwrap();
            assert_eq!(p2p.per_node, s.report.per_node);
        }
    }

    #[test]
    fn schedule_order_changes_energy() {
        let net = line(6);
        let a = RootedTree::new(6, 1, vec![(1, 0), (1, 3), (3, 2), (3, 4), (4, 5)]).unwrap();
        let b = a
            .reordered(vec![(1, 3), (3, 2), (1, 0), (3, 4), (4, 5)])
            .unwrap();
        assert!(!schedules_equivalent(&net, &a, &b, AntennaModel::Bidirectional).unwrap());
        assert!(schedules_equivalent(&net, &a, &b, AntennaModel::PointToPoint).unwrap());
        // node 1 (zero-based) pays E_1 + E_2 in the first order, only E_2 in the second
        let energy = |t: &RootedTree| {
            wma_cost_matrix(t, AntennaModel::Bidirectional, &net)
                .unwrap()
                .iter()
                .filter(|e| e.edge.0 == 1)
                .map(|e| e.effective_cost)
                .sum::<f64>()
        };
        assert_eq!(energy(&a), 5.0);
        assert_eq!(energy(&b), 4.0);
    }

    #[test]
    fn antenna_names() {
        assert_eq!(
            "bidirectional".parse::<AntennaModel>().unwrap(),
            AntennaModel::Bidirectional
        );
        assert_eq!(
            serde_json::to_string(&AntennaModel::PointToPoint).unwrap(),
            "\"point-to-point\""
        );
        assert!("omni".parse::<AntennaModel>().is_err());
    }
}
