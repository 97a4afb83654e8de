//! Exact solver for small networks: every spanning tree rooted at the source
//! becomes an LP column, and the min-max weight assignment over all of them
//! is the true optimum of the broadcast problem.

pub mod lp;
pub mod prufer;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::model::{node_energy, BroadcastPlan, EnergyReport, Network, NodeId, Part};

pub use lp::{lp_minmax, lp_minmax_with, CoefficientMatrix, LpOptions, MinMaxSolution};
pub use prufer::{TreeEnumeration, DEFAULT_CAP, MAX_CAP};

/// Energy columns of every enumerated tree, with identical columns merged.
#[derive(Debug, Clone)]
pub struct TreeColumns {
    pub matrix: CoefficientMatrix,
    /// Enumeration index of the first tree producing each column.
    pub tree_index: Vec<usize>,
    pub tree_count: usize,
}

/// Builds `c[i][r]`, the energy node `i` spends per unit of data on tree `r`.
/// Columns are computed in parallel; the result does not depend on the
/// thread count.
pub fn tree_columns(net: &Network, trees: &TreeEnumeration) -> TreeColumns {
    let n = net.len();
    let count = trees.len();
    let mut data = vec![0.0; count * n];
    data.par_chunks_mut(n).enumerate().for_each(|(r, col)| {
        let parent = trees.parents(r);
        for v in 0..n {
            if v != trees.root() {
                col[parent[v]] += net.cost(parent[v], v);
            }
        }
    });

    let mut order: Vec<usize> = (0..count).collect();
    order.par_sort_by(|&a, &b| {
        let (ca, cb) = (&data[a * n..(a + 1) * n], &data[b * n..(b + 1) * n]);
        ca.iter()
            .zip(cb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut tree_index = Vec::new();
    let mut prev: Option<usize> = None;
    for &r in &order {
        let distinct = prev.is_none_or(|p| data[p * n..(p + 1) * n] != data[r * n..(r + 1) * n]);
        if distinct {
            tree_index.push(r);
        }
        prev = Some(r);
    }
    tree_index.sort_unstable();

    let matrix =
        CoefficientMatrix::from_columns(n, tree_index.iter().map(|&r| &data[r * n..(r + 1) * n]))
            .expect("tree energies are finite and nonnegative");
    TreeColumns {
        matrix,
        tree_index,
        tree_count: count,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactStats {
    pub tree_count: usize,
    pub distinct_columns: usize,
    pub lp_iterations: usize,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub plan: BroadcastPlan,
    pub report: EnergyReport,
    pub stats: ExactStats,
}

pub fn solve_exact(
    net: &Network,
    source: NodeId,
    demand: f64,
    cap: usize,
) -> Result<ExactSolution> {
    solve_exact_with(net, source, demand, cap, &LpOptions::default())
}

/// Optimal plan over all spanning trees rooted at `source`. Only trees with a
/// weight above `1e-12 * demand` are kept in the plan.
pub fn solve_exact_with(
    net: &Network,
    source: NodeId,
    demand: f64,
    cap: usize,
    options: &LpOptions,
) -> Result<ExactSolution> {
    net.check_node(source)?;
    let trees = TreeEnumeration::new(net.len(), source, cap)?;
    let columns = tree_columns(net, &trees);
    let solution = lp_minmax_with(&columns.matrix, demand, options)?;

    let mut parts: Vec<Part> = solution
        .weights
        .iter()
        .zip(&columns.tree_index)
        .filter(|(w, _)| **w > 1e-12 * demand)
        .map(|(&w, &r)| Part::new(trees.tree(r).into_edges(), w))
        .collect();
    let kept: f64 = parts.iter().map(|p| p.weight).sum();
    for p in &mut parts {
        p.weight *= demand / kept;
    }
    let plan = BroadcastPlan::new(source, demand, parts)?;
    let report = node_energy(net, &plan)?;
    Ok(ExactSolution {
        stats: ExactStats {
            tree_count: columns.tree_count,
            distinct_columns: columns.matrix.cols(),
            lp_iterations: solution.iterations,
            objective: report.objective,
        },
        plan,
        report,
    })
}
