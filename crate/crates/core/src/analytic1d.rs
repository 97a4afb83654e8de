//! Closed-form optimal plans on the regular line `L_N`.
//!
//! A border source sends everything along the next-hop path. An internal
//! source at position `k` splits its data over `N` trees: tree `r < k` runs
//! the left chain, jumps from `r` over the source to `k + 1` and continues to
//! the right; tree `k` runs both chains from the source; tree `r > k` mirrors
//! the first family. With the weights below every node spends exactly
//! `E_1 (q_k + Q)`.
//!
//! Positions in this module's formulas are one-based (`k` in `2..N-1`); the
//! public functions take zero-based node indices like the rest of the crate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    node_energy, BroadcastPlan, CostModel, Edge, EnergyReport, Network, NodeId, Part, RootedTree,
};

#[derive(Debug, Clone)]
pub struct LineSolution {
    pub n: usize,
    pub source: NodeId,
    pub demand: f64,
    pub trees: Vec<RootedTree>,
    pub weights: Vec<f64>,
    pub report: EnergyReport,
}

impl LineSolution {
    pub fn plan(&self) -> BroadcastPlan {
        BroadcastPlan::new(
            self.source,
            self.demand,
            self.trees
                .iter()
                .zip(&self.weights)
                .map(|(t, &w)| Part::new(t.edges().to_vec(), w))
                .collect(),
        )
        .expect("closed-form weights sum to the demand")
    }
}

/// Next-hop path from a border source: `1 -> 2 -> ... -> N` or its mirror.
pub fn border_solution(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
) -> Result<LineSolution> {
    check_demand(demand)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "L_N needs at least 2 nodes, got {n}"
        )));
    }
    let edges: Vec<Edge> = if source == 0 {
        (0..n - 1).map(|i| (i, i + 1)).collect()
    } else if source == n - 1 {
        (1..n).rev().map(|i| (i, i - 1)).collect()
    } else {
        return Err(Error::NotBorderNode {
            source_node: source,
            len: n,
        });
    };
    let tree = RootedTree::new(n, source, edges)?;
    finish(n, source, demand, model, vec![tree], vec![demand])
}

/// Equal-energy solution for an internal source.
pub fn internal_solution(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
) -> Result<LineSolution> {
    let weights = internal_weights(n, source, demand, model)?;
    let k = source + 1;
    let trees = (1..=n)
        .map(|r| RootedTree::new(n, source, internal_tree(n, k, r)))
        .collect::<Result<Vec<_>>>()?;
    finish(n, source, demand, model, trees, weights)
}

/// Border or internal solution, whichever applies to `source`.
pub fn line_solution(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
) -> Result<LineSolution> {
    if source >= n {
        return Err(Error::NodeOutOfRange {
            index: source,
            len: n,
        });
    }
    if source == 0 || source == n - 1 {
        border_solution(n, source, demand, model)
    } else {
        internal_solution(n, source, demand, model)
    }
}

/// Edges of tree `r` (one-based) for the internal source `k` (one-based),
/// in the transmission order of the closed form, converted to zero-based.
fn internal_tree(n: usize, k: usize, r: usize) -> Vec<Edge> {
    // one-based chains
    let left_from = |start: usize| (2..=start).rev().map(|i| (i, i - 1));
    let right_from = |start: usize| (start..n).map(|i| (i, i + 1));
    let edges: Vec<(usize, usize)> = if r < k {
        left_from(k)
            .chain([(r, k + 1)])
            .chain(right_from(k + 1))
            .collect()
    } else if r == k {
        left_from(k).chain(right_from(k)).collect()
    } else {
        right_from(k)
            .chain([(r, k - 1)])
            .chain(left_from(k - 1))
            .collect()
    };
    edges.into_iter().map(|(i, j)| (i - 1, j - 1)).collect()
}

/// Weights `q_1..q_N` of the internal solution, in `O(N)`.
pub fn internal_weights(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
) -> Result<Vec<f64>> {
    check_demand(demand)?;
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
    let k = source + 1;
    let e = |r: usize| model.eval(r as f64);
    let e1 = e(1);
    let ratio = |r: usize| e1 / e(r);
    let left: f64 = (1..=k).map(ratio).sum();
    let right: f64 = (1..=n - k + 1).map(ratio).sum();
    let numerator = (1.0 - ratio(k) - ratio(n - k + 1)).max(0.0);
    let qk = numerator / (-1.0 + left + right) * demand;

    let weights = (1..=n)
        .map(|r| {
            if r == 1 {
                ratio(k) * (qk + demand)
            } else if r < k {
                ratio(k + 1 - r) * qk
            } else if r == k {
                qk
            } else if r < n {
                ratio(r - k + 1) * qk
            } else {
                ratio(n - k + 1) * (qk + demand)
            }
        })
        .collect();
    Ok(weights)
}

/// Objective of the line solution from the closed form alone: `E_1 Q` for a
/// border source, `E_1 (q_k + Q)` for an internal one.
pub fn line_objective(n: usize, source: NodeId, demand: f64, model: &CostModel) -> Result<f64> {
    let e1 = model.eval(1.0);
    if source == 0 || source + 1 == n {
        check_demand(demand)?;
        return Ok(e1 * demand);
    }
    let w = internal_weights(n, source, demand, model)?;
    Ok(e1 * (w[source] + demand))
}

fn finish(
    n: usize,
    source: NodeId,
    demand: f64,
    model: &CostModel,
    trees: Vec<RootedTree>,
    weights: Vec<f64>,
) -> Result<LineSolution> {
    let net = Network::regular_line(n, model.clone())?;
    let mut solution = LineSolution {
        n,
        source,
        demand,
        trees,
        weights,
        report: EnergyReport::from_energies(Vec::new()),
    };
    solution.report = node_energy(&net, &solution.plan())?;
    Ok(solution)
}

fn check_demand(demand: f64) -> Result<()> {
    if demand.is_finite() && demand >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "demand must be finite and nonnegative, got {demand}"
        )))
    }
}

/// Which closed form to use for the `N -> infinity` energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVariant {
    /// The actual limit of the finite-`N` weights (denominator keeps its `-1`).
    Consistent,
    /// Variant whose denominator omits the `-1` term of the finite-N formula.
    AsPrinted,
}

/// `sum_{r >= 1} E_1 / E_r`, or `None` when the series diverges (every
/// term with a positive weight is linear).
pub fn inverse_cost_series(model: &CostModel) -> Option<f64> {
    let a = model.dominant_exponent();
    if a <= 1.0 {
        return None;
    }
    const HEAD: usize = 1000;
    let e1 = model.eval(1.0);
    let f = |x: f64| e1 / model.eval(x);
    // sum_{r < M} f(r) + Euler-Maclaurin estimate of sum_{r >= M} f(r)
    let head: f64 = (1..HEAD).map(|r| f(r as f64)).sum();
    let m = HEAD as f64;
    let e_m = model.eval(m);
    let f_prime = -e1 * model.derivative(m) / (e_m * e_m);
    Some(head + tail_integral(model, m) + f(m) / 2.0 - f_prime / 12.0)
}

/// `integral_M^inf E_1 / E(x) dx`. The dominant power term is integrated in
/// closed form; the (faster decaying) remainder numerically on a log scale.
fn tail_integral(model: &CostModel, m: f64) -> f64 {
    let e1 = model.eval(1.0);
    let a = model.dominant_exponent();
    let lambda = model.dominant_weight();
    let dominant = e1 * m.powf(1.0 - a) / (lambda * (a - 1.0));

    let remainder = |x: f64| e1 / model.eval(x) - e1 / (lambda * x.powf(a));
    // x = m e^s, dx = x ds
    let g = |s: f64| {
        let x = m * s.exp();
        remainder(x) * x
    };
    if g(0.0) == 0.0 {
        return dominant;
    }
    const STEP: f64 = 1.0 / 64.0;
    const MAX_SPAN: f64 = 4000.0;
    let mut total = 0.0;
    let mut s = 0.0;
    while s < MAX_SPAN {
        // Simpson on [s, s + STEP]
        let (g0, g1, g2) = (g(s), g(s + STEP / 2.0), g(s + STEP));
        total += STEP / 6.0 * (g0 + 4.0 * g1 + g2);
        s += STEP;
        if g2.abs() < 1e-18 {
            break;
        }
    }
    dominant + total
}

/// Per-node energy of the internal solution as `N -> infinity`, per unit of
/// demand. Equals `E_1` when the inverse-cost series diverges.
pub fn asymptotic_energy(source: NodeId, model: &CostModel, variant: LimitVariant) -> Result<f64> {
    if source == 0 {
        return Err(Error::InvalidArgument(
            "the limit is defined for sources at position 2 or beyond".into(),
        ));
    }
    let k = source + 1;
    let e1 = model.eval(1.0);
    let Some(series) = inverse_cost_series(model) else {
        return Ok(e1);
    };
    let near: f64 = (1..=k).map(|r| e1 / model.eval(r as f64)).sum();
    let numerator = 1.0 - e1 / model.eval(k as f64);
    let denominator = match variant {
        LimitVariant::Consistent => -1.0 + near + series,
        LimitVariant::AsPrinted => near + series,
    };
    Ok(e1 * (1.0 + numerator / denominator))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    /// One-based source position.
    pub k: usize,
    pub a: f64,
    pub objective_per_q: f64,
    pub limit_consistent: f64,
    pub limit_as_printed: f64,
    /// `objective_per_q - limit_consistent`.
    pub gap: f64,
}

/// Objective per unit demand for `E(r) = r^a` and every `N` in `sizes`
/// where the source is an internal node, alongside both limits.
pub fn sweep(
    source: NodeId,
    a: f64,
    sizes: impl IntoIterator<Item = usize>,
) -> Result<Vec<SweepRow>> {
    let model = CostModel::power(a)?;
    let limit_consistent = asymptotic_energy(source, &model, LimitVariant::Consistent)?;
    let limit_as_printed = asymptotic_energy(source, &model, LimitVariant::AsPrinted)?;
    let mut rows = Vec::new();
    for n in sizes {
        if source + 1 >= n {
            continue;
        }
        let objective_per_q = line_objective(n, source, 1.0, &model)?;
        rows.push(SweepRow {
            n,
            k: source + 1,
            a,
            objective_per_q,
            limit_consistent,
            limit_as_printed,
            gap: objective_per_q - limit_consistent,
        });
    }
    Ok(rows)
}
