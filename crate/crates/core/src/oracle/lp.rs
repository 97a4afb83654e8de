//! Min-max weight assignment as an epigraph linear program:
//!
//! ```text
//! minimize t  subject to  C q <= t 1,  sum(q) = Q,  q >= 0
//! ```
//!
//! where column `r` of `C` holds the energy every node spends per unit of
//! data sent along part `r`. Solved with a revised simplex over the full
//! column set using Bland's rule, so the pivot sequence is deterministic and
//! cannot cycle. The starting basis is built from a single column (all data
//! on one part), which is always feasible, so no phase one is needed.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Smallest acceptable pivot element.
pub const PIVOT_TOL: f64 = 1e-10;
/// Primal feasibility tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 50;

/// Column-major nonnegative matrix: one column per part, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CoefficientMatrix {
    pub fn new(rows: usize) -> Self {
        Self {
            rows,
            cols: 0,
            data: Vec::new(),
        }
    }

    pub fn from_columns<I, C>(rows: usize, columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[f64]>,
    {
        let mut m = Self::new(rows);
        for c in columns {
            m.push_column(c.as_ref())?;
        }
        Ok(m)
    }

    /// Builds from row-major nested vectors `c[i][r]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged coefficient rows".into()));
        }
        Self::from_columns(
            n,
            (0..cols).map(|r| rows.iter().map(|row| row[r]).collect::<Vec<_>>()),
        )
    }

    pub fn push_column(&mut self, column: &[f64]) -> Result<()> {
        if column.len() != self.rows {
            return Err(Error::InvalidArgument(format!(
                "column has {} entries, expected {}",
                column.len(),
                self.rows
            )));
        }
        if let Some(v) = column.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coefficients must be finite and nonnegative, got {v}"
            )));
        }
        self.data.extend_from_slice(column);
        self.cols += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, r: usize) -> &[f64] {
        &self.data[r * self.rows..(r + 1) * self.rows]
    }

    pub fn get(&self, i: usize, r: usize) -> f64 {
        self.data[r * self.rows + i]
    }

    /// `max_i sum_r c[i][r] q_r`.
    pub fn objective(&self, weights: &[f64]) -> f64 {
        self.row_values(weights)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `C q`, summed over columns in index order.
    pub fn row_values(&self, weights: &[f64]) -> Vec<f64> {
        let mut e = vec![0.0; self.rows];
        for (r, &w) in weights.iter().enumerate() {
            if w != 0.0 {
                for (ei, c) in e.iter_mut().zip(self.column(r)) {
                    *ei += w * c;
                }
            }
        }
        e
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Column that carries all the data in the starting basis.
    pub start_column: usize,
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            start_column: 0,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxSolution {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

pub fn lp_minmax(c: &CoefficientMatrix, demand: f64) -> Result<MinMaxSolution> {
    lp_minmax_with(c, demand, &LpOptions::default())
}

pub fn lp_minmax_with(
    c: &CoefficientMatrix,
    demand: f64,
    options: &LpOptions,
) -> Result<MinMaxSolution> {
    if c.rows() == 0 || c.cols() == 0 {
        return Err(Error::InvalidArgument("empty coefficient matrix".into()));
    }
    if !demand.is_finite() || demand <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "demand must be positive, got {demand}"
        )));
    }
    if options.start_column >= c.cols() {
        return Err(Error::InvalidArgument(format!(
            "start column {} out of range for {} columns",
            options.start_column,
            c.cols()
        )));
    }
    let scale = c.data.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        let mut weights = vec![0.0; c.cols()];
        weights[options.start_column] = demand;
        return Ok(MinMaxSolution {
            weights,
            objective: 0.0,
            iterations: 0,
        });
    }

    let mut simplex = Simplex::new(c, scale, options.start_column)?;
    simplex.run(options.max_iterations)?;
    let fractions = simplex.fractions();
    let weights: Vec<f64> = fractions.iter().map(|f| f * demand).collect();
    let objective = c.objective(&weights);
    Ok(MinMaxSolution {
        weights,
        objective,
        iterations: simplex.iterations,
    })
}

/// Variables are ordered `q_0..q_{m-1}`, then `t`, then one slack per
/// energy row; Bland's rule uses this order.
struct Simplex<'a> {
    c: &'a CoefficientMatrix,
    inv_scale: f64,
    /// Energy rows plus the demand row.
    size: usize,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<f64>,
    x: Vec<f64>,
    iterations: usize,
}

impl<'a> Simplex<'a> {
    fn new(c: &'a CoefficientMatrix, scale: f64, start: usize) -> Result<Self> {
        let n = c.rows();
        let m = c.cols();
        let col = c.column(start);
        let mut top = 0;
        for (i, &v) in col.iter().enumerate() {
            if v > col[top] {
                top = i;
            }
        }
        // q_start carries everything, t equals the largest row, the binding
        // row's slack leaves the basis
        let mut basis = vec![start, m];
        basis.extend((0..n).filter(|&i| i != top).map(|i| m + 1 + i));
        let mut is_basic = vec![false; m + 1 + n];
        for &v in &basis {
            is_basic[v] = true;
        }
        let mut s = Self {
            c,
            inv_scale: 1.0 / scale,
            size: n + 1,
            basis,
            is_basic,
            binv: Vec::new(),
            x: Vec::new(),
            iterations: 0,
        };
        s.refactor()?;
        Ok(s)
    }

    fn t_index(&self) -> usize {
        self.c.cols()
    }

    fn column(&self, var: usize) -> Vec<f64> {
        let n = self.c.rows();
        let m = self.c.cols();
        let mut a = vec![0.0; self.size];
        if var < m {
            for (ai, v) in a.iter_mut().zip(self.c.column(var)) {
                *ai = v * self.inv_scale;
            }
            a[n] = 1.0;
        } else if var == m {
            a[..n].fill(-1.0);
        } else {
            a[var - m - 1] = 1.0;
        }
        a
    }

    fn refactor(&mut self) -> Result<()> {
        let k = self.size;
        let mut b = DMatrix::<f64>::zeros(k, k);
        for (p, &var) in self.basis.iter().enumerate() {
            for (i, v) in self.column(var).into_iter().enumerate() {
                b[(i, p)] = v;
            }
        }
        let inv = b.clone().try_inverse().ok_or_else(|| {
            Error::Lp(format!(
                "singular basis after {} iterations (basis {:?})",
                self.iterations, self.basis
            ))
        })?;
        self.binv = (0..k * k).map(|idx| inv[(idx / k, idx % k)]).collect();
        // x_B = B^{-1} b with b = e_demand
        self.x = (0..k).map(|p| self.binv[p * k + (k - 1)]).collect();
        for v in &mut self.x {
            if *v < 0.0 && *v > -FEASIBILITY_TOL {
                *v = 0.0;
            }
        }
        if let Some(v) = self.x.iter().find(|v| **v < 0.0) {
            return Err(Error::Lp(format!(
                "basis lost feasibility (value {v}) after {} iterations; condition estimate {:.3e}",
                self.iterations,
                condition_estimate(&b, &inv)
            )));
        }
        Ok(())
    }

    fn duals(&self) -> Vec<f64> {
        let k = self.size;
        match self.basis.iter().position(|&v| v == self.t_index()) {
            Some(p) => self.binv[p * k..(p + 1) * k].to_vec(),
            None => vec![0.0; k],
        }
    }

    /// First variable (Bland order) with a negative reduced cost.
    fn entering(&self, y: &[f64]) -> Option<usize> {
        let n = self.c.rows();
        let m = self.c.cols();
        let y_demand = y[n];
        for r in 0..m {
            if self.is_basic[r] {
                continue;
            }
            let dot: f64 = self
                .c
                .column(r)
                .iter()
                .zip(y)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                * self.inv_scale;
            if -(dot + y_demand) < -PIVOT_TOL {
                return Some(r);
            }
        }
        if !self.is_basic[m] && 1.0 + y[..n].iter().sum::<f64>() < -PIVOT_TOL {
            return Some(m);
        }
        (0..n)
            .find(|&i| !self.is_basic[m + 1 + i] && -y[i] < -PIVOT_TOL)
            .map(|i| m + 1 + i)
    }

    fn run(&mut self, max_iterations: usize) -> Result<()> {
        let k = self.size;
        loop {
            let y = self.duals();
            let Some(enter) = self.entering(&y) else {
                self.refactor()?;
                return Ok(());
            };
            if self.iterations >= max_iterations {
                return Err(Error::Lp(format!(
                    "iteration cap {max_iterations} reached; {} columns, {} rows",
                    self.c.cols(),
                    self.c.rows()
                )));
            }
            let a = self.column(enter);
            let alpha: Vec<f64> = (0..k)
                .map(|p| (0..k).map(|i| self.binv[p * k + i] * a[i]).sum())
                .collect();

            let mut leave: Option<(usize, f64)> = None;
            for p in 0..k {
                if alpha[p] <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.x[p].max(0.0) / alpha[p];
                leave = match leave {
                    None => Some((p, ratio)),
                    Some((q, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * best.max(1.0);
                        if ratio < best && !tie || tie && self.basis[p] < self.basis[q] {
                            Some((p, ratio))
                        } else {
                            Some((q, best))
                        }
                    }
                };
            }
            let Some((p, theta)) = leave else {
                return Err(Error::Lp(format!(
                    "unbounded direction on variable {enter} after {} iterations",
                    self.iterations
                )));
            };

            let pivot = alpha[p];
            for i in 0..k {
                self.binv[p * k + i] /= pivot;
            }
            for r in 0..k {
                if r != p && alpha[r] != 0.0 {
                    let f = alpha[r];
                    for i in 0..k {
                        self.binv[r * k + i] -= f * self.binv[p * k + i];
                    }
                    self.x[r] -= f * theta;
                }
            }
            self.x[p] = theta;
            self.is_basic[self.basis[p]] = false;
            self.is_basic[enter] = true;
            self.basis[p] = enter;

            self.iterations += 1;
            if self.iterations.is_multiple_of(REFACTOR_EVERY) {
                self.refactor()?;
            }
        }
    }

    /// Basic part weights as fractions of the demand, renormalized to sum to one.
    fn fractions(&self) -> Vec<f64> {
        let m = self.c.cols();
        let mut q = vec![0.0; m];
        for (p, &var) in self.basis.iter().enumerate() {
            if var < m {
                q[var] = self.x[p].max(0.0);
            }
        }
        let total: f64 = q.iter().sum();
        if total > 0.0 {
            for v in &mut q {
                *v /= total;
            }
        }
        q
    }
}

fn condition_estimate(b: &DMatrix<f64>, inv: &DMatrix<f64>) -> f64 {
    b.abs().max() * inv.abs().max() * b.nrows() as f64
}
