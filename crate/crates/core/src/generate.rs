//! Node placements for test and benchmark networks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CostModel, Network};

/// `n` nodes at `1, 2, ..., n` on a line.
pub fn line(n: usize, model: CostModel) -> Result<Network> {
    Network::regular_line(n, model)
}

/// `rows * cols` nodes at integer lattice points `(col, row)` starting at 1,
/// listed row by row.
pub fn grid(rows: usize, cols: usize, model: CostModel) -> Result<Network> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(
            "grid needs at least one row and one column".into(),
        ));
    }
    let nodes = (1..=rows)
        .flat_map(|r| (1..=cols).map(move |c| vec![c as f64, r as f64]))
        .collect();
    Network::new(2, nodes, model)
}

/// `n` points drawn uniformly from `[0, side)^dim` with a ChaCha8 generator
/// seeded by `seed`. Coordinates are drawn node by node, axis by axis.
pub fn random(n: usize, dim: usize, side: f64, seed: u64, model: CostModel) -> Result<Network> {
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "box side must be positive, got {side}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..side)).collect())
        .collect();
    Network::new(dim, nodes, model)
}
