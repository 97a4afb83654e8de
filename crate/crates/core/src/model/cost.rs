//! Per-unit-data transmission cost as a function of distance.
//!
//! The cost of sending one unit of data over distance `r` is the polynomial
//! `E(r) = sum_n lambda_n * r^a_n` with `lambda_n >= 0` and `a_n >= 1`. Any
//! such function is superadditive on the line, which makes next-hop relaying
//! never more expensive than a direct long transmission.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by the normalization check and the superadditivity test.
pub const ALGEBRA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostTerm {
    pub lambda: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    terms: Vec<CostTerm>,
    normalized: bool,
}

impl CostModel {
    /// Builds a model, rejecting negative weights, exponents below one and
    /// models whose weights are all zero. When `normalized` is set the weights
    /// must sum to one so that the unit-distance cost is exactly one.
    pub fn new(terms: Vec<CostTerm>, normalized: bool) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidCostModel(
                "at least one term is required".into(),
            ));
        }
        for (n, t) in terms.iter().enumerate() {
            if !t.lambda.is_finite() || t.lambda < 0.0 {
                return Err(Error::InvalidCostModel(format!(
                    "term {n}: lambda must be finite and nonnegative, got {}",
                    t.lambda
                )));
            }
            if !t.a.is_finite() || t.a < 1.0 {
                return Err(Error::InvalidCostModel(format!(
                    "term {n}: exponent must be at least 1, got {}",
                    t.a
                )));
            }
        }
        let total: f64 = terms.iter().map(|t| t.lambda).sum();
        if total <= 0.0 {
            return Err(Error::InvalidCostModel("all weights are zero".into()));
        }
        if normalized && (total - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::InvalidCostModel(format!(
                "normalized model requires weights summing to 1, got {total}"
            )));
        }
        Ok(Self { terms, normalized })
    }

    /// `E(r) = r^a`, normalized.
    pub fn power(a: f64) -> Result<Self> {
        Self::new(vec![CostTerm { lambda: 1.0, a }], true)
    }

    pub fn terms(&self) -> &[CostTerm] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Cost of one unit of data over distance `r`.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        if r == 0.0 {
            return 0.0;
        }
        self.terms.iter().map(|t| t.lambda * r.powf(t.a)).sum()
    }

    /// Largest exponent among terms with a positive weight; it governs the
    /// growth of `E(r)` for large `r`.
    pub fn dominant_exponent(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.lambda > 0.0)
            .map(|t| t.a)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Weight of the dominant term (summed if several share the exponent).
    pub(crate) fn dominant_weight(&self) -> f64 {
        let a = self.dominant_exponent();
        self.terms
            .iter()
            .filter(|t| t.a == a)
            .map(|t| t.lambda)
            .sum()
    }

    /// Smallest exponent among terms with a positive weight.
    pub fn min_exponent(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.lambda > 0.0)
            .map(|t| t.a)
            .fold(f64::INFINITY, f64::min)
    }

    /// Derivative `E'(r)`, used by the series tail estimate.
    pub(crate) fn derivative(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.lambda * t.a * r.powf(t.a - 1.0))
            .sum()
    }
}

/// A pair of distances for which `E(r) + E(r') > E(r + r')`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperadditivityViolation {
    pub r: f64,
    pub r_prime: f64,
    pub split_cost: f64,
    pub direct_cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperadditivityCheck {
    pub holds: bool,
    pub violations: Vec<SuperadditivityViolation>,
}

/// Tests `E(r) + E(r') <= E(r + r')` for every pair drawn from `distances`
/// (a distance may be paired with itself).
pub fn check_superadditive(model: &CostModel, distances: &[f64]) -> SuperadditivityCheck {
    let mut violations = Vec::new();
    for (i, &r) in distances.iter().enumerate() {
        for &r_prime in &distances[i..] {
            if let Some(v) = violation(model, r, r_prime) {
                violations.push(v);
            }
        }
    }
    SuperadditivityCheck {
        holds: violations.is_empty(),
        violations,
    }
}

/// Tests every integer triple `x_i <= x_j <= x_k` of the regular line with
/// `n` nodes, i.e. every pair of hop lengths whose sum fits on the line.
pub fn check_superadditive_line(model: &CostModel, n: usize) -> SuperadditivityCheck {
    let mut violations = Vec::new();
    for r in 1..n {
        for r_prime in r..n.saturating_sub(r) {
            if let Some(v) = violation(model, r as f64, r_prime as f64) {
                violations.push(v);
            }
        }
    }
    SuperadditivityCheck {
        holds: violations.is_empty(),
        violations,
    }
}

fn violation(model: &CostModel, r: f64, r_prime: f64) -> Option<SuperadditivityViolation> {
    let split_cost = model.eval(r) + model.eval(r_prime);
    let direct_cost = model.eval(r + r_prime);
    if split_cost <= direct_cost + ALGEBRA_TOL * direct_cost.max(1.0) {
        None
    } else {
        Some(SuperadditivityViolation {
            r,
            r_prime,
            split_cost,
            direct_cost,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(terms: &[(f64, f64)]) -> CostModel {
        CostModel::new(
            terms
                .iter()
                .map(|&(lambda, a)| CostTerm { lambda, a })
                .collect(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(model(&[(1.0, 2.0)]).eval(2.0), 4.0);
        assert_eq!(model(&[(1.0, 1.0)]).eval(3.0), 3.0);
        let mixed = model(&[(0.5, 1.0), (0.5, 3.0)]);
        let parts = model(&[(0.5, 1.0)]).eval(2.0) + model(&[(0.5, 3.0)]).eval(2.0);
        assert_eq!(mixed.eval(2.0), 5.0);
        assert_eq!(mixed.eval(2.0), parts);
        assert_eq!(mixed.eval(0.0), 0.0);
    }

    #[test]
    fn construction_rejects_bad_terms() {
        let sub_linear = CostModel::new(
            vec![CostTerm {
                lambda: 1.0,
                a: 0.5,
            }],
            false,
        );
        assert!(matches!(sub_linear, Err(Error::InvalidCostModel(_))));
        assert!(CostModel::new(vec![], false).is_err());
        assert!(CostModel::new(
            vec![CostTerm {
                lambda: -1.0,
                a: 2.0
            }],
            false
        )
        .is_err());
        assert!(CostModel::new(
            vec![CostTerm {
                lambda: 0.0,
                a: 2.0
            }],
            false
        )
        .is_err());
        assert!(CostModel::new(
            vec![CostTerm {
                lambda: 2.0,
                a: 2.0
            }],
            true
        )
        .is_err());
        assert!(CostModel::new(
            vec![
                CostTerm {
                    lambda: 0.25,
                    a: 1.0
                },
                CostTerm {
                    lambda: 0.75,
                    a: 2.0
                }
            ],
            true
        )
        .is_ok());
    }

    #[test]
    fn superadditive_examples() {
        let quad = check_superadditive(&model(&[(1.0, 2.0)]), &[1.0, 1.0, 2.0]);
        assert!(quad.holds);
        // linear cost is the boundary case: equality everywhere
        let lin = check_superadditive(&model(&[(1.0, 1.0)]), &[1.0, 1.0, 2.0]);
        assert!(lin.holds);
        assert!(check_superadditive_line(&model(&[(0.3, 1.0), (0.7, 2.5)]), 12).holds);
    }

    #[test]
    fn dominant_exponent_ignores_zero_weights() {
        let m = model(&[(1.0, 1.0), (0.0, 3.0)]);
        assert_eq!(m.dominant_exponent(), 1.0);
        assert_eq!(m.min_exponent(), 1.0);
        let m = model(&[(0.2, 1.0), (0.8, 2.0)]);
        assert_eq!(m.dominant_exponent(), 2.0);
        assert_eq!(m.dominant_weight(), 0.8);
    }

    fn arb_model() -> impl Strategy<Value = CostModel> {
        prop::collection::vec((0.01f64..5.0, 1.0f64..4.0), 1..4).prop_map(|t| model(&t))
    }

    proptest! {
        #[test]
        fn eval_is_monotone(m in arb_model(), r in 0.0f64..50.0, dr in 0.0f64..10.0) {
            prop_assert_eq!(m.eval(0.0), 0.0);
            prop_assert!(m.eval(r) <= m.eval(r + dr));
            prop_assert!(m.eval(r) >= 0.0);
        }

        #[test]
        fn eval_is_superadditive(m in arb_model(), r in 0.001f64..30.0, rp in 0.001f64..30.0) {
            let split = m.eval(r) + m.eval(rp);
            let direct = m.eval(r + rp);
            prop_assert!(split <= direct + ALGEBRA_TOL * direct.max(1.0));
        }
    }
}
