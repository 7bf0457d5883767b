//! Concave quadratic game with a shared capacity constraint, used to
//! exercise the normalized-equilibrium machinery against closed forms.

use std::sync::Arc;

use crate::efficiency::ConstraintSpec;
use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile, StrategySpace, UtilityFn};

/// `u_i(s) = -(s_i - t_i)^2` with the shared feasibility constraint
/// `h(s) = cap - sum_i s_i >= 0`.
///
/// When the unconstrained optimum `s = t` is infeasible, the normalized
/// equilibrium for weights `r` sits on the boundary at
/// `s_i = t_i - lambda / (2 r_i)` with the common multiplier
/// `lambda = 2 (sum t - cap) / sum(1/r_i)`, so the per-player multipliers
/// satisfy `lambda_i r_i = lambda` exactly.
#[derive(Clone)]
pub struct ConstrainedQuadraticGame {
    game: Game,
    targets: Vec<f64>,
    cap: f64,
}

pub fn make_constrained_quadratic(targets: Vec<f64>, cap: f64) -> Result<ConstrainedQuadraticGame> {
    if targets.is_empty() {
        return Err(Error::Parameter("need at least one player".into()));
    }
    if targets.iter().any(|t| !t.is_finite() || *t <= 0.0) || !cap.is_finite() || cap <= 0.0 {
        return Err(Error::Parameter(
            "targets and cap must be positive and finite".into(),
        ));
    }
    let upper = targets.iter().cloned().fold(cap, f64::max) * 2.0;
    let spaces = targets
        .iter()
        .map(|_| StrategySpace::Interval { lower: 0.0, upper })
        .collect();
    let t = targets.clone();
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        t.iter()
            .enumerate()
            .map(|(i, &ti)| {
                let s = profile.real(i).expect("real strategy");
                -(s - ti) * (s - ti)
            })
            .collect()
    });
    let game = Game::new("constrained_quadratic", spaces, utility)?;
    Ok(ConstrainedQuadraticGame { game, targets, cap })
}

impl ConstrainedQuadraticGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// The shared constraint `cap - sum_i s_i >= 0` with the given weights.
    pub fn constraint(&self, weights: Vec<f64>) -> Result<ConstraintSpec> {
        let k = self.targets.len();
        let cap = self.cap;
        ConstraintSpec::new(
            Arc::new(move |profile: &StrategyProfile| {
                cap - (0..k)
                    .map(|i| profile.real(i).expect("real strategy"))
                    .sum::<f64>()
            }),
            weights,
        )
    }

    /// Closed-form normalized equilibrium for weights `r`, with its common
    /// multiplier. Interior when the targets are jointly feasible.
    pub fn normalized_equilibrium(&self, weights: &[f64]) -> Result<(StrategyProfile, f64)> {
        if weights.len() != self.targets.len() {
            return Err(Error::DimensionMismatch("one weight per player".into()));
        }
        let total: f64 = self.targets.iter().sum();
        if total <= self.cap {
            return Ok((StrategyProfile::reals(&self.targets), 0.0));
        }
        let inv_sum: f64 = weights.iter().map(|r| 1.0 / r).sum();
        let lambda = 2.0 * (total - self.cap) / inv_sum;
        let point: Vec<f64> = self
            .targets
            .iter()
            .zip(weights)
            .map(|(&t, &r)| t - lambda / (2.0 * r))
            .collect();
        Ok((StrategyProfile::reals(&point), lambda))
    }
}
