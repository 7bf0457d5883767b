//! Equilibrium verification: the largest unilateral improvement any player
//! can find against a candidate profile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::FiniteGame;
use crate::game::{best_response_grid, Game, Strategy, StrategyProfile};

/// A candidate pure equilibrium with its verification data.
#[derive(Debug, Clone, Serialize)]
pub struct NashResult {
    pub profile: StrategyProfile,
    /// Largest unilateral gain found by the deviation search (0 at an exact
    /// equilibrium; nonnegative up to search resolution otherwise).
    pub epsilon: f64,
    pub utilities: Vec<f64>,
}

/// Max over players of the best unilateral deviation gain at `profile`.
///
/// Finite players are checked exhaustively over their actions; interval
/// players by a deviation grid of `deviation_points` refined the same way
/// as the generic best response. The current strategy always counts as a
/// candidate, so the result is nonnegative.
pub fn ne_verify(game: &Game, profile: &StrategyProfile, deviation_points: usize) -> Result<f64> {
    game.validate_profile(profile)?;
    let base = game.evaluate(profile)?;
    let mut worst = 0.0f64;
    for player in 0..game.player_count() {
        let gain = match game.space(player) {
            crate::game::StrategySpace::Finite { actions } => {
                let mut best = f64::NEG_INFINITY;
                for a in 0..*actions {
                    let u = game.utility_of(player, &profile.with_action(player, a))?;
                    if u > best {
                        best = u;
                    }
                }
                best - base[player]
            }
            crate::game::StrategySpace::Interval { .. } => {
                let x = best_response_grid(game, player, profile, deviation_points)?;
                let u = game.utility_of(player, &profile.with_real(player, x))?;
                u - base[player]
            }
        };
        worst = worst.max(gain);
    }
    Ok(worst)
}

/// Exact deviation gain for a finite game profile: max over players and
/// actions of the payoff improvement. Exhaustive, no tolerance.
pub fn ne_verify_finite(fg: &FiniteGame, actions: &[usize]) -> Result<f64> {
    if actions.len() != fg.player_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} actions for {} players",
            actions.len(),
            fg.player_count()
        )));
    }
    let base = fg.payoff_vec(actions).to_vec();
    let mut worst = 0.0f64;
    let mut probe = actions.to_vec();
    for player in 0..fg.player_count() {
        let original = probe[player];
        for a in 0..fg.action_counts()[player] {
            probe[player] = a;
            let gain = fg.payoff(&probe, player) - base[player];
            if gain > worst {
                worst = gain;
            }
        }
        probe[player] = original;
    }
    Ok(worst)
}

impl NashResult {
    pub(crate) fn from_actions(fg: &FiniteGame, actions: &[usize], epsilon: f64) -> Self {
        NashResult {
            profile: StrategyProfile::new(actions.iter().map(|&a| Strategy::Action(a)).collect()),
            epsilon,
            utilities: fg.payoff_vec(actions).to_vec(),
        }
    }
}
