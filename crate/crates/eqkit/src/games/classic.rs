//! Classic 2x2 matrix games plus the slotted-ALOHA medium-access game.

use crate::error::{Error, Result};
use crate::finite::FiniteGame;

/// Zero-sum matching game: actions (heads, tails), row player wins on a
/// match. No pure equilibrium; the unique mixed equilibrium is uniform.
pub fn matching_pennies() -> FiniteGame {
    FiniteGame::from_tables_2p(
        "matching_pennies",
        &[vec![1.0, -1.0], vec![-1.0, 1.0]],
        &[vec![-1.0, 1.0], vec![1.0, -1.0]],
    )
    .expect("valid game")
}

/// Actions (cooperate, defect); (defect, defect) is the unique equilibrium
/// while (cooperate, cooperate) maximizes welfare.
pub fn prisoners_dilemma() -> FiniteGame {
    FiniteGame::from_tables_2p(
        "prisoners_dilemma",
        &[vec![3.0, 0.0], vec![5.0, 1.0]],
        &[vec![3.0, 5.0], vec![0.0, 1.0]],
    )
    .expect("valid game")
}

/// Coordination game with conflicting preferences; two pure equilibria and
/// one mixed at ((2/3, 1/3), (1/3, 2/3)).
pub fn battle_of_sexes() -> FiniteGame {
    FiniteGame::from_tables_2p(
        "battle_of_sexes",
        &[vec![2.0, 0.0], vec![0.0, 1.0]],
        &[vec![1.0, 0.0], vec![0.0, 2.0]],
    )
    .expect("valid game")
}

/// Anti-coordination game, actions (dare, chicken); correlated play can
/// avoid the crash outcome entirely.
pub fn chicken() -> FiniteGame {
    FiniteGame::from_tables_2p(
        "chicken",
        &[vec![0.0, 7.0], vec![2.0, 6.0]],
        &[vec![0.0, 2.0], vec![7.0, 6.0]],
    )
    .expect("valid game")
}

/// Two-user slotted-ALOHA slot game, actions (transmit, wait): a lone
/// transmitter earns `transmit_gain - energy_cost`, a collision costs both
/// `collision_cost + energy_cost`, waiting is free.
pub fn make_aloha(transmit_gain: f64, collision_cost: f64, energy_cost: f64) -> Result<FiniteGame> {
    for (name, v) in [
        ("transmit_gain", transmit_gain),
        ("collision_cost", collision_cost),
        ("energy_cost", energy_cost),
    ] {
        if !v.is_finite() {
            return Err(Error::Parameter(format!("{name} must be finite")));
        }
    }
    if transmit_gain <= energy_cost {
        return Err(Error::Parameter(
            "transmit_gain must exceed energy_cost or transmitting is dominated".into(),
        ));
    }
    let success = transmit_gain - energy_cost;
    let crash = -collision_cost - energy_cost;
    FiniteGame::from_tables_2p(
        "aloha",
        &[vec![crash, success], vec![0.0, 0.0]],
        &[vec![crash, 0.0], vec![success, 0.0]],
    )
}

/// ALOHA at the default parameters (gain 1.0, collision cost 1.0, energy
/// cost 0.1).
pub fn aloha_default() -> FiniteGame {
    make_aloha(1.0, 1.0, 0.1).expect("valid defaults")
}

/// Transmit probability of the symmetric mixed equilibrium of the ALOHA
/// game: the opponent rate that makes transmitting and waiting indifferent.
pub fn aloha_symmetric_mixed_transmit_prob(
    transmit_gain: f64,
    collision_cost: f64,
    energy_cost: f64,
) -> f64 {
    (transmit_gain - energy_cost) / (transmit_gain + collision_cost)
}
