//! Exhaustive pure-equilibrium search over finite-game payoff tensors.

use crate::finite::FiniteGame;
use crate::par;

use super::verify::NashResult;

/// All joint actions stable to every single deviation, in cell-index order.
/// The stability comparisons are exact (no tolerance): a profile qualifies
/// iff no deviation strictly improves the deviator.
pub fn pure_ne_search(fg: &FiniteGame) -> Vec<NashResult> {
    let cells = fg.cells();
    let hits: Vec<Option<NashResult>> = par::map_range(cells, |cell| {
        let actions = fg.decode(cell);
        let mut probe = actions.clone();
        for player in 0..fg.player_count() {
            let here = fg.payoff(&actions, player);
            let original = probe[player];
            for a in 0..fg.action_counts()[player] {
                probe[player] = a;
                if fg.payoff(&probe, player) > here {
                    return None;
                }
            }
            probe[player] = original;
        }
        Some(NashResult::from_actions(fg, &actions, 0.0))
    });
    hits.into_iter().flatten().collect()
}
