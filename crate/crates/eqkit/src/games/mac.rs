//! Two-user multiple-access rate game with successive decoding.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile, StrategySpace, UtilityFn};

use super::ChannelParams;

/// Rate-maximization game on a two-user multiple-access channel: user `i`
/// picks `p_i` in `[0, P_i^max]` to maximize `log2(1 + SINR_i)` under a
/// fixed successive-decoding order (the first-decoded user sees the other
/// as interference, the last-decoded sees none).
///
/// Along the full-power segment the utilities telescope:
/// `u_1 + u_2 = log2(1 + (P_1 h_1 + P_2 h_2) / sigma^2)`, the sum rate.
#[derive(Clone)]
pub struct MacRateGame {
    game: Game,
    params: ChannelParams,
    sum_rate: f64,
}

pub fn make_mac_rate_game(params: ChannelParams) -> Result<MacRateGame> {
    if params.user_count() != 2 {
        return Err(Error::Parameter(
            "the rate game is defined for exactly 2 users".into(),
        ));
    }
    let sum_rate = (1.0
        + (params.max_powers[0] * params.gains[0] + params.max_powers[1] * params.gains[1])
            / params.noise)
        .log2();
    let spaces: Vec<StrategySpace> = params
        .max_powers
        .iter()
        .map(|&p| StrategySpace::Interval {
            lower: 0.0,
            upper: p,
        })
        .collect();
    let oracle_params = params.clone();
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        let powers = profile.as_reals().expect("real powers");
        (0..2)
            .map(|i| {
                let interference: f64 = oracle_params
                    .interferers(i)
                    .iter()
                    .map(|&j| powers[j] * oracle_params.gains[j])
                    .sum();
                (1.0 + powers[i] * oracle_params.gains[i] / (oracle_params.noise + interference))
                    .log2()
            })
            .collect()
    });
    let game = Game::new("mac_rate", spaces, utility)?;
    Ok(MacRateGame {
        game,
        params,
        sum_rate,
    })
}

impl MacRateGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// Sum rate `log2(1 + (P_1 h_1 + P_2 h_2)/sigma^2)` reached at full
    /// powers.
    pub fn sum_rate(&self) -> f64 {
        self.sum_rate
    }

    /// Full-power profile.
    pub fn full_power_profile(&self) -> StrategyProfile {
        StrategyProfile::reals(&self.params.max_powers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_channel() -> ChannelParams {
        ChannelParams::new(vec![1.0, 1.0], 1.0, vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn sum_rate_closed_form() {
        let g = make_mac_rate_game(unit_channel()).unwrap();
        assert!((g.sum_rate() - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn zero_power_profile_has_zero_welfare() {
        let g = make_mac_rate_game(unit_channel()).unwrap();
        let u = g
            .game()
            .evaluate(&StrategyProfile::reals(&[0.0, 0.0]))
            .unwrap();
        assert_eq!(u, vec![0.0, 0.0]);
    }

    #[test]
    fn telescoping_identity_at_full_power_for_both_orders() {
        for order in [vec![0, 1], vec![1, 0]] {
            let params =
                ChannelParams::with_decoding_order(vec![1.0, 1.0], 1.0, vec![1.0, 1.0], order)
                    .unwrap();
            let g = make_mac_rate_game(params).unwrap();
            let u = g.game().evaluate(&g.full_power_profile()).unwrap();
            assert!(
                ((u[0] + u[1]) - g.sum_rate()).abs() < 1e-12,
                "sum {} vs rate {}",
                u[0] + u[1],
                g.sum_rate()
            );
        }
    }

    #[test]
    fn last_decoded_user_is_interference_free() {
        // default order decodes player 1 first, player 0 last
        let g = make_mac_rate_game(unit_channel()).unwrap();
        let u = g
            .game()
            .evaluate(&StrategyProfile::reals(&[1.0, 1.0]))
            .unwrap();
        assert!((u[0] - 1.0).abs() < 1e-15, "clean user rate {}", u[0]);
    }
}
