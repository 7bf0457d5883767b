//! Two-band power-allocation game: each user splits its power budget
//! across two frequency bands and collects the resulting rates.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{Game, StrategyProfile, StrategySpace, UtilityFn};

/// Power-allocation game on a two-user, two-band interference channel.
///
/// Strategy `theta_i` in `[0, 1]` is the power fraction user `i` puts on
/// band 1 (the remainder goes to band 2) and
///
/// `u_i = sum_b log(1 + theta_i^b d_{i,b} / (sigma^2 + theta_j^b c_{j,b}))`
///
/// with direct gains `d` and cross (interference) gains `c`. In the
/// strong-interference regime (`c` well above `d`) both specialization
/// profiles are strict equilibria and best-response play selects one of
/// them by starting point.
#[derive(Clone)]
pub struct TwoBandGame {
    game: Game,
    direct: [[f64; 2]; 2],
    cross: [[f64; 2]; 2],
    noise: f64,
}

pub fn make_two_band_pa(
    direct: [[f64; 2]; 2],
    cross: [[f64; 2]; 2],
    sigma2: f64,
) -> Result<TwoBandGame> {
    let all = direct.iter().chain(cross.iter()).flatten();
    for &g in all {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::Parameter("band gains must be positive".into()));
        }
    }
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(Error::Parameter("noise variance must be positive".into()));
    }
    let spaces = vec![
        StrategySpace::Interval {
            lower: 0.0,
            upper: 1.0,
        },
        StrategySpace::Interval {
            lower: 0.0,
            upper: 1.0,
        },
    ];
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        let theta = profile.as_reals().expect("real fractions");
        (0..2)
            .map(|i| {
                let j = 1 - i;
                let own = [theta[i], 1.0 - theta[i]];
                let other = [theta[j], 1.0 - theta[j]];
                (0..2)
                    .map(|b| (1.0 + own[b] * direct[i][b] / (sigma2 + other[b] * cross[j][b])).ln())
                    .sum()
            })
            .collect()
    });
    let game = Game::new("two_band_pa", spaces, utility)?;
    Ok(TwoBandGame {
        game,
        direct,
        cross,
        noise: sigma2,
    })
}

impl TwoBandGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn direct_gains(&self) -> &[[f64; 2]; 2] {
        &self.direct
    }

    pub fn cross_gains(&self) -> &[[f64; 2]; 2] {
        &self.cross
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }
}

/// Frozen asymmetric preset exhibiting two isolated pure equilibria
/// (each user specializing to the band the other vacates) on a 101-point
/// grid, with two basins of attraction under best-response play.
pub fn two_band_asymmetric_preset() -> TwoBandGame {
    make_two_band_pa([[1.0, 0.9], [0.85, 1.05]], [[2.2, 2.0], [1.9, 2.3]], 0.1)
        .expect("valid preset")
}

/// Frozen fully symmetric preset (equal direct gains, equal cross gains):
/// the two specialization equilibria plus the balanced split, with a basin
/// map symmetric under reflecting both starts through the center.
pub fn two_band_symmetric_preset() -> TwoBandGame {
    make_two_band_pa([[1.0, 1.0], [1.0, 1.0]], [[2.0, 2.0], [2.0, 2.0]], 0.1).expect("valid preset")
}
