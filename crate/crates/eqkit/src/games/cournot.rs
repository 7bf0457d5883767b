//! Cournot duopoly: affine demand, constant marginal cost, affine best
//! responses intersecting in a single point.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{BestResponseFn, Game, StrategyProfile, StrategySpace, UtilityFn};

/// Quantity competition with inverse demand `a - b (q_1 + q_2)` and unit
/// cost `c`: `u_i = (a - b (q_1 + q_2) - c) q_i` on `[0, a/b]`.
///
/// The best responses `q_i = (a - c - b q_j) / (2b)` are affine with slope
/// `-1/2`, so sequential play contracts to the unique equilibrium
/// `q_i = (a - c) / (3b)`.
#[derive(Clone)]
pub struct CournotGame {
    game: Game,
    a: f64,
    b: f64,
    c: f64,
}

pub fn make_cournot(a: f64, b: f64, c: f64) -> Result<CournotGame> {
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::Parameter("demand slope b must be positive".into()));
    }
    if !c.is_finite() || c < 0.0 || !a.is_finite() || a <= c {
        return Err(Error::Parameter(
            "need a > c >= 0 for an active market".into(),
        ));
    }
    let cap = a / b;
    let spaces = vec![
        StrategySpace::Interval {
            lower: 0.0,
            upper: cap,
        },
        StrategySpace::Interval {
            lower: 0.0,
            upper: cap,
        },
    ];
    let utility: UtilityFn = Arc::new(move |profile: &StrategyProfile| {
        let q = profile.as_reals().expect("real quantities");
        let margin = a - b * (q[0] + q[1]) - c;
        vec![margin * q[0], margin * q[1]]
    });
    let br: BestResponseFn = Arc::new(move |player: usize, profile: &StrategyProfile| {
        let other = profile.real(1 - player).expect("real quantity");
        ((a - c - b * other) / (2.0 * b)).clamp(0.0, cap)
    });
    let game = Game::new("cournot", spaces, utility)?.with_closed_form_br(br);
    Ok(CournotGame { game, a, b, c })
}

impl CournotGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn parameters(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    /// The unique equilibrium `q_i = (a - c) / (3b)`.
    pub fn analytic_ne(&self) -> Vec<f64> {
        let q = (self.a - self.c) / (3.0 * self.b);
        vec![q, q]
    }
}
