//! Built-in games: classic matrix games and parameterized wireless
//! examples. Every constructor is deterministic in its parameters and the
//! resulting games are immutable and reentrant.

pub mod classic;
pub mod constrained;
pub mod cournot;
pub mod mac;
pub mod power_control;
pub mod two_band;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel description shared by the power-control and rate games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Channel power gains `|h_i|^2`, one per user, strictly positive.
    pub gains: Vec<f64>,
    /// Receiver noise variance, strictly positive.
    pub noise: f64,
    /// Per-user transmit power caps, strictly positive.
    pub max_powers: Vec<f64>,
    /// Successive-decoding order: `decoding_order[0]` is decoded first and
    /// sees every later user as interference; the last entry is decoded
    /// interference-free.
    pub decoding_order: Vec<usize>,
}

impl ChannelParams {
    /// Default decoding order: highest index first, player 0 last, matching
    /// the convention that user `i` is interfered by users `j < i`.
    pub fn new(gains: Vec<f64>, noise: f64, max_powers: Vec<f64>) -> Result<Self> {
        let k = gains.len();
        let order = (0..k).rev().collect();
        ChannelParams::with_decoding_order(gains, noise, max_powers, order)
    }

    pub fn with_decoding_order(
        gains: Vec<f64>,
        noise: f64,
        max_powers: Vec<f64>,
        decoding_order: Vec<usize>,
    ) -> Result<Self> {
        let k = gains.len();
        if k == 0 {
            return Err(Error::Parameter("channel needs at least one user".into()));
        }
        if max_powers.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "{} power caps for {k} users",
                max_powers.len()
            )));
        }
        if gains.iter().any(|&g| !g.is_finite() || g <= 0.0) {
            return Err(Error::Parameter("channel gains must be positive".into()));
        }
        if !noise.is_finite() || noise <= 0.0 {
            return Err(Error::Parameter("noise variance must be positive".into()));
        }
        if max_powers.iter().any(|&p| !p.is_finite() || p <= 0.0) {
            return Err(Error::Parameter("max powers must be positive".into()));
        }
        let mut seen = vec![false; k];
        if decoding_order.len() != k
            || decoding_order.iter().any(|&p| {
                if p >= k || seen[p] {
                    true
                } else {
                    seen[p] = true;
                    false
                }
            })
        {
            return Err(Error::Parameter(
                "decoding order must be a permutation of the users".into(),
            ));
        }
        Ok(ChannelParams {
            gains,
            noise,
            max_powers,
            decoding_order,
        })
    }

    pub fn user_count(&self) -> usize {
        self.gains.len()
    }

    /// Users whose signals interfere with `user` under successive decoding:
    /// everyone decoded after it.
    pub fn interferers(&self, user: usize) -> Vec<usize> {
        let pos = self
            .decoding_order
            .iter()
            .position(|&p| p == user)
            .expect("user in decoding order");
        self.decoding_order[pos + 1..].to_vec()
    }
}

/// Default two-user channel used by the bundled power-control examples:
/// unit noise, gains (1.0, 0.8), power caps 1000.
pub fn default_channel_2user() -> ChannelParams {
    ChannelParams::new(vec![1.0, 0.8], 1.0, vec![1000.0, 1000.0]).expect("valid default channel")
}

/// Sigmoidal efficiency function `f(x) = (1 - e^{-x})^M`.
///
/// `f(0) = 0`, `f` is nondecreasing with range in `[0, 1)`, and for
/// `M >= 2` the map `x -> f(x)/x` has a unique interior maximizer, the root
/// `beta*` of `f'(x) x = f(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfficiencyFunction {
    steepness: u32,
}

impl Default for EfficiencyFunction {
    fn default() -> Self {
        EfficiencyFunction { steepness: 100 }
    }
}

impl EfficiencyFunction {
    pub fn new(steepness: u32) -> Result<Self> {
        if steepness == 0 {
            return Err(Error::Parameter(
                "efficiency steepness must be at least 1".into(),
            ));
        }
        Ok(EfficiencyFunction { steepness })
    }

    pub fn steepness(&self) -> u32 {
        self.steepness
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (1.0 - (-x).exp()).powi(self.steepness as i32)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let m = self.steepness as f64;
        m * (1.0 - (-x).exp()).powf(m - 1.0) * (-x).exp()
    }

    /// Root of `f'(x) x = f(x)`: for this family, the positive solution of
    /// `M x e^{-x} + e^{-x} = 1`. Bisection on a bracketing scan; errors
    /// when no bracket exists (steepness too small, e.g. M = 1).
    pub fn beta_star(&self) -> Result<f64> {
        let m = self.steepness as f64;
        let h = |x: f64| m * x * (-x).exp() + (-x).exp() - 1.0;
        // scan for a sign change
        let mut lo = None;
        let mut x = 1e-6;
        while x < 1e3 {
            if h(x) > 0.0 {
                lo = Some(x);
                break;
            }
            x *= 10.0;
        }
        let mut lo = lo.ok_or_else(|| {
            Error::Parameter(format!(
                "no positive root of f'(x)x = f(x) for steepness {}; increase it",
                self.steepness
            ))
        })?;
        let mut hi = lo;
        while h(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::Parameter(
                    "failed to bracket the efficiency root".into(),
                ));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Every built-in finite game at its default parameters; used by the
/// efficiency sweeps and the equivalence tests.
pub fn builtin_finite_games() -> Vec<crate::finite::FiniteGame> {
    vec![
        classic::matching_pennies(),
        classic::prisoners_dilemma(),
        classic::battle_of_sexes(),
        classic::chicken(),
        classic::aloha_default(),
    ]
}
