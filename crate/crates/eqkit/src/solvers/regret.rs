//! Regret-matching self-play and correlated-equilibrium verification.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{FiniteGame, JointDistribution};

/// Result of a regret-matching run: the empirical joint distribution of
/// play plus its correlated-equilibrium violation and the final average
/// regrets.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelatedPlay {
    pub distribution: JointDistribution,
    pub iterations: usize,
    /// PRNG seed used, recorded for replay.
    pub seed: u64,
    /// `ce_verify` of the empirical distribution.
    pub max_violation: f64,
    /// Per player: max over actions of the (unclamped) average regret.
    pub average_regret: Vec<f64>,
}

/// Regret-matching self-play: each round every player draws an action with
/// probability proportional to the positive part of its cumulative regrets,
/// or uniformly when no regret is positive. Returns the empirical joint
/// distribution of play; `ce_verify` runs on it automatically.
///
/// The self-play state is inherently sequential, so one run occupies one
/// thread; runs with different seeds are independent.
pub fn regret_matching_ce(fg: &FiniteGame, iterations: usize, seed: u64) -> Result<CorrelatedPlay> {
    if iterations == 0 {
        return Err(Error::Parameter(
            "regret matching needs at least one iteration".into(),
        ));
    }
    let players = fg.player_count();
    let counts = fg.action_counts().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut regrets: Vec<Vec<f64>> = counts.iter().map(|&n| vec![0.0; n]).collect();
    let mut played = vec![0usize; fg.cells()];
    let mut actions = vec![0usize; players];
    let mut probe = vec![0usize; players];

    for _ in 0..iterations {
        for i in 0..players {
            actions[i] = draw_proportional(&regrets[i], &mut rng);
        }
        played[fg.encode(&actions)] += 1;
        probe.copy_from_slice(&actions);
        for i in 0..players {
            let realized = fg.payoff(&actions, i);
            let original = probe[i];
            for a in 0..counts[i] {
                probe[i] = a;
                regrets[i][a] += fg.payoff(&probe, i) - realized;
            }
            probe[i] = original;
        }
    }

    let t = iterations as f64;
    let probabilities: Vec<f64> = played.iter().map(|&c| c as f64 / t).collect();
    let distribution = JointDistribution::new(counts, probabilities)?;
    let max_violation = ce_verify(fg, &distribution)?;
    let average_regret = regrets
        .iter()
        .map(|r| r.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / t)
        .collect();
    Ok(CorrelatedPlay {
        distribution,
        iterations,
        seed,
        max_violation,
        average_regret,
    })
}

fn draw_proportional(regrets: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = regrets.iter().map(|&r| r.max(0.0)).sum();
    if total <= 0.0 {
        return rng.gen_range(0..regrets.len());
    }
    let mut ticket = rng.gen_range(0.0..total);
    for (a, &r) in regrets.iter().enumerate() {
        let w = r.max(0.0);
        if ticket < w {
            return a;
        }
        ticket -= w;
    }
    regrets.len() - 1
}

/// Exact maximum correlated-equilibrium violation of a joint distribution:
/// over every player `i` and action pair `(a, a')`, the expected gain of
/// switching recommendations from `a` to `a'`,
/// `sum_{s_-i} dist(a, s_-i) (u_i(a', s_-i) - u_i(a, s_-i))`.
/// Nonpositive (within tolerance) everywhere means the distribution is a
/// correlated equilibrium.
pub fn ce_verify(fg: &FiniteGame, dist: &JointDistribution) -> Result<f64> {
    if dist.action_counts() != fg.action_counts() {
        return Err(Error::DimensionMismatch(
            "distribution dimensions do not match the game".into(),
        ));
    }
    let players = fg.player_count();
    let counts = fg.action_counts();
    let mut worst = f64::NEG_INFINITY;
    let mut probe = vec![0usize; players];
    for i in 0..players {
        let n = counts[i];
        // gains[a][a'] accumulated in one pass over the tensor
        let mut gains = vec![vec![0.0f64; n]; n];
        for cell in 0..fg.cells() {
            let p = dist.probabilities()[cell];
            if p == 0.0 {
                continue;
            }
            let actions = fg.decode(cell);
            let a = actions[i];
            let here = fg.payoff_at_cell(cell, i);
            probe.copy_from_slice(&actions);
            for alt in 0..n {
                if alt == a {
                    continue;
                }
                probe[i] = alt;
                gains[a][alt] += p * (fg.payoff(&probe, i) - here);
            }
        }
        for row in &gains {
            for &g in row {
                if g > worst {
                    worst = g;
                }
            }
        }
    }
    Ok(worst)
}
