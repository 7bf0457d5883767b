//! Finite games as explicit payoff tensors, mixed and correlated lotteries,
//! and discretization of continuous games onto uniform grids.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{linspace, Game, StrategyProfile, StrategySpace};
use crate::par;

/// Tolerance for probability normalization checks.
pub const PROB_TOL: f64 = 1e-9;

/// A finite game stored as a dense payoff tensor: one payoff vector of
/// length `K` per joint action profile, laid out cell-major in row-major
/// (odometer) cell order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteGame {
    name: String,
    action_counts: Vec<usize>,
    payoffs: Vec<f64>,
}

impl FiniteGame {
    /// Build from a fill function mapping each joint action to K payoffs.
    pub fn from_fn<F>(name: impl Into<String>, action_counts: Vec<usize>, fill: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Vec<f64>,
    {
        if action_counts.is_empty() {
            return Err(Error::InvalidGame(
                "a finite game needs at least one player".into(),
            ));
        }
        if action_counts.contains(&0) {
            return Err(Error::InvalidGame(
                "every player needs at least one action".into(),
            ));
        }
        let players = action_counts.len();
        let cells: usize = action_counts.iter().product();
        let mut payoffs = vec![0.0; cells * players];
        let mut actions = vec![0usize; players];
        for cell in 0..cells {
            decode_into(cell, &action_counts, &mut actions);
            let u = fill(&actions);
            if u.len() != players {
                return Err(Error::InvalidGame(format!(
                    "fill returned {} payoffs for {} players",
                    u.len(),
                    players
                )));
            }
            if u.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteUtility {
                    profile: format!("{actions:?}"),
                });
            }
            payoffs[cell * players..(cell + 1) * players].copy_from_slice(&u);
        }
        Ok(FiniteGame {
            name: name.into(),
            action_counts,
            payoffs,
        })
    }

    /// Two-player constructor from per-player payoff tables indexed
    /// `u[row action][column action]`.
    pub fn from_tables_2p(
        name: impl Into<String>,
        u1: &[Vec<f64>],
        u2: &[Vec<f64>],
    ) -> Result<Self> {
        let n1 = u1.len();
        if n1 == 0 || u2.len() != n1 {
            return Err(Error::DimensionMismatch(
                "payoff tables disagree on row count".into(),
            ));
        }
        let n2 = u1[0].len();
        if n2 == 0 || u1.iter().any(|r| r.len() != n2) || u2.iter().any(|r| r.len() != n2) {
            return Err(Error::DimensionMismatch(
                "payoff tables must be rectangular".into(),
            ));
        }
        let u1 = u1.to_vec();
        let u2 = u2.to_vec();
        FiniteGame::from_fn(name, vec![n1, n2], move |a| {
            vec![u1[a[0]][a[1]], u2[a[0]][a[1]]]
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn player_count(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn cells(&self) -> usize {
        self.action_counts.iter().product()
    }

    pub fn encode(&self, actions: &[usize]) -> usize {
        debug_assert_eq!(actions.len(), self.action_counts.len());
        let mut idx = 0usize;
        for (a, n) in actions.iter().zip(&self.action_counts) {
            debug_assert!(a < n);
            idx = idx * n + a;
        }
        idx
    }

    pub fn decode(&self, cell: usize) -> Vec<usize> {
        let mut actions = vec![0usize; self.action_counts.len()];
        decode_into(cell, &self.action_counts, &mut actions);
        actions
    }

    /// Payoff vector (all players) at a joint action.
    pub fn payoff_vec(&self, actions: &[usize]) -> &[f64] {
        let k = self.player_count();
        let cell = self.encode(actions);
        &self.payoffs[cell * k..(cell + 1) * k]
    }

    pub fn payoff(&self, actions: &[usize], player: usize) -> f64 {
        self.payoff_vec(actions)[player]
    }

    pub(crate) fn payoff_at_cell(&self, cell: usize, player: usize) -> f64 {
        self.payoffs[cell * self.player_count() + player]
    }

    /// Iterate all joint actions in odometer (cell index) order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.cells()).map(|c| self.decode(c))
    }

    /// Wrap the tensor as a [`Game`] over finite spaces; profiles use
    /// action-index strategies.
    pub fn as_game(&self) -> Game {
        let fg = self.clone();
        let spaces = self
            .action_counts
            .iter()
            .map(|&n| StrategySpace::Finite { actions: n })
            .collect();
        Game::new(
            self.name.clone(),
            spaces,
            Arc::new(move |p: &StrategyProfile| {
                let actions = p.as_actions().expect("finite game profile");
                fg.payoff_vec(&actions).to_vec()
            }),
        )
        .expect("valid wrapped game")
    }
}

fn decode_into(cell: usize, counts: &[usize], out: &mut [usize]) {
    let mut rest = cell;
    for i in (0..counts.len()).rev() {
        out[i] = rest % counts[i];
        rest /= counts[i];
    }
}

/// Independent per-player lotteries over actions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedProfile {
    distributions: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(distributions: Vec<Vec<f64>>) -> Result<Self> {
        for (i, d) in distributions.iter().enumerate() {
            if d.is_empty() {
                return Err(Error::InvalidDistribution(format!(
                    "player {i}: empty distribution"
                )));
            }
            if d.iter().any(|&p| !p.is_finite() || p < -PROB_TOL) {
                return Err(Error::InvalidDistribution(format!(
                    "player {i}: negative or non-finite probability"
                )));
            }
            let sum: f64 = d.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "player {i}: probabilities sum to {sum}, expected 1"
                )));
            }
        }
        Ok(MixedProfile { distributions })
    }

    /// Degenerate lottery putting all mass on one joint action.
    pub fn point_mass(action_counts: &[usize], actions: &[usize]) -> Result<Self> {
        if actions.len() != action_counts.len() {
            return Err(Error::DimensionMismatch(
                "actions/counts length mismatch".into(),
            ));
        }
        let dists = action_counts
            .iter()
            .zip(actions)
            .map(|(&n, &a)| {
                let mut d = vec![0.0; n];
                d[a] = 1.0;
                d
            })
            .collect();
        Ok(MixedProfile {
            distributions: dists,
        })
    }

    pub fn uniform(action_counts: &[usize]) -> Self {
        MixedProfile {
            distributions: action_counts
                .iter()
                .map(|&n| vec![1.0 / n as f64; n])
                .collect(),
        }
    }

    pub fn player_count(&self) -> usize {
        self.distributions.len()
    }

    pub fn distribution(&self, player: usize) -> &[f64] {
        &self.distributions[player]
    }

    pub fn distributions(&self) -> &[Vec<f64>] {
        &self.distributions
    }
}

/// A joint lottery over action profiles; in general not a product of
/// per-player marginals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    action_counts: Vec<usize>,
    probabilities: Vec<f64>,
}

impl JointDistribution {
    pub fn new(action_counts: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        let cells: usize = action_counts.iter().product();
        if probabilities.len() != cells {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for {} joint actions",
                probabilities.len(),
                cells
            )));
        }
        if probabilities
            .iter()
            .any(|&p| !p.is_finite() || p < -PROB_TOL)
        {
            return Err(Error::InvalidDistribution(
                "negative or non-finite mass".into(),
            ));
        }
        let mass: f64 = probabilities.iter().sum();
        if (mass - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "total mass {mass}, expected 1"
            )));
        }
        Ok(JointDistribution {
            action_counts,
            probabilities,
        })
    }

    /// Product distribution of independent per-player lotteries.
    pub fn product_of(action_counts: &[usize], mix: &MixedProfile) -> Result<Self> {
        let cells: usize = action_counts.iter().product();
        let mut probs = vec![0.0; cells];
        let mut actions = vec![0usize; action_counts.len()];
        for (cell, slot) in probs.iter_mut().enumerate() {
            decode_into(cell, action_counts, &mut actions);
            *slot = actions
                .iter()
                .enumerate()
                .map(|(i, &a)| mix.distribution(i)[a])
                .product();
        }
        JointDistribution::new(action_counts.to_vec(), probs)
    }

    pub fn point_mass(action_counts: Vec<usize>, actions: &[usize]) -> Result<Self> {
        let cells: usize = action_counts.iter().product();
        let mut probs = vec![0.0; cells];
        let mut idx = 0usize;
        for (a, n) in actions.iter().zip(&action_counts) {
            idx = idx * n + a;
        }
        probs[idx] = 1.0;
        let _ = cells;
        JointDistribution::new(action_counts, probs)
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn prob(&self, actions: &[usize]) -> f64 {
        let mut idx = 0usize;
        for (a, n) in actions.iter().zip(&self.action_counts) {
            idx = idx * n + a;
        }
        self.probabilities[idx]
    }
}

/// Expected utility of every player under independent mixed strategies:
/// the exact weighted sum over all joint actions.
pub fn expected_utility(fg: &FiniteGame, mix: &MixedProfile) -> Result<Vec<f64>> {
    if mix.player_count() != fg.player_count() {
        return Err(Error::DimensionMismatch(format!(
            "mixed profile has {} players, game has {}",
            mix.player_count(),
            fg.player_count()
        )));
    }
    for (i, d) in mix.distributions().iter().enumerate() {
        if d.len() != fg.action_counts()[i] {
            return Err(Error::DimensionMismatch(format!(
                "player {i}: distribution over {} actions, game has {}",
                d.len(),
                fg.action_counts()[i]
            )));
        }
    }
    let players = fg.player_count();
    let mut totals = vec![0.0; players];
    let mut actions = vec![0usize; players];
    for cell in 0..fg.cells() {
        decode_into(cell, fg.action_counts(), &mut actions);
        let p: f64 = actions
            .iter()
            .enumerate()
            .map(|(i, &a)| mix.distribution(i)[a])
            .product();
        if p == 0.0 {
            continue;
        }
        for (i, t) in totals.iter_mut().enumerate() {
            *t += p * fg.payoff_at_cell(cell, i);
        }
    }
    Ok(totals)
}

/// A finite game obtained from a continuous one, with the grid coordinates
/// mapping each action index back to its real strategy value.
#[derive(Debug, Clone, Serialize)]
pub struct DiscretizedGame {
    pub finite: FiniteGame,
    pub grids: Vec<Vec<f64>>,
}

impl DiscretizedGame {
    /// Real-valued profile corresponding to a joint action.
    pub fn profile_at(&self, actions: &[usize]) -> StrategyProfile {
        let reals: Vec<f64> = actions
            .iter()
            .enumerate()
            .map(|(i, &a)| self.grids[i][a])
            .collect();
        StrategyProfile::reals(&reals)
    }
}

/// Discretize a continuous game onto an endpoint-inclusive uniform grid with
/// `points_per_player` points per axis, filling the payoff tensor through the
/// game's own utility oracle.
pub fn discretize(game: &Game, points_per_player: usize) -> Result<DiscretizedGame> {
    if points_per_player < 2 {
        return Err(Error::Parameter(
            "discretize needs at least 2 points per player".into(),
        ));
    }
    let mut grids = Vec::with_capacity(game.player_count());
    for (i, space) in game.spaces().iter().enumerate() {
        let (lo, hi) = space.bounds().ok_or_else(|| {
            Error::Unsupported(format!(
                "discretize requires interval spaces; player {i} is finite"
            ))
        })?;
        grids.push(linspace(lo, hi, points_per_player));
    }
    let counts: Vec<usize> = vec![points_per_player; game.player_count()];
    let players = game.player_count();
    let cells: usize = counts.iter().product();

    let rows: Vec<Result<Vec<f64>>> = par::map_range(cells, |cell| {
        let mut actions = vec![0usize; players];
        decode_into(cell, &counts, &mut actions);
        let reals: Vec<f64> = actions
            .iter()
            .enumerate()
            .map(|(i, &a)| grids[i][a])
            .collect();
        game.evaluate(&StrategyProfile::reals(&reals))
    });

    let mut payoffs = vec![0.0; cells * players];
    for (cell, row) in rows.into_iter().enumerate() {
        let u = row?;
        payoffs[cell * players..(cell + 1) * players].copy_from_slice(&u);
    }
    let finite = FiniteGame {
        name: format!("{} (grid {points_per_player})", game.name()),
        action_counts: counts,
        payoffs,
    };
    Ok(DiscretizedGame { finite, grids })
}
