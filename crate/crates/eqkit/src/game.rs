//! Core game representation: strategy spaces, profiles, and the utility oracle.
//!
//! A [`Game`] couples per-player strategy spaces with a deterministic utility
//! oracle mapping a joint [`StrategyProfile`] to one payoff per player.
//! Continuous players live on closed intervals, finite players on action
//! index sets; a single game may mix both. Games are immutable after
//! construction and all operations here are pure, so they can be evaluated
//! concurrently as long as the oracle itself is reentrant.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One player's strategy set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StrategySpace {
    /// Closed real interval `[lower, upper]` with `lower < upper`, both finite.
    Interval { lower: f64, upper: f64 },
    /// Finite action set `{0, .., actions - 1}` with `actions >= 1`.
    Finite { actions: usize },
}

impl StrategySpace {
    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidSpace(format!(
                "interval bounds must be finite, got [{lower}, {upper}]"
            )));
        }
        if lower >= upper {
            return Err(Error::InvalidSpace(format!(
                "interval requires lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(StrategySpace::Interval { lower, upper })
    }

    pub fn finite(actions: usize) -> Result<Self> {
        if actions == 0 {
            return Err(Error::InvalidSpace(
                "finite space needs at least one action".into(),
            ));
        }
        Ok(StrategySpace::Finite { actions })
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, StrategySpace::Interval { .. })
    }

    /// Interval bounds, if this is an interval space.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            StrategySpace::Interval { lower, upper } => Some((*lower, *upper)),
            StrategySpace::Finite { .. } => None,
        }
    }

    pub fn width(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| hi - lo)
    }

    pub fn contains(&self, s: &Strategy) -> bool {
        match (self, s) {
            (StrategySpace::Interval { lower, upper }, Strategy::Real(x)) => {
                x.is_finite() && *lower <= *x && *x <= *upper
            }
            (StrategySpace::Finite { actions }, Strategy::Action(a)) => a < actions,
            _ => false,
        }
    }
}

/// A single player's strategy: a real value or an action index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    Real(f64),
    Action(usize),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Real(x) => write!(f, "{x}"),
            Strategy::Action(a) => write!(f, "#{a}"),
        }
    }
}

/// Joint strategy profile, one entry per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile(Vec<Strategy>);

impl StrategyProfile {
    pub fn new(values: Vec<Strategy>) -> Self {
        StrategyProfile(values)
    }

    pub fn reals(values: &[f64]) -> Self {
        StrategyProfile(values.iter().map(|&x| Strategy::Real(x)).collect())
    }

    pub fn actions(values: &[usize]) -> Self {
        StrategyProfile(values.iter().map(|&a| Strategy::Action(a)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, player: usize) -> Strategy {
        self.0[player]
    }

    pub fn set(&mut self, player: usize, value: Strategy) {
        self.0[player] = value;
    }

    pub fn values(&self) -> &[Strategy] {
        &self.0
    }

    /// Real strategy of `player`, or a domain error for finite players.
    pub fn real(&self, player: usize) -> Result<f64> {
        match self.0[player] {
            Strategy::Real(x) => Ok(x),
            Strategy::Action(_) => Err(Error::Domain {
                player,
                detail: "expected a real-valued strategy".into(),
            }),
        }
    }

    pub fn action(&self, player: usize) -> Result<usize> {
        match self.0[player] {
            Strategy::Action(a) => Ok(a),
            Strategy::Real(_) => Err(Error::Domain {
                player,
                detail: "expected an action index".into(),
            }),
        }
    }

    /// Copy with `player`'s component replaced by a real value.
    pub fn with_real(&self, player: usize, value: f64) -> Self {
        let mut p = self.clone();
        p.0[player] = Strategy::Real(value);
        p
    }

    pub fn with_action(&self, player: usize, action: usize) -> Self {
        let mut p = self.clone();
        p.0[player] = Strategy::Action(action);
        p
    }

    pub fn as_reals(&self) -> Result<Vec<f64>> {
        (0..self.len()).map(|i| self.real(i)).collect()
    }

    pub fn as_actions(&self) -> Result<Vec<usize>> {
        (0..self.len()).map(|i| self.action(i)).collect()
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Utility oracle: joint profile in, one payoff per player out.
pub type UtilityFn = Arc<dyn Fn(&StrategyProfile) -> Vec<f64> + Send + Sync>;

/// Closed-form best response: `(player, current profile) -> strategy value`.
pub type BestResponseFn = Arc<dyn Fn(usize, &StrategyProfile) -> f64 + Send + Sync>;

/// A strategic-form game: players, strategy spaces, and a utility oracle.
///
/// The oracle must be deterministic and total on the product space; the
/// toolkit rejects non-finite payoffs instead of patching them, so games
/// with singular utilities (for example a `f(x)/x` form at `x = 0`) must be
/// totalized by the game author.
#[derive(Clone)]
pub struct Game {
    name: String,
    spaces: Vec<StrategySpace>,
    utility: UtilityFn,
    closed_form_br: Option<BestResponseFn>,
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("name", &self.name)
            .field("players", &self.spaces.len())
            .field("spaces", &self.spaces)
            .field("closed_form_br", &self.closed_form_br.is_some())
            .finish()
    }
}

impl Game {
    pub fn new(
        name: impl Into<String>,
        spaces: Vec<StrategySpace>,
        utility: UtilityFn,
    ) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::InvalidGame(
                "a game needs at least one player".into(),
            ));
        }
        Ok(Game {
            name: name.into(),
            spaces,
            utility,
            closed_form_br: None,
        })
    }

    /// Attach a closed-form best-response oracle; best-response dynamics use
    /// it instead of the generic grid search when present.
    pub fn with_closed_form_br(mut self, br: BestResponseFn) -> Self {
        self.closed_form_br = Some(br);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn player_count(&self) -> usize {
        self.spaces.len()
    }

    pub fn space(&self, player: usize) -> &StrategySpace {
        &self.spaces[player]
    }

    pub fn spaces(&self) -> &[StrategySpace] {
        &self.spaces
    }

    pub fn has_closed_form_br(&self) -> bool {
        self.closed_form_br.is_some()
    }

    pub fn closed_form_br(&self) -> Option<&BestResponseFn> {
        self.closed_form_br.as_ref()
    }

    /// Check that every component of `profile` lies in its player's space.
    pub fn validate_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.len() != self.spaces.len() {
            return Err(Error::DimensionMismatch(format!(
                "profile has {} components, game has {} players",
                profile.len(),
                self.spaces.len()
            )));
        }
        for (i, space) in self.spaces.iter().enumerate() {
            let s = profile.get(i);
            if !space.contains(&s) {
                return Err(Error::Domain {
                    player: i,
                    detail: format!("strategy {s} outside space {space:?}"),
                });
            }
        }
        Ok(())
    }

    /// Evaluate the utility oracle at a validated profile.
    ///
    /// Errors if the profile is outside the product space or the oracle
    /// returns the wrong arity or a non-finite payoff.
    pub fn evaluate(&self, profile: &StrategyProfile) -> Result<Vec<f64>> {
        self.validate_profile(profile)?;
        let u = (self.utility)(profile);
        if u.len() != self.spaces.len() {
            return Err(Error::InvalidGame(format!(
                "utility oracle returned {} payoffs for {} players",
                u.len(),
                self.spaces.len()
            )));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteUtility {
                profile: profile.to_string(),
            });
        }
        Ok(u)
    }

    /// Single player's payoff at a profile.
    pub fn utility_of(&self, player: usize, profile: &StrategyProfile) -> Result<f64> {
        Ok(self.evaluate(profile)?[player])
    }
}

/// Evaluate a game's utility oracle at a profile.
pub fn evaluate_utility(game: &Game, profile: &StrategyProfile) -> Result<Vec<f64>> {
    game.evaluate(profile)
}

/// Endpoint-inclusive uniform grid with `n >= 2` points.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
    xs[0] = lo;
    xs[n - 1] = hi;
    xs
}

const GOLDEN_RATIO_CONJ: f64 = 0.618_033_988_749_894_9;
const GOLDEN_ITERS: usize = 48;

/// Generic best response of `player` against a fixed opponent profile:
/// grid argmax over the player's interval refined by one golden-section pass
/// on the bracketing cell. Ties break to the smallest strategy value, so the
/// result is deterministic; a constant utility returns the interval's lower
/// bound.
pub fn best_response_grid(
    game: &Game,
    player: usize,
    others: &StrategyProfile,
    points: usize,
) -> Result<f64> {
    let (lo, hi) = game.space(player).bounds().ok_or_else(|| {
        Error::Unsupported(format!(
            "best_response_grid requires an interval space for player {player}"
        ))
    })?;
    if points < 2 {
        return Err(Error::Parameter(
            "best_response_grid needs at least 2 grid points".into(),
        ));
    }

    let mut probe = others.clone();
    let mut eval = |x: f64| -> Result<f64> {
        probe.set(player, Strategy::Real(x));
        game.utility_of(player, &probe)
    };

    let xs = linspace(lo, hi, points);
    let mut best_x = xs[0];
    let mut best_u = eval(xs[0])?;
    let mut best_k = 0usize;
    for (k, &x) in xs.iter().enumerate().skip(1) {
        let u = eval(x)?;
        if u > best_u {
            best_u = u;
            best_x = x;
            best_k = k;
        }
    }

    // One golden-section pass on the cell bracketing the grid argmax.
    let mut a = xs[best_k.saturating_sub(1)];
    let mut b = xs[(best_k + 1).min(points - 1)];
    for _ in 0..GOLDEN_ITERS {
        let c = b - GOLDEN_RATIO_CONJ * (b - a);
        let d = a + GOLDEN_RATIO_CONJ * (b - a);
        if eval(c)? > eval(d)? {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    let refined = eval(mid)?;
    if refined > best_u {
        best_x = mid;
    }
    Ok(best_x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_game(center: f64) -> Game {
        Game::new(
            "quadratic",
            vec![StrategySpace::interval(0.0, 1.0).unwrap()],
            Arc::new(move |p: &StrategyProfile| {
                let x = p.real(0).unwrap();
                vec![-(x - center) * (x - center)]
            }),
        )
        .unwrap()
    }

    #[test]
    fn interval_rejects_bad_bounds() {
        assert!(StrategySpace::interval(1.0, 1.0).is_err());
        assert!(StrategySpace::interval(2.0, 1.0).is_err());
        assert!(StrategySpace::interval(0.0, f64::INFINITY).is_err());
        assert!(StrategySpace::finite(0).is_err());
    }

    #[test]
    fn profile_validation_names_the_player() {
        let g = quadratic_game(0.5);
        let bad = StrategyProfile::reals(&[2.0]);
        match g.evaluate(&bad) {
            Err(Error::Domain { player, .. }) => assert_eq!(player, 0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn oracle_arity_and_finiteness_checked() {
        let g = Game::new(
            "nan",
            vec![StrategySpace::interval(0.0, 1.0).unwrap()],
            Arc::new(|_p: &StrategyProfile| vec![f64::NAN]),
        )
        .unwrap();
        assert!(matches!(
            g.evaluate(&StrategyProfile::reals(&[0.5])),
            Err(Error::NonFiniteUtility { .. })
        ));
    }

    #[test]
    fn br_grid_finds_quadratic_peak() {
        let g = quadratic_game(0.3);
        let x = best_response_grid(&g, 0, &StrategyProfile::reals(&[0.0]), 33).unwrap();
        assert!((x - 0.3).abs() < 1e-6, "got {x}");
    }

    #[test]
    fn br_grid_constant_utility_returns_lower_bound() {
        let g = Game::new(
            "flat",
            vec![StrategySpace::interval(-2.0, 5.0).unwrap()],
            Arc::new(|_p: &StrategyProfile| vec![1.0]),
        )
        .unwrap();
        let x = best_response_grid(&g, 0, &StrategyProfile::reals(&[0.0]), 17).unwrap();
        assert_eq!(x, -2.0);
    }

    #[test]
    fn br_grid_is_deterministic() {
        let g = quadratic_game(0.77);
        let p = StrategyProfile::reals(&[0.0]);
        let a = best_response_grid(&g, 0, &p, 64).unwrap();
        let b = best_response_grid(&g, 0, &p, 64).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linspace_includes_endpoints() {
        let xs = linspace(0.0, 1.0, 3);
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);
    }
}
