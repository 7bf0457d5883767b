//! Efficiency and selection metrics: social welfare, Pareto optimality,
//! weighted-sum Pareto points, price of anarchy/stability, the virtual-MIMO
//! energy metric, and normalized-equilibrium verification for constrained
//! concave games.

use std::sync::Arc;

use serde::Serialize;

use crate::analysis::fd;
use crate::analysis::FdConfig;
use crate::error::{Error, Result};
use crate::finite::FiniteGame;
use crate::game::{Game, StrategyProfile};
use crate::games::power_control::EnergyEfficientGame;
use crate::par;
use crate::solvers::{ne_verify, NashResult};

/// Sum of all players' utilities at a profile.
pub fn social_welfare(game: &Game, profile: &StrategyProfile) -> Result<f64> {
    Ok(game.evaluate(profile)?.iter().sum())
}

/// Welfare of a finite-game cell.
pub fn social_welfare_finite(fg: &FiniteGame, actions: &[usize]) -> f64 {
    fg.payoff_vec(actions).iter().sum()
}

/// Equivalent virtual-MIMO efficiency of an energy-efficiency power
/// profile: `sum_i f(SINR_i) / sum_i p_i`. Undefined at the all-zero
/// power profile.
pub fn virtual_mimo_metric(game: &EnergyEfficientGame, profile: &StrategyProfile) -> Result<f64> {
    game.game().validate_profile(profile)?;
    let powers = profile.as_reals()?;
    let total_power: f64 = powers.iter().sum();
    if total_power <= 0.0 {
        return Err(Error::Parameter(
            "virtual MIMO metric undefined at the all-zero power profile".into(),
        ));
    }
    let total_eff: f64 = game.efficiencies(&powers).iter().sum();
    Ok(total_eff / total_power)
}

/// Pareto verdict for one cell, with a dominating witness when suboptimal.
#[derive(Debug, Clone, Serialize)]
pub struct ParetoCheck {
    pub optimal: bool,
    /// A joint action that weakly improves everyone and strictly improves
    /// someone, when one exists.
    pub dominating: Option<Vec<usize>>,
}

/// Exhaustive Pareto check: a cell is optimal iff no other cell weakly
/// improves all players and strictly improves at least one.
pub fn is_pareto_optimal(fg: &FiniteGame, actions: &[usize]) -> Result<ParetoCheck> {
    if actions.len() != fg.player_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} actions for {} players",
            actions.len(),
            fg.player_count()
        )));
    }
    let here = fg.payoff_vec(actions).to_vec();
    for cell in 0..fg.cells() {
        let other = fg.decode(cell);
        let payoffs = fg.payoff_vec(&other);
        let weakly_better = payoffs.iter().zip(&here).all(|(o, h)| o >= h);
        let strictly_somewhere = payoffs.iter().zip(&here).any(|(o, h)| o > h);
        if weakly_better && strictly_somewhere {
            return Ok(ParetoCheck {
                optimal: false,
                dominating: Some(other),
            });
        }
    }
    Ok(ParetoCheck {
        optimal: true,
        dominating: None,
    })
}

/// Argmax of the positively weighted utility sum over the payoff tensor
/// (lowest cell index on ties). The result is Pareto-optimal for any
/// strictly positive weights.
pub fn weighted_sum_po(fg: &FiniteGame, weights: &[f64]) -> Result<Vec<usize>> {
    if weights.len() != fg.player_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} players",
            weights.len(),
            fg.player_count()
        )));
    }
    if weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
        return Err(Error::Parameter("weights must be strictly positive".into()));
    }
    let scores: Vec<f64> = par::map_range(fg.cells(), |cell| {
        (0..fg.player_count())
            .map(|i| weights[i] * fg.payoff_at_cell(cell, i))
            .sum()
    });
    let mut best = 0usize;
    for (cell, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = cell;
        }
    }
    Ok(fg.decode(best))
}

/// Either the anarchy/stability ratios or, when some equilibrium welfare is
/// nonpositive (making the ratio meaningless), the additive welfare gaps.
#[derive(Debug, Clone, Serialize)]
pub enum PoaOutcome {
    Ratios { poa: f64, pos: f64 },
    WelfareGap { worst_gap: f64, best_gap: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct PoaReport {
    pub max_welfare: f64,
    pub max_welfare_profile: Vec<usize>,
    pub worst_ne_welfare: f64,
    pub best_ne_welfare: f64,
    pub outcome: PoaOutcome,
}

/// Price of anarchy and stability over a finite game and its equilibrium
/// set: max welfare divided by the worst / best equilibrium welfare. With a
/// unique equilibrium the two coincide exactly.
pub fn poa_pos(fg: &FiniteGame, ne_set: &[NashResult]) -> Result<PoaReport> {
    if ne_set.is_empty() {
        return Err(Error::Parameter(
            "price of anarchy needs a nonempty equilibrium set".into(),
        ));
    }
    let welfares: Vec<f64> = par::map_range(fg.cells(), |cell| {
        (0..fg.player_count())
            .map(|i| fg.payoff_at_cell(cell, i))
            .sum()
    });
    let mut best_cell = 0usize;
    for (cell, &w) in welfares.iter().enumerate() {
        if w > welfares[best_cell] {
            best_cell = cell;
        }
    }
    let max_welfare = welfares[best_cell];

    let mut ne_welfares = Vec::with_capacity(ne_set.len());
    for ne in ne_set {
        let actions = ne.profile.as_actions()?;
        ne_welfares.push(social_welfare_finite(fg, &actions));
    }
    let worst = ne_welfares.iter().cloned().fold(f64::INFINITY, f64::min);
    let best = ne_welfares
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);

    let outcome = if worst <= 0.0 {
        PoaOutcome::WelfareGap {
            worst_gap: max_welfare - worst,
            best_gap: max_welfare - best,
        }
    } else {
        PoaOutcome::Ratios {
            poa: max_welfare / worst,
            pos: max_welfare / best,
        }
    };
    Ok(PoaReport {
        max_welfare,
        max_welfare_profile: fg.decode(best_cell),
        worst_ne_welfare: worst,
        best_ne_welfare: best,
        outcome,
    })
}

/// Constraint oracle, interpreted as feasibility `h(s) >= 0`.
pub type ConstraintFn = Arc<dyn Fn(&StrategyProfile) -> f64 + Send + Sync>;

/// Shared constraint plus the positive weight vector defining which
/// normalized equilibrium is meant.
#[derive(Clone)]
pub struct ConstraintSpec {
    h: ConstraintFn,
    weights: Vec<f64>,
}

impl ConstraintSpec {
    pub fn new(h: ConstraintFn, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Parameter(
                "constraint needs at least one weight".into(),
            ));
        }
        if weights.iter().any(|&r| !r.is_finite() || r <= 0.0) {
            return Err(Error::Parameter(
                "constraint weights must be strictly positive".into(),
            ));
        }
        Ok(ConstraintSpec { h, weights })
    }

    pub fn h(&self, profile: &StrategyProfile) -> f64 {
        (self.h)(profile)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Absolute threshold on `|h(s)|` below which the constraint counts as
/// active.
pub const ACTIVE_TOL: f64 = 1e-6;
/// Relative tolerance for multiplier-product equality; finite-difference
/// multipliers inherit O(h) noise.
pub const MULTIPLIER_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct NormalizedEqReport {
    /// Whether `h(s)` was within [`ACTIVE_TOL`] of zero.
    pub constraint_active: bool,
    /// Per-player multipliers from the stationarity conditions (empty when
    /// the constraint is inactive).
    pub multipliers: Vec<f64>,
    /// `lambda_i r_i`, which must agree for a normalized equilibrium.
    pub weighted_products: Vec<f64>,
    /// Unconstrained deviation gain when the constraint is slack.
    pub epsilon_if_inactive: Option<f64>,
    pub is_normalized_equilibrium: bool,
    /// Informational fairness metrics at the profile: the minimum utility
    /// and, when all utilities are positive, their log sum.
    pub min_utility: f64,
    pub sum_log_utility: Option<f64>,
}

/// Verify a normalized-equilibrium candidate for a constrained concave
/// game. With the constraint slack the profile must be a plain equilibrium
/// (all multipliers zero); with it active, per-player multipliers are
/// estimated from finite-difference stationarity
/// `du_i/ds_i + lambda_i dh/ds_i = 0` and must be nonnegative with mutually
/// equal products `lambda_i r_i`.
pub fn normalized_eq_check(
    game: &Game,
    profile: &StrategyProfile,
    constraint: &ConstraintSpec,
    cfg: &FdConfig,
) -> Result<NormalizedEqReport> {
    cfg.validate()?;
    game.validate_profile(profile)?;
    if constraint.weights().len() != game.player_count() {
        return Err(Error::DimensionMismatch(
            "one constraint weight per player".into(),
        ));
    }
    let utilities = game.evaluate(profile)?;
    let min_utility = utilities.iter().cloned().fold(f64::INFINITY, f64::min);
    let sum_log_utility = utilities
        .iter()
        .all(|&u| u > 0.0)
        .then(|| utilities.iter().map(|u| u.ln()).sum());

    let h_value = constraint.h(profile);
    let active = h_value.abs() <= ACTIVE_TOL;

    if !active {
        let eps = ne_verify(game, profile, 201)?;
        let tol = crate::analysis::REL_TOL * utilities.iter().fold(1.0f64, |a, u| a.max(u.abs()));
        return Ok(NormalizedEqReport {
            constraint_active: false,
            multipliers: vec![0.0; game.player_count()],
            weighted_products: vec![0.0; game.player_count()],
            epsilon_if_inactive: Some(eps),
            is_normalized_equilibrium: eps <= tol,
            min_utility,
            sum_log_utility,
        });
    }

    let steps = fd::steps(game, cfg.step_rel)?;
    let point = profile.as_reals()?;
    let k = game.player_count();
    let mut multipliers = Vec::with_capacity(k);
    let mut unidentifiable = Vec::new();
    for i in 0..k {
        let du = fd::partial(game, i, i, &point, steps[i])?;
        let base = StrategyProfile::reals(&point);
        let h_up = constraint.h(&base.with_real(i, point[i] + steps[i]));
        let h_dn = constraint.h(&base.with_real(i, point[i] - steps[i]));
        let dh = (h_up - h_dn) / (2.0 * steps[i]);
        if dh.abs() <= crate::analysis::REL_TOL {
            unidentifiable.push(i);
            multipliers.push(f64::NAN);
        } else {
            multipliers.push(-du / dh);
        }
    }
    if !unidentifiable.is_empty() {
        return Err(Error::Unidentifiable(unidentifiable));
    }

    let products: Vec<f64> = multipliers
        .iter()
        .zip(constraint.weights())
        .map(|(l, r)| l * r)
        .collect();
    let nonnegative = multipliers.iter().all(|&l| l >= -MULTIPLIER_REL_TOL);
    let scale = products
        .iter()
        .fold(0.0f64, |a, p| a.max(p.abs()))
        .max(1e-12);
    let max_spread = products
        .iter()
        .flat_map(|a| products.iter().map(move |b| (a - b).abs()))
        .fold(0.0f64, f64::max);
    let equal_products = max_spread <= MULTIPLIER_REL_TOL * scale;

    Ok(NormalizedEqReport {
        constraint_active: true,
        multipliers,
        weighted_products: products,
        epsilon_if_inactive: None,
        is_normalized_equilibrium: nonnegative && equal_products,
        min_utility,
        sum_log_utility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::classic::{battle_of_sexes, prisoners_dilemma};
    use crate::games::constrained::make_constrained_quadratic;
    use crate::solvers::pure_ne_search;

    #[test]
    fn welfare_of_prisoners_dilemma_cells() {
        let fg = prisoners_dilemma();
        assert_eq!(social_welfare_finite(&fg, &[0, 0]), 6.0);
        assert_eq!(social_welfare_finite(&fg, &[1, 1]), 2.0);
        let g = fg.as_game();
        let w = social_welfare(&g, &StrategyProfile::actions(&[0, 0])).unwrap();
        assert_eq!(w, 6.0);
    }

    #[test]
    fn defect_defect_is_dominated_by_cooperation() {
        let fg = prisoners_dilemma();
        let check = is_pareto_optimal(&fg, &[1, 1]).unwrap();
        assert!(!check.optimal);
        assert_eq!(check.dominating, Some(vec![0, 0]));
        assert!(is_pareto_optimal(&fg, &[0, 0]).unwrap().optimal);
    }

    #[test]
    fn single_cell_game_is_trivially_optimal() {
        let fg = FiniteGame::from_fn("solo", vec![1], |_| vec![0.0]).unwrap();
        assert!(is_pareto_optimal(&fg, &[0]).unwrap().optimal);
    }

    #[test]
    fn equal_weights_pick_welfare_maximizer() {
        let fg = prisoners_dilemma();
        assert_eq!(weighted_sum_po(&fg, &[1.0, 1.0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn skewed_weights_favor_player_one() {
        let fg = battle_of_sexes();
        assert_eq!(weighted_sum_po(&fg, &[10.0, 1.0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn nonpositive_weights_rejected() {
        let fg = prisoners_dilemma();
        assert!(weighted_sum_po(&fg, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn prisoners_dilemma_anarchy_ratio_is_three() {
        let fg = prisoners_dilemma();
        let nes = pure_ne_search(&fg);
        let report = poa_pos(&fg, &nes).unwrap();
        match report.outcome {
            PoaOutcome::Ratios { poa, pos } => {
                assert_eq!(poa, 3.0);
                assert_eq!(pos, 3.0);
            }
            _ => panic!("expected ratios"),
        }
    }

    #[test]
    fn nonpositive_equilibrium_welfare_reports_gap() {
        // shift the dilemma so the equilibrium welfare is negative
        let fg = FiniteGame::from_tables_2p(
            "shifted",
            &[vec![1.0, -2.0], vec![3.0, -1.0]],
            &[vec![1.0, 3.0], vec![-2.0, -1.0]],
        )
        .unwrap();
        let nes = pure_ne_search(&fg);
        assert_eq!(nes.len(), 1);
        let report = poa_pos(&fg, &nes).unwrap();
        match report.outcome {
            PoaOutcome::WelfareGap { worst_gap, .. } => {
                assert_eq!(worst_gap, 2.0 - (-2.0));
            }
            _ => panic!("expected welfare gap"),
        }
    }

    #[test]
    fn normalized_equilibrium_closed_forms_verify() {
        let g = make_constrained_quadratic(vec![1.0, 1.0], 1.0).unwrap();
        let cfg = FdConfig::default();
        for weights in [vec![1.0, 1.0], vec![2.0, 1.0]] {
            let spec = g.constraint(weights.clone()).unwrap();
            let (point, lambda) = g.normalized_equilibrium(&weights).unwrap();
            let report = normalized_eq_check(g.game(), &point, &spec, &cfg).unwrap();
            assert!(report.constraint_active);
            assert!(
                report.is_normalized_equilibrium,
                "weights {weights:?}: {report:?}"
            );
            for p in &report.weighted_products {
                assert!(
                    (p - lambda).abs() <= 1e-3 * lambda.max(1.0),
                    "product {p} vs {lambda}"
                );
            }
        }
    }

    #[test]
    fn slack_constraint_reduces_to_plain_equilibrium() {
        let g = make_constrained_quadratic(vec![0.2, 0.3], 5.0).unwrap();
        let spec = g.constraint(vec![1.0, 1.0]).unwrap();
        let point = StrategyProfile::reals(&[0.2, 0.3]);
        let report = normalized_eq_check(g.game(), &point, &spec, &FdConfig::default()).unwrap();
        assert!(!report.constraint_active);
        assert!(report.is_normalized_equilibrium);
        assert_eq!(report.multipliers, vec![0.0, 0.0]);
    }
}
