//! Pure-equilibrium existence methodology: run the applicable sufficient
//! conditions in order and name the first theorem whose premises hold on
//! samples.

use serde::Serialize;

use super::checks::{
    check_potential_condition, check_quasiconcavity, check_smodular, verify_exact_potential,
    PotentialFn, PotentialKind, SModularVerdicts,
};
use super::{CheckVerdict, FdConfig};
use crate::error::Result;
use crate::game::Game;

/// Classical existence theorems the report can conclude with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremName {
    /// Compact convex strategy sets, continuous utilities quasi-concave in
    /// the own variable: at least one pure equilibrium.
    DebreuFanGlicksberg,
    /// S-modular games: at least one pure equilibrium.
    Topkis,
    /// Potential games with compact sets and continuous utilities: at least
    /// one pure equilibrium.
    MondererShapley,
}

impl std::fmt::Display for TheoremName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremName::DebreuFanGlicksberg => "Debreu-Fan-Glicksberg",
            TheoremName::Topkis => "Topkis",
            TheoremName::MondererShapley => "Monderer-Shapley",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExistenceConclusion {
    /// A sufficient condition held on samples; evidence, not proof.
    PureNeGuaranteed(TheoremName),
    /// Finite game: a mixed equilibrium exists (Nash's theorem).
    MixedNeGuaranteed,
    Unknown,
}

/// Aggregate of the existence checks in flowchart order.
#[derive(Debug, Clone, Serialize)]
pub struct ExistenceReport {
    /// Per-player quasi-concavity verdicts (interval games only).
    pub quasiconcavity: Option<Vec<CheckVerdict>>,
    pub smodular: Option<SModularVerdicts>,
    /// Cross-partial potential condition, run when no candidate potential
    /// was supplied.
    pub potential_condition: Option<CheckVerdict>,
    /// Exact-potential verification of a supplied candidate.
    pub exact_potential: Option<CheckVerdict>,
    pub finite_game: bool,
    pub conclusion: ExistenceConclusion,
}

/// Run every applicable existence check — quasi-concavity, S-modularity,
/// potential, finiteness — and conclude with the first sufficient
/// condition, in flowchart order, that holds on samples. Deterministic
/// given `cfg.seed`.
pub fn existence_report(
    game: &Game,
    cfg: &FdConfig,
    phi: Option<&PotentialFn>,
) -> Result<ExistenceReport> {
    let all_intervals = game.spaces().iter().all(|s| s.is_interval());
    let all_finite = game.spaces().iter().all(|s| !s.is_interval());

    let mut report = ExistenceReport {
        quasiconcavity: None,
        smodular: None,
        potential_condition: None,
        exact_potential: None,
        finite_game: all_finite,
        conclusion: ExistenceConclusion::Unknown,
    };

    if all_intervals {
        let mut verdicts = Vec::with_capacity(game.player_count());
        for player in 0..game.player_count() {
            verdicts.push(check_quasiconcavity(game, player, cfg)?);
        }
        let qc_holds = verdicts.iter().all(|v| v.holds());
        report.quasiconcavity = Some(verdicts);

        let sm = check_smodular(game, cfg)?;
        let sm_holds = sm.supermodular.holds() || sm.submodular.holds();
        report.smodular = Some(sm);

        let potential_holds = if let Some(phi) = phi {
            let v = verify_exact_potential(game, phi, PotentialKind::Exact, cfg)?;
            let holds = v.holds();
            report.exact_potential = Some(v);
            holds
        } else {
            let v = check_potential_condition(game, cfg)?;
            let holds = v.holds();
            report.potential_condition = Some(v);
            holds
        };

        // all verdicts are reported; the conclusion names the first
        // sufficient condition in flowchart order
        if qc_holds {
            report.conclusion =
                ExistenceConclusion::PureNeGuaranteed(TheoremName::DebreuFanGlicksberg);
            return Ok(report);
        }
        if sm_holds {
            report.conclusion = ExistenceConclusion::PureNeGuaranteed(TheoremName::Topkis);
            return Ok(report);
        }
        if potential_holds {
            report.conclusion = ExistenceConclusion::PureNeGuaranteed(TheoremName::MondererShapley);
            return Ok(report);
        }
    }

    if all_finite {
        report.conclusion = ExistenceConclusion::MixedNeGuaranteed;
    }
    Ok(report)
}
