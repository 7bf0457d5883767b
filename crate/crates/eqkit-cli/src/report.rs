//! The machine-readable run report: config echo, per-analysis results, and
//! timings. Everything except the timings is deterministic for a fixed
//! config and seed.

use serde::Serialize;

use eqkit::analysis::{DscVerdict, ExistenceReport, StandardBrVerdict};
use eqkit::efficiency::{NormalizedEqReport, PoaOutcome};
use eqkit::solvers::{BasinMap, BrTrace, CorrelatedPlay, NashResult, SupportEnumeration};
use eqkit::StrategyProfile;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub toolkit_version: String,
    /// Effective configuration (defaults filled, seed overrides applied);
    /// re-running it reproduces every numeric field below.
    pub config: RunConfig,
    pub analyses: Vec<AnalysisRecord>,
    /// Wall-clock per analysis in milliseconds; excluded from determinism
    /// comparisons.
    pub timings_ms: Vec<(String, f64)>,
}

impl RunReport {
    /// Pretty JSON with the timing fields blanked, for bit-exact replay
    /// comparisons.
    pub fn deterministic_json(&self) -> String {
        let mut clone = self.clone();
        clone.timings_ms = Vec::new();
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn record(&self, analysis: &str) -> Option<&AnalysisOutcome> {
        self.analyses
            .iter()
            .find(|r| r.analysis == analysis)
            .map(|r| &r.outcome)
    }

    /// All analyses completed (none errored, none skipped).
    pub fn all_completed(&self) -> bool {
        self.analyses
            .iter()
            .all(|r| matches!(r.outcome, AnalysisOutcome::Ok { .. }))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisRecord {
    pub analysis: String,
    pub outcome: AnalysisOutcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AnalysisOutcome {
    Ok {
        result: AnalysisResult,
    },
    /// The analysis ran and failed; later analyses that depend on it are
    /// skipped with a reason. The run itself never aborts.
    Error {
        message: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisResult {
    Existence {
        report: ExistenceReport,
    },
    UniquenessEvidence {
        weights: Vec<f64>,
        dsc: DscVerdict,
        standard_br: Option<StandardBrVerdict>,
    },
    Solve {
        method: String,
        equilibria: Vec<NashResult>,
        /// Dynamics trace from the midpoint start (continuous games only).
        trace: Option<BrTrace>,
    },
    Basins {
        map: BasinMap,
        /// Verification epsilon for each basin equilibrium.
        equilibrium_epsilons: Vec<f64>,
    },
    Mixed {
        enumeration: SupportEnumeration,
    },
    Correlated {
        play: CorrelatedPlay,
    },
    Efficiency {
        /// Grid resolution used for the welfare scan on continuous games;
        /// the true optimum may fall between grid points.
        grid_points: Option<usize>,
        max_welfare: f64,
        max_welfare_profile: StrategyProfile,
        ne_welfares: Vec<f64>,
        outcome: PoaOutcome,
        pareto: Vec<ParetoEntry>,
        /// Virtual-MIMO efficiency at the best equilibrium, for
        /// energy-efficiency games.
        virtual_mimo_at_best_ne: Option<f64>,
    },
    NormalizedEq {
        candidate: StrategyProfile,
        weights: Vec<f64>,
        report: NormalizedEqReport,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ParetoEntry {
    pub profile: StrategyProfile,
    pub optimal: bool,
    pub dominating: Option<StrategyProfile>,
}
