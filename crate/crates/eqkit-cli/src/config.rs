//! Run configuration: a strict TOML document naming a registered game, its
//! parameters, the analyses to run, and the numeric settings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("unknown game `{0}`; `eqkit list-games` shows the registry")]
    UnknownGame(String),

    #[error("game construction failed: {0}")]
    Game(#[from] eqkit::Error),

    #[error("missing result: analysis `{0}` was not part of this run")]
    MissingResult(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

/// The analyses a run can request, executed in the listed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    /// Existence flowchart: quasi-concavity, S-modularity, potential,
    /// finiteness.
    Existence,
    /// Uniqueness evidence: diagonal concavity and, when the game has a
    /// closed-form best response, the standard-function check.
    UniquenessEvidence,
    /// Pure equilibria: best-response dynamics for continuous games,
    /// exhaustive tensor search for finite ones. Populates the equilibrium
    /// set consumed by `efficiency`.
    Solve,
    /// Basin-of-attraction map over a grid of starting profiles.
    Basins,
    /// Mixed equilibria by support enumeration (2-player finite games).
    Mixed,
    /// Correlated equilibrium via regret-matching self-play (finite games).
    Correlated,
    /// Welfare, Pareto, and anarchy/stability metrics; needs `solve`.
    Efficiency,
    /// Normalized-equilibrium verification for games with a built-in
    /// constraint.
    NormalizedEq,
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Existence => "existence",
            Analysis::UniquenessEvidence => "uniqueness_evidence",
            Analysis::Solve => "solve",
            Analysis::Basins => "basins",
            Analysis::Mixed => "mixed",
            Analysis::Correlated => "correlated",
            Analysis::Efficiency => "efficiency",
            Analysis::NormalizedEq => "normalized_eq",
        }
    }
}

/// Numeric knobs with documented defaults; every field may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericSettings {
    /// Discretization points per axis for grid scans (efficiency, pure
    /// search on continuous games).
    pub grid_points: usize,
    /// Starting-grid resolution per axis for basin maps.
    pub basin_resolution: usize,
    /// Grid points for the generic best-response search.
    pub br_points: usize,
    /// Sweep budget for best-response dynamics.
    pub max_sweeps: usize,
    /// Convergence tolerance for the dynamics (cluster radius is 10x).
    pub tol: f64,
    /// Deviation-grid points for equilibrium verification.
    pub deviation_points: usize,
    /// Regret-matching iterations.
    pub rm_iterations: usize,
    /// Finite-difference step as a fraction of each interval width.
    pub fd_step_rel: f64,
    /// Lattice points per axis for cross-partial sampling.
    pub fd_grid_points: usize,
    /// Sampled pairs for the diagonal-concavity check.
    pub fd_pair_samples: usize,
    /// Sampled unilateral deviations for potential verification.
    pub fd_deviation_samples: usize,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings {
            grid_points: 101,
            basin_resolution: 50,
            br_points: 64,
            max_sweeps: 500,
            tol: 1e-6,
            deviation_points: 101,
            rm_iterations: 100_000,
            fd_step_rel: 1e-4,
            fd_grid_points: 9,
            fd_pair_samples: 200,
            fd_deviation_samples: 1000,
        }
    }
}

impl NumericSettings {
    pub fn fd_config(&self, seed: u64) -> eqkit::analysis::FdConfig {
        eqkit::analysis::FdConfig {
            step_rel: self.fd_step_rel,
            grid_points: self.fd_grid_points,
            pair_samples: self.fd_pair_samples,
            deviation_samples: self.fd_deviation_samples,
            seed,
        }
    }

    pub fn br_options(&self) -> eqkit::solvers::BrOptions {
        eqkit::solvers::BrOptions {
            max_sweeps: self.max_sweeps,
            tol: self.tol,
            br_points: self.br_points,
            rule: eqkit::solvers::UpdateRule::Sequential,
        }
    }
}

/// A validated run configuration. Unknown keys anywhere are rejected so a
/// typo cannot silently fall back to defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Registered game name.
    pub game: String,
    /// Game-specific parameters, validated by the game's own schema.
    #[serde(default)]
    pub params: toml::Table,
    /// Analyses to run, in order.
    pub analyses: Vec<Analysis>,
    /// Master seed for every sampled computation (default 0).
    #[serde(default)]
    pub seed: u64,
    /// Output directory for the report and CSV files.
    #[serde(default)]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub numeric: NumericSettings,
}

/// Parse and validate a TOML run configuration. The game name must be
/// registered and the parameter table must satisfy the game's schema;
/// errors carry the offending field or line.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if config.analyses.is_empty() {
        return Err(CliError::Config(
            "`analyses` must list at least one analysis".into(),
        ));
    }
    // construct the game once to validate name and parameters eagerly
    crate::registry::build_game(&config.game, &config.params)?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(
            r#"
            game = "cournot"
            analyses = ["solve"]
            [params]
            a = 10.0
            b = 1.0
            c = 1.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.numeric.grid_points, 101);
        assert_eq!(cfg.analyses, vec![Analysis::Solve]);
    }

    #[test]
    fn misspelled_analysis_is_rejected_by_name() {
        let err = parse_config(
            r#"
            game = "cournot"
            analyses = ["solv"]
            "#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("solv"), "message was: {msg}");
    }

    #[test]
    fn unknown_top_level_key_is_rejected() {
        let err = parse_config(
            r#"
            game = "cournot"
            analyses = ["solve"]
            grid_points = 11
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("grid_points"));
    }

    #[test]
    fn unknown_game_parameter_is_rejected() {
        let err = parse_config(
            r#"
            game = "cournot"
            analyses = ["solve"]
            [params]
            slope = 2.0
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("slope"), "got: {err}");
    }

    #[test]
    fn config_round_trips_through_toml() {
        let text = r#"
            game = "aloha"
            analyses = ["solve", "correlated"]
            seed = 7
            [numeric]
            rm_iterations = 1000
        "#;
        let cfg = parse_config(text).unwrap();
        let echoed = toml::to_string(&cfg).unwrap();
        let reparsed = parse_config(&echoed).unwrap();
        assert_eq!(cfg, reparsed);
    }
}
