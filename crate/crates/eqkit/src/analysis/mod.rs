//! Sampled structural checks behind the pure-equilibrium existence and
//! uniqueness theory: quasi-concavity, S-modularity, potential conditions,
//! diagonally strict concavity, and standard best responses, composed into
//! an existence report.
//!
//! Every check is a falsification attempt over seeded samples. The verdict
//! is either `HoldsOnSamples` (evidence, not proof — the underlying
//! conditions quantify over continua) or `Counterexample` with a witness
//! that re-evaluates to a violation when replayed.

mod checks;
mod existence;
pub(crate) mod fd;

pub use checks::{
    check_dsc, check_potential_condition, check_quasiconcavity, check_smodular, check_standard_br,
    replay_dip, replay_scalability, verify_exact_potential, DscConvention, DscVerdict, PotentialFn,
    PotentialKind, SModularVerdicts, StandardBrVerdict,
};
pub use existence::{existence_report, ExistenceConclusion, ExistenceReport, TheoremName};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::StrategyProfile;

/// Relative tolerance applied against a per-check magnitude scale.
pub const REL_TOL: f64 = 1e-6;
/// Floor for the magnitude scale, so near-zero samples are judged against
/// an absolute tolerance of `REL_TOL`.
pub const SCALE_FLOOR: f64 = 1.0;
/// Grid points for single-variable quasi-concavity scans.
pub const QC_GRID_POINTS: usize = 101;
/// Random opponent profiles sampled per quasi-concavity check, in addition
/// to the all-lower / midpoint / all-upper anchors.
pub const QC_OPPONENT_SAMPLES: usize = 12;
/// Sample count per property for the standard-function check.
pub const STANDARD_BR_SAMPLES: usize = 100;
/// Largest scaling factor tried by the scalability test.
pub const SCALABILITY_ALPHA_MAX: f64 = 4.0;

pub(crate) fn tol_for(scale: f64) -> f64 {
    REL_TOL * scale.max(SCALE_FLOOR)
}

/// Central finite-difference estimate of the mixed second partial of
/// `u_owner` w.r.t. coordinates `i` and `j` at an interior point, with an
/// explicit absolute step. Exposed for step-size convergence studies.
pub fn cross_partial_estimate(
    game: &crate::game::Game,
    owner: usize,
    i: usize,
    j: usize,
    point: &[f64],
    h: f64,
) -> Result<f64> {
    fd::cross_partial(game, owner, i, j, point, h, h)
}

/// Central finite-difference estimate of the first partial of `u_owner`
/// w.r.t. coordinate `axis`; the replay companion to the sampled checks.
pub fn partial_estimate(
    game: &crate::game::Game,
    owner: usize,
    axis: usize,
    point: &[f64],
    h: f64,
) -> Result<f64> {
    fd::partial(game, owner, axis, point, h)
}

/// Deterministic per-check RNG: same seed and salt, same stream.
pub(crate) fn check_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Configuration for finite-difference machinery and sampling budgets.
#[derive(Debug, Clone, Serialize)]
pub struct FdConfig {
    /// Finite-difference step as a fraction of each interval's width.
    pub step_rel: f64,
    /// Lattice points per axis for cross-partial sampling.
    pub grid_points: usize,
    /// Sampled pairs for the diagonally-strict-concavity check.
    pub pair_samples: usize,
    /// Sampled unilateral deviations for exact/ordinal potential verification.
    pub deviation_samples: usize,
    /// RNG seed; all sampling is reproducible given the seed.
    pub seed: u64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step_rel: 1e-4,
            grid_points: 9,
            pair_samples: 200,
            deviation_samples: 1000,
            seed: 0,
        }
    }
}

impl FdConfig {
    pub fn with_seed(seed: u64) -> Self {
        FdConfig {
            seed,
            ..FdConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step_rel.is_finite() || self.step_rel <= 0.0 {
            return Err(Error::Parameter("FD step fraction must be positive".into()));
        }
        if self.grid_points < 3 {
            return Err(Error::Parameter(
                "FD grid needs at least 3 points per axis".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a sampled structural test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    HoldsOnSamples,
    Counterexample,
}

/// Concrete violation evidence attached to a `Counterexample` verdict.
/// Each variant stores enough to re-evaluate the defining inequality.
#[derive(Debug, Clone, Serialize)]
pub enum Witness {
    /// Strict interior dip of `u_player` along its own coordinate with the
    /// opponents frozen: `values[1] < min(values[0], values[2]) - tol`.
    InteriorDip {
        player: usize,
        profile: StrategyProfile,
        triple: [f64; 3],
        values: [f64; 3],
    },
    /// Sampled cross-partial of `u_player` w.r.t. `(s_player, s_other)`.
    CrossPartial {
        player: usize,
        other: usize,
        point: Vec<f64>,
        value: f64,
    },
    /// Sampled cross-partial of `u_i - u_j` w.r.t. `(s_i, s_j)`.
    PotentialCross {
        i: usize,
        j: usize,
        point: Vec<f64>,
        value: f64,
    },
    /// Unilateral deviation whose utility change disagrees with the
    /// candidate potential's change.
    DeviationMismatch {
        profile: StrategyProfile,
        player: usize,
        deviation: crate::game::Strategy,
        utility_delta: f64,
        potential_delta: f64,
    },
    /// Comparable pair `x <= x_prime` with a decreasing best-response
    /// component.
    NonMonotone {
        x: Vec<f64>,
        x_prime: Vec<f64>,
        component: usize,
        g_x: f64,
        g_x_prime: f64,
    },
    /// Scaling sample violating `g(alpha x) < alpha g(x)`.
    NotScalable {
        x: Vec<f64>,
        alpha: f64,
        component: usize,
        g_alpha_x: f64,
        alpha_g_x: f64,
    },
    /// Pair whose normalized pseudogradient pairing has the wrong sign.
    SignIndefinite {
        s: Vec<f64>,
        s_prime: Vec<f64>,
        value: f64,
    },
}

/// Verdict of one sampled check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckVerdict {
    pub status: CheckStatus,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub tolerance: f64,
}

impl CheckVerdict {
    pub fn holds(&self) -> bool {
        self.status == CheckStatus::HoldsOnSamples
    }

    pub(crate) fn holds_on(samples: usize, tolerance: f64) -> Self {
        CheckVerdict {
            status: CheckStatus::HoldsOnSamples,
            witness: None,
            samples_used: samples,
            tolerance,
        }
    }

    pub(crate) fn counterexample(w: Witness, samples: usize, tolerance: f64) -> Self {
        CheckVerdict {
            status: CheckStatus::Counterexample,
            witness: Some(w),
            samples_used: samples,
            tolerance,
        }
    }
}
