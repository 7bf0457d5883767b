//! Strategic-form game analysis toolkit.
//!
//! The crate builds finite and continuous scalar-strategy games, runs
//! sampled structural checks (quasi-concavity, S-modularity, potential and
//! diagonally-strict-concavity conditions, standard best responses),
//! computes pure/mixed/correlated equilibria, maps best-response basins of
//! attraction, and measures equilibrium efficiency (Pareto optimality,
//! social welfare, price of anarchy and stability, normalized equilibria).
//!
//! Structural checks are sampled falsification, not proof: a
//! `HoldsOnSamples` verdict is evidence that a universally quantified
//! condition holds, while a `Counterexample` verdict carries a concrete
//! witness that replays to a violation.
//!
//! The `games` module ships parameterized wireless examples (energy-
//! efficient and pricing power control, a two-user multiple-access rate
//! game, two-band power allocation, slotted ALOHA) plus classic matrix
//! games, each exposing analytic reference quantities for tests.
//!
//! Grid sweeps, tensor fills, and basin maps are data-parallel via rayon
//! when the default `parallel` feature is enabled; disabling it swaps in
//! sequential loops with identical results.

pub mod analysis;
pub mod efficiency;
pub mod error;
pub mod finite;
pub mod game;
pub mod games;
mod par;
pub mod solvers;

pub use error::{Error, Result};
pub use finite::{
    discretize, expected_utility, DiscretizedGame, FiniteGame, JointDistribution, MixedProfile,
};
pub use game::{
    best_response_grid, evaluate_utility, Game, Strategy, StrategyProfile, StrategySpace,
};
