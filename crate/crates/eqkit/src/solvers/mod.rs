//! Equilibrium computation: pure-equilibrium search and verification,
//! best-response dynamics with basin-of-attraction maps, two-player support
//! enumeration for mixed equilibria, and regret-matching self-play for
//! correlated equilibria.

mod dynamics;
mod pure;
mod regret;
mod support;
mod verify;

pub use dynamics::{
    basin_map, br_dynamics, br_dynamics_with, BasinMap, BrOptions, BrTrace, UpdateRule,
};
pub use pure::pure_ne_search;
pub use regret::{ce_verify, regret_matching_ce, CorrelatedPlay};
pub use support::{support_enumeration_2p, MixedNash, SupportEnumeration};
pub use verify::{ne_verify, ne_verify_finite, NashResult};
