//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid strategy space: {0}")]
    InvalidSpace(String),

    #[error("invalid game definition: {0}")]
    InvalidGame(String),

    #[error("player {player}: {detail}")]
    Domain { player: usize, detail: String },

    #[error("utility oracle returned a non-finite value at profile {profile}")]
    NonFiniteUtility { profile: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("multiplier unidentifiable for players {0:?}: constraint gradient vanishes")]
    Unidentifiable(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, Error>;
