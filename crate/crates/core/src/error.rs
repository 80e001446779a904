use thiserror::Error;

use crate::model::ChannelId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("channel {0:?} is not a field channel")]
    InvalidChannel(ChannelId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// G_o ≥ G_w puts the coefficient dynamics in the hyperbolic branch.
    #[error("unsupported coupling regime: k = {ratio} (need 0 <= k < 1)")]
    UnsupportedRegime { ratio: f64 },

    #[error("integration failed at t = {last_good_time}: {reason}")]
    IntegrationFailure { last_good_time: f64, reason: String },

    #[error("degenerate state: N^-2 = {inverse_norm_sq} <= 0")]
    DegenerateState { inverse_norm_sq: f64 },

    #[error("invalid overlap: |p| = {magnitude} > 1")]
    InvalidOverlap { magnitude: f64 },

    #[error("conversion rate undefined: input-channel mean vanishes")]
    UndefinedRate,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("entanglement-affecting factor is degenerate at k = 0")]
    DegenerateRatio,

    #[error("Fock space dimension {dimension} exceeds limit {limit}")]
    ResourceLimit { dimension: usize, limit: usize },

    #[error("truncation leakage {leakage:e} exceeds threshold {threshold:e}")]
    Truncation { leakage: f64, threshold: f64 },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
