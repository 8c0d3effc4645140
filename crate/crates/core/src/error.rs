use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// One message per violated parameter invariant.
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("ST power must be positive")]
    ZeroStPower,

    #[error("alpha must exceed 2 (got {0})")]
    AlphaDomain(f64),

    #[error("transition matrix row {row} sums to {sum}, not 1")]
    NonStochastic { row: usize, sum: f64 },

    #[error("transition matrix is not square or is empty")]
    BadMatrixShape,

    #[error("zone probabilities do not provide the regions needed for a {0:?} chain")]
    MissingRegions(crate::markov::ChainKind),

    #[error("guard zones cover the plane (p_g = 0)")]
    GuardZonesCoverPlane,

    #[error("expected the wireless-powered setting (r_g = 0), got r_g = {0}")]
    NotWitSetting(f64),

    #[error("closed form requires zero noise power (got {0})")]
    NoiseNotZero(f64),

    #[error("primary constraint unsatisfiable at lambda_s = 0")]
    Infeasible,

    #[error("constraints do not intersect in bracket [{lo}, {hi}]: f1-f2 = {g_lo} at lo, {g_hi} at hi")]
    NoBracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("conditioning event too rare (acceptance rate {0:.3e})")]
    ConditioningTooRare(f64),

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("simulation produced no samples")]
    NoSamples,

    #[error("config: {0}")]
    Config(String),
}
