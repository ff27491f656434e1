//! Error type shared by all modules.

use thiserror::Error;

/// Structured failure modes of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("no layer position exists: gamma = {gamma} is not below alpha + beta = {sum}")]
    ExistenceViolation { gamma: f64, sum: f64 },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("missing config key `{0}`")]
    MissingKey(&'static str),

    #[error("iteration failed to converge within {0} steps")]
    NoConvergence(usize),

    #[error("x = {x} is not on the {side} side of the layer at x* = {x_star}")]
    DomainMismatch {
        x: f64,
        x_star: f64,
        side: &'static str,
    },

    #[error("z = {z} outside [0, pi/4) or d = {d} not positive")]
    DomainError { z: f64, d: f64 },

    #[error("grid spacing {dx} near the layer exceeds eps/4 = {limit}")]
    GridTooCoarse { dx: f64, limit: f64 },

    #[error("spectral argument off the decaying branch: Re(1 + c*lambda) = {re} <= 0")]
    BranchViolation { re: f64 },

    #[error("bracketing failed: {0}")]
    BracketFailure(&'static str),

    #[error("degenerate bracket: minimum of the even SLEP function at s_c is {m_sc} <= 0")]
    DegenerateBracket { m_sc: f64 },

    #[error("continuation stalled near s = {s}")]
    ContinuationStall { s: f64 },

    #[error("essential spectrum bound is nonnegative: max Re lambda = {bound} at xi = {xi}")]
    PositiveBound { bound: f64, xi: f64 },

    #[error("grid spacing {dx} exceeds eps/4 = {limit} near the layer at +-x*")]
    ResolutionError { dx: f64, limit: f64 },

    #[error("simulation blew up at t = {t}: max |u| exceeded {cap}")]
    BlowUp { t: f64, cap: f64 },

    #[error("u-profile has no zero crossing")]
    NoCrossing,
}

pub type Result<T> = std::result::Result<T, Error>;
