//! Crate-wide error type.
//!
//! One flat enum keeps propagation across modules simple; variants carry enough
//! context (values, line numbers, theory labels) to be actionable without a
//! backtrace. Scalar payloads are stored as `f64` regardless of the engine's
//! working precision.

use thiserror::Error;

use crate::stability::Theory;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("control parameter lambda = {lambda} is outside [0, 4]")]
    LambdaOutOfRange { lambda: f64 },

    #[error("state x = {x} is outside the unit interval [0, 1]")]
    StateOutOfRange { x: f64 },

    #[error("no samples to analyse")]
    EmptySamples,

    #[error("tolerance must be positive, got {tolerance}")]
    NonPositiveTolerance { tolerance: f64 },

    #[error("invalid sweep range [{lambda_min}, {lambda_max}] with {grid_points} grid points (need 0 <= min < max <= 4 and at least 2 points)")]
    InvalidSweepRange {
        lambda_min: f64,
        lambda_max: f64,
        grid_points: usize,
    },

    #[error("sweep must start on a settled power-of-two cycle to track doublings; at lambda = {lambda} the settled period is {found}")]
    NotPowerOfTwoAtStart { lambda: f64, found: String },

    #[error("period-doubling transition {transition} is not bracketed below lambda_max = {lambda_max}")]
    TransitionNotBracketed { transition: usize, lambda_max: f64 },

    #[error("accumulation extrapolation needs at least 3 doubling points, got {got}")]
    InsufficientDoublings { got: usize },

    #[error("doubling points must be strictly increasing")]
    NonIncreasingDoublings,

    #[error("doubling intervals must shrink for extrapolation; got ratio {ratio}")]
    NonContractingCascade { ratio: f64 },

    #[error("sweep sample_len must be at least 1")]
    ZeroSampleLen,

    #[error("perturbation delta0 = {delta0} must lie in (0, 1e-6]")]
    InvalidPerturbation { delta0: f64 },

    #[error("renormalization interval must be at least 1")]
    ZeroRenormInterval,

    #[error("iteration count {n} is too small (need at least {min})")]
    TooFewIterations { n: usize, min: usize },

    #[error("trajectory separation collapsed to exactly zero twice; dynamics are degenerate at this parameter")]
    DegenerateSeparation,

    #[error("cycle '{name}' is invalid: {reason}")]
    InvalidCycle { name: String, reason: String },

    #[error("calibration is invalid: {reason}")]
    InvalidCalibration { reason: String },

    #[error("risk profile is missing category '{category}'")]
    MissingRiskCategory { category: String },

    #[error("channel set is missing theory '{0}'")]
    MissingTheory(Theory),

    #[error("channel set names theory '{0}' more than once")]
    DuplicateTheory(Theory),

    #[error("epsilon = {epsilon} must exceed delta0 = {delta0}")]
    EpsilonNotAboveDelta { epsilon: f64, delta0: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown theory '{name}'")]
    UnknownTheory { line: usize, name: String },

    #[error("line {line}: dates for theory '{theory}' must be strictly increasing")]
    NonMonotonicDates { theory: Theory, line: usize },

    #[error("series for theory '{theory}' needs at least 2 observations, got {len}")]
    ShortSeries { theory: Theory, len: usize },

    #[error("series for theory '{theory}' is constant; the last value cannot be rescaled to a start state")]
    DegenerateSeries { theory: Theory },

    #[error("series for theory '{theory}' has {dates} dates but {values} values")]
    LengthMismatch {
        theory: Theory,
        dates: usize,
        values: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
