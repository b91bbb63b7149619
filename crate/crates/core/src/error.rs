use thiserror::Error;

use crate::num::{AsymptoticSolution, SweepResult};
use crate::solver::TraceRow;

/// Errors produced by construction, solving, and I/O across the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {index} is {value}, which is not a finite nonnegative real")]
    InvalidCoordinate { index: usize, value: f64 },

    #[error("empty vector: dimension must be at least 1")]
    EmptyVector,

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no closed-form equivalence constant for this norm pair: {0}")]
    NoClosedForm(String),

    #[error("mapping output is not strictly positive at coordinate {index} (value {value})")]
    NonPositiveOutput { index: usize, value: f64 },

    #[error(
        "fixed-point iteration did not converge within {iterations} iterations \
         (residual {residual:.3e})"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
        trace: Vec<TraceRow>,
    },

    #[error(
        "normalized iterates did not settle within {iterations} iterations; the \
         homogeneous mapping is possibly non-primitive (residual {residual:.3e})"
    )]
    PossiblyNonPrimitive {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
        trace: Vec<TraceRow>,
    },

    #[error("degenerate mapping: iteration produced the zero vector")]
    DegenerateMapping,

    #[error("evaluator is not positively homogeneous (deviation {deviation:.3e})")]
    NotHomogeneous { deviation: f64 },

    #[error(
        "ratio f(hx)/h increased from {previous} to {current} at h={h}; \
         not a standard interference function"
    )]
    NotInterferenceFunction { h: f64, previous: f64, current: f64 },

    #[error("f(hx) overflowed; last finite h was {last_h}")]
    LimitOverflow { last_h: f64 },

    #[error("asymptotic override disagrees with the numeric limit at {point:?}: {detail}")]
    OverrideMismatch { point: Vec<f64>, detail: String },

    #[error("utility is unbounded: the asymptotic mapping has eigenvalue 0")]
    UnboundedUtility,

    #[error(
        "asymptotic eigenproblem violates the strict-positivity assumption \
         (lambda_inf = {lambda})"
    )]
    AssumptionViolated {
        lambda: f64,
        partial: Box<AsymptoticSolution>,
    },

    #[error("sweep aborted at p_bar = {p_bar}: {source}")]
    SweepAborted {
        p_bar: f64,
        partial: Box<SweepResult>,
        #[source]
        source: Box<Error>,
    },

    #[error("monotonicity violated in sweep: {0}")]
    MonotonicityViolation(String),

    #[error("scenario parse error: {0}")]
    ScenarioParse(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
