//! Solvers and performance bounds for network utility maximization problems
//! that reduce to conditional eigenvalue problems of standard interference
//! mappings.
//!
//! The crate is organized around a small set of building blocks:
//!
//! * [`NonnegVector`] and [`MonotoneNorm`] — vectors on the nonnegative
//!   orthant and weighted ℓ1/ℓ2/ℓ∞ norms.
//! * [`InterferenceMapping`] — an evaluatable mapping `T: R^N_+ → R^N_++`
//!   with structural metadata (affine, additive-homogeneous, general).
//! * [`solver`] — the normalized fixed-point iteration
//!   `x_{n+1} = T(x_n)/‖T(x_n)‖` with convergence diagnostics.
//! * [`asymptotic`] — asymptotic mappings `T∞`, computed analytically where
//!   structure allows and by a certified monotone limit otherwise.
//! * [`num`] — the canonical utility maximization problem across power
//!   budgets: utility, power, energy efficiency, tight upper bounds, and
//!   the noise-limited/interference-limited transition point.
//! * [`scenario`] — synthetic wireless scenarios materialized as affine
//!   interference mappings.

pub mod asymptotic;
pub mod axioms;
pub mod error;
pub mod mapping;
pub mod norm;
pub mod num;
pub mod scenario;
pub mod solver;
pub mod vector;

pub use asymptotic::{AsymptoticMapping, LimitEstimate, Provenance};
pub use axioms::{validate_interference_axioms, AxiomFailure, AxiomReport};
pub use error::Error;
pub use mapping::InterferenceMapping;
pub use norm::{norm_equivalence_alpha, MonotoneNorm, NormKind};
pub use num::{
    ee_bound, lambda_infinity, logspace, solve_num, sweep, theta_interval, utility_bound,
    AsymptoticSolution, NumProblem, PerformancePoint, Regime, SweepOptions, SweepResult,
};
pub use scenario::{
    build_mapping, generate_scenario, load_scenario, save_scenario, NetworkScenario,
    ScenarioConfig,
};
pub use solver::{
    solve_conditional_eigen, solve_homogeneous_eigen, EigenSolution, SolverConfig, TraceRow,
};
pub use vector::NonnegVector;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
