//! Normalized fixed-point iteration `x_{n+1} = T(x_n) / ‖T(x_n)‖` for
//! conditional eigenvalue problems of standard interference mappings and of
//! positively homogeneous (asymptotic) mappings.

use serde::Serialize;

use crate::asymptotic::AsymptoticMapping;
use crate::error::Error;
use crate::mapping::InterferenceMapping;
use crate::norm::MonotoneNorm;
use crate::vector::{linf_distance, NonnegVector};
use crate::Result;

/// One row of the iteration trace.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    /// `λ_n = ‖T(x_n)‖` under the solve norm.
    pub lambda: f64,
    /// `‖x_{n+1} − x_n‖_∞`.
    pub displacement: f64,
    /// `‖T(x_n) − λ_n x_n‖_∞`.
    pub residual: f64,
}

/// Solver configuration shared by both eigensolvers.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Strictly positive start; defaults to normalized all-ones.
    pub initial_point: Option<NonnegVector>,
    /// Record per-iteration (λ, displacement, residual) rows.
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100_000,
            initial_point: None,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if let Some(x0) = &self.initial_point {
            if x0.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: x0.dim(),
                });
            }
            if !x0.is_strictly_positive() {
                return Err(Error::InvalidConfig(
                    "initial point must be strictly positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Solution of `T(x) = λx`, `‖x‖ = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenSolution {
    pub x_star: NonnegVector,
    pub lambda_star: f64,
    pub iterations: usize,
    /// `‖T(x*) − λ* x*‖_∞`.
    pub residual: f64,
    pub trace: Option<Vec<TraceRow>>,
    /// For affine-structured homogeneous solves: whether the gain matrix
    /// passed the primitivity (irreducibility + aperiodicity) reachability
    /// check. `None` when the check does not apply.
    pub primitive: Option<bool>,
}

impl EigenSolution {
    /// Trace rows as CSV: `iteration,lambda_n,displacement,residual`.
    pub fn trace_csv(&self) -> Option<String> {
        let trace = self.trace.as_ref()?;
        let mut out = String::from("iteration,lambda_n,displacement,residual\n");
        for row in trace {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e}\n",
                row.iteration, row.lambda, row.displacement, row.residual
            ));
        }
        Some(out)
    }
}

/// Solve the conditional eigenvalue problem for a standard interference
/// mapping: find `(x, λ)` with `T(x) = λx` and `‖x‖ = 1`.
///
/// Stops only when both the iterate displacement and the eigen-residual fall
/// below the tolerance; displacement alone can stop early when convergence
/// is slow, and the residual is the quantity the solution certifies.
pub fn solve_conditional_eigen(
    t: &InterferenceMapping,
    norm: &MonotoneNorm,
    cfg: &SolverConfig,
) -> Result<EigenSolution> {
    if t.dim() != norm.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            got: norm.dim(),
        });
    }
    cfg.validate(t.dim())?;
    iterate(|x| t.eval_raw(x), t.dim(), norm, cfg, false, None)
}

/// Solve `T∞(x) = λx`, `‖x‖ = 1` for a positively homogeneous mapping.
///
/// Positive homogeneity is spot-checked by sampling before iterating. A
/// mapping outside Fact-style primitivity hypotheses can cycle or collapse
/// to zero; both are reported as distinguished errors rather than accepted.
pub fn solve_homogeneous_eigen(
    t_inf: &AsymptoticMapping,
    norm: &MonotoneNorm,
    cfg: &SolverConfig,
) -> Result<EigenSolution> {
    if t_inf.dim() != norm.dim() {
        return Err(Error::DimensionMismatch {
            expected: t_inf.dim(),
            got: norm.dim(),
        });
    }
    cfg.validate(t_inf.dim())?;
    check_homogeneity(t_inf, cfg)?;

    let primitive = t_inf.matrix().map(|a| {
        let ok = is_primitive_matrix(a, t_inf.dim());
        if !ok {
            log::warn!(
                "gain matrix failed the primitivity reachability check; the \
                 homogeneous eigenproblem may not have a unique positive solution"
            );
        }
        ok
    });

    let mut solution = iterate(
        |x| t_inf.eval_slice(x),
        t_inf.dim(),
        norm,
        cfg,
        true,
        primitive,
    )?;
    solution.primitive = primitive;
    Ok(solution)
}

fn check_homogeneity(t_inf: &AsymptoticMapping, cfg: &SolverConfig) -> Result<()> {
    let dim = t_inf.dim();
    let x = cfg
        .initial_point
        .clone()
        .unwrap_or_else(|| NonnegVector::ones(dim));
    let tx = t_inf.eval_slice(x.as_slice())?;
    let x2: Vec<f64> = x.as_slice().iter().map(|v| 2.0 * v).collect();
    let tx2 = t_inf.eval_slice(&x2)?;
    let scaled: Vec<f64> = tx.iter().map(|v| 2.0 * v).collect();
    let deviation = linf_distance(&tx2, &scaled);
    let norm_tx = tx.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    if deviation > 1e-8 * norm_tx.max(1e-300) {
        return Err(Error::NotHomogeneous { deviation });
    }
    Ok(())
}

fn iterate(
    eval: impl Fn(&[f64]) -> Result<Vec<f64>>,
    dim: usize,
    norm: &MonotoneNorm,
    cfg: &SolverConfig,
    homogeneous: bool,
    _primitive: Option<bool>,
) -> Result<EigenSolution> {
    let x0 = cfg
        .initial_point
        .clone()
        .unwrap_or_else(|| NonnegVector::ones(dim));
    let n0 = norm.eval(&x0)?;
    if !(n0 > 0.0) {
        return Err(Error::InvalidConfig("initial point has zero norm".into()));
    }
    let mut x: Vec<f64> = x0.as_slice().iter().map(|v| v / n0).collect();

    let mut trace: Vec<TraceRow> = Vec::new();
    let mut displacement = f64::INFINITY;
    let mut last_residual = f64::INFINITY;

    for iteration in 1..=cfg.max_iterations {
        let y = eval(&x)?;
        let lambda = norm.eval_slice(&y);
        if !lambda.is_finite() {
            return Err(Error::NonPositiveOutput {
                index: 0,
                value: lambda,
            });
        }
        if lambda <= 0.0 {
            // Interference mappings are strictly positive, so this can only
            // happen for a degenerate homogeneous mapping.
            return Err(Error::DegenerateMapping);
        }
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let residual = linf_distance(&y, &scaled);
        last_residual = residual;

        let x_next: Vec<f64> = y.iter().map(|v| v / lambda).collect();
        let step = linf_distance(&x_next, &x);
        if cfg.record_trace {
            trace.push(TraceRow {
                iteration,
                lambda,
                displacement: step,
                residual,
            });
        }

        if residual <= cfg.tolerance && displacement <= cfg.tolerance {
            return Ok(EigenSolution {
                x_star: NonnegVector::new(x)?,
                lambda_star: lambda,
                iterations: iteration,
                residual,
                trace: cfg.record_trace.then_some(trace),
                primitive: None,
            });
        }

        displacement = step;
        x = x_next;
    }

    if homogeneous {
        Err(Error::PossiblyNonPrimitive {
            iterations: cfg.max_iterations,
            residual: last_residual,
            last_iterate: x,
            trace,
        })
    } else {
        Err(Error::NonConvergence {
            iterations: cfg.max_iterations,
            residual: last_residual,
            last_iterate: x,
            trace,
        })
    }
}

/// Primitivity test for a nonnegative matrix by boolean reachability.
///
/// A nonnegative `A` is primitive iff `(A^k)_{ij} > 0` for all `i, j` at
/// `k = N² − 2N + 2` (the Wielandt exponent). `a` is row-major `N × N`.
pub fn is_primitive_matrix(a: &[f64], n: usize) -> bool {
    assert_eq!(a.len(), n * n);
    if n == 1 {
        return a[0] > 0.0;
    }
    let mut reach: Vec<bool> = a.iter().map(|&v| v > 0.0).collect();
    let base = reach.clone();
    let wielandt = n * n - 2 * n + 2;
    // reach holds A^k as a boolean matrix; stop early once all-positive.
    for _ in 1..wielandt {
        if reach.iter().all(|&b| b) {
            return true;
        }
        let mut next = vec![false; n * n];
        for i in 0..n {
            for k in 0..n {
                if reach[i * n + k] {
                    for j in 0..n {
                        if base[k * n + j] {
                            next[i * n + j] = true;
                        }
                    }
                }
            }
        }
        reach = next;
    }
    reach.iter().all(|&b| b)
}
