//! The canonical network utility maximization problem across power budgets:
//! solve `p = c T(p)` with `‖p‖_a ≤ p̄` via the scaled-norm conditional
//! eigenproblem, evaluate utility / power / energy efficiency, the tight
//! upper bounds from the asymptotic mapping, and the transition point
//! between the noise-limited and interference-limited regimes.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotic::build_asymptotic_mapping;
use crate::error::Error;
use crate::mapping::{InterferenceMapping, Structure};
use crate::norm::{norm_equivalence_alpha, MonotoneNorm, NormKind};
use crate::solver::{solve_conditional_eigen, solve_homogeneous_eigen, SolverConfig};
use crate::vector::NonnegVector;
use crate::Result;

/// A canonical problem instance: mapping, budget norm, efficiency norm, and
/// power budget in linear watts.
#[derive(Debug, Clone)]
pub struct NumProblem {
    pub mapping: InterferenceMapping,
    pub norm_a: MonotoneNorm,
    pub norm_b: MonotoneNorm,
    pub p_bar: f64,
}

impl NumProblem {
    fn validate(&self) -> Result<()> {
        if self.norm_a.dim() != self.mapping.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.mapping.dim(),
                got: self.norm_a.dim(),
            });
        }
        if self.norm_b.dim() != self.mapping.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.mapping.dim(),
                got: self.norm_b.dim(),
            });
        }
        if !(self.p_bar > 0.0) || !self.p_bar.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "power budget must be positive and finite, got {}",
                self.p_bar
            )));
        }
        Ok(())
    }
}

/// Operating regime relative to the transition point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "low-power")]
    LowPower,
    #[serde(rename = "high-power")]
    HighPower,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::LowPower => "low-power",
            Regime::HighPower => "high-power",
        })
    }
}

/// One solved budget: the optimal power vector, utility, energy efficiency,
/// and the matching upper bounds. Bounds are `+inf` when the asymptotic
/// eigenvalue is zero (no interference limit).
#[derive(Debug, Clone, Serialize)]
pub struct PerformancePoint {
    pub p_bar: f64,
    pub utility: f64,
    pub power: NonnegVector,
    pub energy_efficiency: f64,
    pub utility_bound: f64,
    pub ee_bound: f64,
    pub regime: Regime,
    pub iterations: usize,
    pub residual: f64,
}

/// Solution of the asymptotic eigenproblem `T∞(x) = λx`, `‖x‖_a = 1`,
/// together with the derived limits: `sup U = 1/λ∞` and the transition
/// point `p̄_T = ‖T(0)‖_a / λ∞`. Both are `+inf` when `λ∞ = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticSolution {
    pub lambda_inf: f64,
    pub x_inf: NonnegVector,
    pub sup_utility: f64,
    pub transition_point: f64,
}

/// Solve the asymptotic eigenproblem for a mapping under the budget norm.
///
/// The performance bounds assume a strictly positive unique eigenpair; a
/// zero eigenvalue (e.g. a constant mapping, whose `T∞` is identically
/// zero) or an eigenvector with a vanishing coordinate is reported as an
/// [`Error::AssumptionViolated`] carrying the partial solution, so callers
/// can still surface `sup U = ∞` and `p̄_T = ∞` as a distinguished outcome.
pub fn lambda_infinity(
    t: &InterferenceMapping,
    norm_a: &MonotoneNorm,
    cfg: &SolverConfig,
) -> Result<AsymptoticSolution> {
    let t_inf = build_asymptotic_mapping(t, cfg.tolerance)?;
    let t0_a = norm_a.eval(&t.at_zero()?)?;

    let solved = match solve_homogeneous_eigen(&t_inf, norm_a, cfg) {
        Ok(sol) => sol,
        Err(Error::DegenerateMapping) => {
            let partial = AsymptoticSolution {
                lambda_inf: 0.0,
                x_inf: NonnegVector::zeros(t.dim()),
                sup_utility: f64::INFINITY,
                transition_point: f64::INFINITY,
            };
            return Err(Error::AssumptionViolated {
                lambda: 0.0,
                partial: Box::new(partial),
            });
        }
        Err(e) => return Err(e),
    };

    let lambda = solved.lambda_star;
    let solution = AsymptoticSolution {
        lambda_inf: lambda,
        x_inf: solved.x_star.clone(),
        sup_utility: if lambda > 1e-12 { 1.0 / lambda } else { f64::INFINITY },
        transition_point: if lambda > 1e-12 { t0_a / lambda } else { f64::INFINITY },
    };

    let min_coord = solved
        .x_star
        .as_slice()
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(v));
    if lambda <= 1e-12 || min_coord <= 1e-10 {
        return Err(Error::AssumptionViolated {
            lambda,
            partial: Box::new(solution),
        });
    }
    Ok(solution)
}

/// `lambda_infinity` with the assumption-violated outcome folded back into
/// an ordinary value, for callers that only need the limits.
fn lambda_infinity_lenient(
    t: &InterferenceMapping,
    norm_a: &MonotoneNorm,
    cfg: &SolverConfig,
) -> Result<AsymptoticSolution> {
    match lambda_infinity(t, norm_a, cfg) {
        Ok(solution) => Ok(solution),
        Err(Error::AssumptionViolated { partial, .. }) => Ok(*partial),
        Err(e) => Err(e),
    }
}

/// Utility upper bound: `min{ p̄/‖T(0)‖_a, 1/λ∞ }`.
pub fn utility_bound(
    t: &InterferenceMapping,
    norm_a: &MonotoneNorm,
    lambda_inf: f64,
    p_bar: f64,
) -> Result<f64> {
    if !(lambda_inf > 0.0) {
        return Err(Error::UnboundedUtility);
    }
    let t0_a = norm_a.eval(&t.at_zero()?)?;
    if p_bar <= t0_a / lambda_inf {
        Ok(p_bar / t0_a)
    } else {
        Ok(1.0 / lambda_inf)
    }
}

/// Energy-efficiency upper bound: `min{ 1/‖T(0)‖_b, α/(λ∞ p̄) }` with the
/// tightest closed-form `α` satisfying `‖x‖_a ≤ α‖x‖_b`.
pub fn ee_bound(
    t: &InterferenceMapping,
    norm_a: &MonotoneNorm,
    norm_b: &MonotoneNorm,
    lambda_inf: f64,
    p_bar: f64,
) -> Result<f64> {
    if !(lambda_inf > 0.0) {
        return Err(Error::UnboundedUtility);
    }
    let t0_b = norm_b.eval(&t.at_zero()?)?;
    let alpha = norm_equivalence_alpha(norm_a, norm_b)?;
    Ok((1.0 / t0_b).min(alpha / (lambda_inf * p_bar)))
}

/// Interval `[1/‖T(β·1)‖_b, α/λ∞]` that contains `E(p̄)·p̄` for large `p̄`,
/// with `β` the equivalence constant of `‖·‖_∞` against `‖·‖_a`.
pub fn theta_interval(
    t: &InterferenceMapping,
    norm_a: &MonotoneNorm,
    norm_b: &MonotoneNorm,
    lambda_inf: f64,
) -> Result<(f64, f64)> {
    if !(lambda_inf > 0.0) {
        return Err(Error::UnboundedUtility);
    }
    let linf = MonotoneNorm::unit(NormKind::Linf, t.dim());
    let beta = norm_equivalence_alpha(&linf, norm_a)?;
    let beta_ones = NonnegVector::ones(t.dim()).scale(beta)?;
    let lower = 1.0 / norm_b.eval(&t.eval(&beta_ones)?)?;
    let alpha = norm_equivalence_alpha(norm_a, norm_b)?;
    Ok((lower, alpha / lambda_inf))
}

/// Budget-normalized mapping `T̃(y) = T(p̄·y)/p̄`.
///
/// `T̃(y) = λy` with `‖y‖_a = 1` iff `T(x) = λx` with `‖x‖_a = p̄` at
/// `x = p̄·y`, so the Fact-2 reduction can run in variables of order one:
/// an absolute stopping tolerance is then meaningful at every budget scale,
/// where iterating on physical powers would hit the floating-point floor for
/// large `p̄`.
fn budget_normalized(t: &InterferenceMapping, p_bar: f64) -> Result<InterferenceMapping> {
    match t.structure() {
        Structure::Affine { gain, offset } => InterferenceMapping::affine(
            gain.clone(),
            offset.iter().map(|b| b / p_bar).collect(),
        ),
        Structure::AdditiveHomogeneous { homogeneous, offset } => {
            let g = homogeneous.clone();
            InterferenceMapping::additive_homogeneous(
                t.dim(),
                move |y: &[f64]| {
                    let x: Vec<f64> = y.iter().map(|v| v * p_bar).collect();
                    g(&x).iter().map(|v| v / p_bar).collect()
                },
                offset.iter().map(|b| b / p_bar).collect(),
            )
        }
        Structure::General { evaluator } => {
            let f = evaluator.clone();
            InterferenceMapping::general(t.dim(), move |y: &[f64]| {
                let x: Vec<f64> = y.iter().map(|v| v * p_bar).collect();
                f(&x).iter().map(|v| v / p_bar).collect()
            })
        }
    }
}

fn solve_point(
    problem: &NumProblem,
    asym: &AsymptoticSolution,
    cfg: &SolverConfig,
) -> Result<PerformancePoint> {
    problem.validate()?;
    // Fact-2 reduction: solve T(x) = λx under ‖x‖ = ‖x‖_a / p̄, run in
    // budget-normalized variables; the reported residual refers to those
    // normalized units.
    let scaled = budget_normalized(&problem.mapping, problem.p_bar)?;
    let solution = solve_conditional_eigen(&scaled, &problem.norm_a, cfg)?;

    let power = solution.x_star.scale(problem.p_bar)?;
    let utility = 1.0 / solution.lambda_star;
    let power_b = problem.norm_b.eval(&power)?;
    let energy_efficiency = utility / power_b;

    let (utility_bnd, ee_bnd) = if asym.lambda_inf > 1e-12 {
        (
            utility_bound(&problem.mapping, &problem.norm_a, asym.lambda_inf, problem.p_bar)?,
            ee_bound(
                &problem.mapping,
                &problem.norm_a,
                &problem.norm_b,
                asym.lambda_inf,
                problem.p_bar,
            )?,
        )
    } else {
        (f64::INFINITY, f64::INFINITY)
    };

    let regime = if problem.p_bar > asym.transition_point {
        Regime::HighPower
    } else {
        Regime::LowPower
    };

    Ok(PerformancePoint {
        p_bar: problem.p_bar,
        utility,
        power,
        energy_efficiency,
        utility_bound: utility_bnd,
        ee_bound: ee_bnd,
        regime,
        iterations: solution.iterations,
        residual: solution.residual,
    })
}

/// Solve the canonical problem at a single power budget.
pub fn solve_num(problem: &NumProblem, cfg: &SolverConfig) -> Result<PerformancePoint> {
    problem.validate()?;
    let asym = lambda_infinity_lenient(&problem.mapping, &problem.norm_a, cfg)?;
    solve_point(problem, &asym, cfg)
}

/// Sweep execution options.
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Seed each solve with the previous budget's normalized iterate.
    /// Forces sequential execution; the default (independent solves) keeps
    /// monotonicity checks untainted by path effects.
    pub warm_start: bool,
    /// Thread count for independent solves; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// A full power-budget sweep with its asymptotic header.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub asymptotic: AsymptoticSolution,
    /// Equivalence constant used in the energy-efficiency bound.
    pub alpha: f64,
    pub points: Vec<PerformancePoint>,
}

/// Solve one [`PerformancePoint`] per grid value.
///
/// The grid must be strictly increasing and positive. After solving, the
/// Fact-2 monotonicity laws are asserted across the grid: utility and every
/// power coordinate increase, energy efficiency does not increase.
pub fn sweep(
    mapping: &InterferenceMapping,
    norm_a: &MonotoneNorm,
    norm_b: &MonotoneNorm,
    p_bar_grid: &[f64],
    cfg: &SolverConfig,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    if p_bar_grid.is_empty() {
        return Err(Error::InvalidConfig("sweep grid is empty".into()));
    }
    for pair in p_bar_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::InvalidConfig(format!(
                "sweep grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if !(p_bar_grid[0] > 0.0) {
        return Err(Error::InvalidConfig("sweep grid values must be positive".into()));
    }

    let asym = lambda_infinity_lenient(mapping, norm_a, cfg)?;
    let alpha = norm_equivalence_alpha(norm_a, norm_b)?;

    let problem_at = |p_bar: f64| NumProblem {
        mapping: mapping.clone(),
        norm_a: norm_a.clone(),
        norm_b: norm_b.clone(),
        p_bar,
    };

    let results: Vec<Result<PerformancePoint>> = if opts.warm_start {
        let mut out = Vec::with_capacity(p_bar_grid.len());
        let mut warm_cfg = cfg.clone();
        for &p_bar in p_bar_grid {
            let result = solve_point(&problem_at(p_bar), &asym, &warm_cfg);
            if let Ok(point) = &result {
                warm_cfg.initial_point = Some(point.power.clone());
            }
            out.push(result);
        }
        out
    } else {
        let solve_all = || {
            p_bar_grid
                .par_iter()
                .map(|&p_bar| solve_point(&problem_at(p_bar), &asym, cfg))
                .collect()
        };
        match opts.jobs {
            Some(jobs) => rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
                .install(solve_all),
            None => solve_all(),
        }
    };

    let mut points = Vec::with_capacity(results.len());
    for (index, result) in results.into_iter().enumerate() {
        match result {
            Ok(point) => points.push(point),
            Err(source) => {
                let p_bar = p_bar_grid[index];
                let partial = SweepResult {
                    asymptotic: asym.clone(),
                    alpha,
                    points: std::mem::take(&mut points),
                };
                return Err(Error::SweepAborted {
                    p_bar,
                    partial: Box::new(partial),
                    source: Box::new(source),
                });
            }
        }
    }

    check_monotonicity(&points)?;
    Ok(SweepResult {
        asymptotic: asym,
        alpha,
        points,
    })
}

/// Relative slack for the monotonicity assertions.
const MONOTONE_SLACK: f64 = 1e-10;

fn check_monotonicity(points: &[PerformancePoint]) -> Result<()> {
    for pair in points.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if hi.utility < lo.utility * (1.0 - MONOTONE_SLACK) {
            return Err(Error::MonotonicityViolation(format!(
                "utility decreased from {} at p_bar={} to {} at p_bar={}",
                lo.utility, lo.p_bar, hi.utility, hi.p_bar
            )));
        }
        for i in 0..lo.power.dim() {
            if hi.power[i] < lo.power[i] * (1.0 - MONOTONE_SLACK) {
                return Err(Error::MonotonicityViolation(format!(
                    "power coordinate {i} decreased from {} to {} between p_bar={} and {}",
                    lo.power[i], hi.power[i], lo.p_bar, hi.p_bar
                )));
            }
        }
        if hi.energy_efficiency > lo.energy_efficiency * (1.0 + MONOTONE_SLACK) {
            return Err(Error::MonotonicityViolation(format!(
                "energy efficiency increased from {} at p_bar={} to {} at p_bar={}",
                lo.energy_efficiency, lo.p_bar, hi.energy_efficiency, hi.p_bar
            )));
        }
    }
    Ok(())
}

/// Geometric progression of `points` values between `min` and `max`.
pub fn logspace(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0) || !(max > min) {
        return Err(Error::InvalidConfig(format!(
            "logspace requires 0 < min < max, got [{min}, {max}]"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidConfig("logspace needs at least 2 points".into()));
    }
    let (lmin, lmax) = (min.ln(), max.ln());
    let step = (lmax - lmin) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                (lmin + step * i as f64).exp()
            }
        })
        .collect())
}

impl SweepResult {
    /// CSV with `#`-prefixed metadata comment lines, one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# lambda_inf={}\n", fmt_f64(self.asymptotic.lambda_inf)));
        out.push_str(&format!(
            "# p_bar_T={}\n",
            fmt_f64(self.asymptotic.transition_point)
        ));
        out.push_str(&format!(
            "# sup_utility={}\n",
            fmt_f64(self.asymptotic.sup_utility)
        ));
        out.push_str(&format!("# alpha={}\n", fmt_f64(self.alpha)));
        out.push_str("p_bar,utility,utility_bound,ee,ee_bound,iterations,residual,regime\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_f64(p.p_bar),
                fmt_f64(p.utility),
                fmt_f64(p.utility_bound),
                fmt_f64(p.energy_efficiency),
                fmt_f64(p.ee_bound),
                p.iterations,
                fmt_f64(p.residual),
                p.regime
            ));
        }
        out
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}
