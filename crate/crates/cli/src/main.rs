//! `condeig` command line: generate scenarios, solve single budgets, run
//! power sweeps, print asymptotic bounds, and validate interference axioms.
//!
//! Data goes to the output stream (or `--out`), diagnostics to stderr.
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use condeig::{
    build_mapping, generate_scenario, lambda_infinity, load_scenario, logspace, save_scenario,
    solve_num, sweep, validate_interference_axioms, Error, MonotoneNorm, NormKind, NumProblem,
    ScenarioConfig, SolverConfig, SweepOptions,
};

#[derive(Parser)]
#[command(
    name = "condeig",
    about = "Conditional eigenvalue solvers for interference mappings: \
             utility, energy efficiency, and their tight bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scenario file.
    Gen(GenArgs),
    /// Solve a single power budget and print the result as JSON.
    Solve(SolveArgs),
    /// Sweep a log-spaced budget grid and write a CSV.
    Sweep(SweepArgs),
    /// Print the asymptotic eigenvalue, utility limit, transition point,
    /// and norm-equivalence constant as JSON.
    Bounds(BoundsArgs),
    /// Check the interference axioms on random samples.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of transmitter-receiver pairs.
    #[arg(long)]
    links: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Side of the square deployment area, meters.
    #[arg(long, default_value_t = 100.0)]
    area_side: f64,
    #[arg(long, default_value_t = 3.7)]
    path_loss_exponent: f64,
    /// Reference loss at 1 m, dB.
    #[arg(long, default_value_t = 30.0)]
    reference_loss_db: f64,
    #[arg(long, default_value_t = -154.0, allow_negative_numbers = true)]
    noise_psd_dbm_per_hz: f64,
    #[arg(long, default_value_t = 1e7)]
    bandwidth_hz: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    target_sinr_db: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value = "linf")]
    norm_a: String,
    /// Norm for the energy-efficiency measure; defaults to --norm-a.
    #[arg(long)]
    norm_b: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: SolverArgs,
    /// Power budget, linear watts.
    #[arg(long)]
    pbar: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: SolverArgs,
    #[arg(long)]
    pbar_min: f64,
    #[arg(long)]
    pbar_max: f64,
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Thread count for independent solves.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed each solve with the previous budget's solution (sequential).
    #[arg(long)]
    warm_start: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    common: SolverArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("NUM_LOG", "error"),
    )
    .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 1 for usage-level problems, 2 for numerical failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. }
        | Error::PossiblyNonPrimitive { .. }
        | Error::DegenerateMapping
        | Error::AssumptionViolated { .. }
        | Error::UnboundedUtility
        | Error::MonotonicityViolation(_)
        | Error::SweepAborted { .. }
        | Error::NotInterferenceFunction { .. }
        | Error::LimitOverflow { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Bounds(args) => bounds(args),
        Command::Validate(args) => validate(args),
    }
}

fn write_output(out: &Option<PathBuf>, data: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, data)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(data.as_bytes())?;
        }
    }
    Ok(())
}

fn json(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

impl SolverArgs {
    fn norms(&self, dim: usize) -> Result<(MonotoneNorm, MonotoneNorm), Error> {
        let kind_a: NormKind = self.norm_a.parse()?;
        let kind_b: NormKind = match &self.norm_b {
            Some(s) => s.parse()?,
            None => kind_a,
        };
        Ok((
            MonotoneNorm::unit(kind_a, dim),
            MonotoneNorm::unit(kind_b, dim),
        ))
    }

    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tol,
            max_iterations: self.max_iter,
            ..SolverConfig::default()
        }
    }
}

fn gen(args: GenArgs) -> Result<(), Error> {
    let config = ScenarioConfig {
        num_links: args.links,
        area_side: args.area_side,
        path_loss_exponent: args.path_loss_exponent,
        reference_loss_db: args.reference_loss_db,
        noise_psd_dbm_per_hz: args.noise_psd_dbm_per_hz,
        bandwidth_hz: args.bandwidth_hz,
        target_sinr_db: args.target_sinr_db,
        seed: args.seed,
    };
    let scenario = generate_scenario(&config)?;
    match &args.out {
        Some(path) => save_scenario(&scenario, path)?,
        None => write_output(&None, &condeig::scenario::scenario_to_string(&scenario)?)?,
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<(), Error> {
    let scenario = load_scenario(&args.common.scenario)?;
    let mapping = build_mapping(&scenario)?;
    let (norm_a, norm_b) = args.common.norms(mapping.dim())?;
    let problem = NumProblem {
        mapping,
        norm_a,
        norm_b,
        p_bar: args.pbar,
    };
    let point = solve_num(&problem, &args.common.solver_config())?;
    write_output(&args.common.out, &json(&point))
}

fn run_sweep(args: SweepArgs) -> Result<(), Error> {
    let scenario = load_scenario(&args.common.scenario)?;
    let mapping = build_mapping(&scenario)?;
    let (norm_a, norm_b) = args.common.norms(mapping.dim())?;
    let grid = logspace(args.pbar_min, args.pbar_max, args.points)?;
    let opts = SweepOptions {
        warm_start: args.warm_start,
        jobs: args.jobs,
    };
    let result = sweep(
        &mapping,
        &norm_a,
        &norm_b,
        &grid,
        &args.common.solver_config(),
        &opts,
    )?;
    write_output(&args.common.out, &result.to_csv())
}

fn bounds(args: BoundsArgs) -> Result<(), Error> {
    let scenario = load_scenario(&args.common.scenario)?;
    let mapping = build_mapping(&scenario)?;
    let (norm_a, norm_b) = args.common.norms(mapping.dim())?;
    let alpha = condeig::norm_equivalence_alpha(&norm_a, &norm_b)?;
    let solution = lambda_infinity(&mapping, &norm_a, &args.common.solver_config());

    #[derive(serde::Serialize)]
    struct BoundsOut {
        lambda_inf: f64,
        sup_utility: f64,
        p_bar_t: f64,
        alpha: f64,
    }

    match solution {
        Ok(sol) => write_output(
            &args.common.out,
            &json(&BoundsOut {
                lambda_inf: sol.lambda_inf,
                sup_utility: sol.sup_utility,
                p_bar_t: sol.transition_point,
                alpha,
            }),
        ),
        Err(Error::AssumptionViolated { lambda, partial }) => {
            // Still print the partial limits, then fail with the numerical
            // exit code: the bounds do not apply.
            write_output(
                &args.common.out,
                &json(&BoundsOut {
                    lambda_inf: partial.lambda_inf,
                    sup_utility: partial.sup_utility,
                    p_bar_t: partial.transition_point,
                    alpha,
                }),
            )?;
            Err(Error::AssumptionViolated { lambda, partial })
        }
        Err(e) => Err(e),
    }
}

fn validate(args: ValidateArgs) -> Result<(), Error> {
    let scenario = load_scenario(&args.scenario)?;
    let mapping = build_mapping(&scenario)?;
    let report = validate_interference_axioms(&mapping, args.samples, args.seed)?;
    write_output(&args.out, &json(&report))
}
