//! Command-line surface. Every command renders its output to a `String`;
//! [`run`] sends it to stdout or to the `--out` file.
//!
//! Exit codes: 0 success, 1 numeric or runtime failure, 2 usage error.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fpower_core::interval::{minlen_positions, power_ci, sigma_ci_equal_tail};
use fpower_core::power::{
    power_at_delta, power_at_sigma, NoncentralityMap, TestDesign, TwoSidedTSpec,
};

use crate::data::{parse_observations, SampleSummary};
use crate::format::{self, sig10, Csv};
use crate::mcsim::{self, IntervalRule, SimConfig};

/// Largest tolerated fraction of failed min-length searches in `coverage`.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fpower_core::Error> for CliError {
    fn from(e: fpower_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "fpower",
    version,
    about = "Power of F-tests and confidence intervals for power"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Power of the level-alpha F-test at a noncentrality.
    Power(PowerArgs),
    /// Confidence interval for the power of the two-sided test of a mean.
    Ci(CiArgs),
    /// Power estimate and interval curves over the standardized effect.
    Figure1(Figure1Args),
    /// Monte Carlo coverage of sigma and power intervals.
    Coverage(CoverageArgs),
    /// Quantile positions that minimize the power-interval length.
    Minlen(MinlenArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("effect").required(true).args(["delta", "sigma"])))]
pub struct PowerArgs {
    #[arg(long)]
    pub u: f64,
    #[arg(long)]
    pub v: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Noncentrality on the distance scale.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Error scale; needs --lambda.
    #[arg(long, requires = "lambda")]
    pub sigma: Option<f64>,
    /// Effect constant, delta = lambda / sigma.
    #[arg(long, requires = "sigma")]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["data_file", "q"])))]
pub struct CiArgs {
    /// Sample size; required with --q.
    #[arg(long, requires = "q")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    /// Alternative mean.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Null mean.
    #[arg(long, allow_negative_numbers = true)]
    pub mu0: f64,
    /// One observation per line.
    #[arg(long)]
    pub data_file: Option<PathBuf>,
    /// Residual sum of squares.
    #[arg(long, requires = "n")]
    pub q: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 81)]
    pub grid_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    #[value(name = "equal_tail", alias = "equal-tail")]
    EqualTail,
    #[value(name = "min_length", alias = "min-length")]
    MinLength,
}

impl From<RuleArg> for IntervalRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::EqualTail => IntervalRule::EqualTail,
            RuleArg::MinLength => IntervalRule::MinLength,
        }
    }
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long, value_enum, default_value = "equal_tail")]
    pub rule: RuleArg,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10_000)]
    pub replicates: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MinlenArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub v: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long)]
    pub u: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub lambda: f64,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn cmd_power(args: &PowerArgs) -> CliResult<String> {
    let design = TestDesign::new(args.u, args.v, args.alpha).map_err(|e| usage(e.to_string()))?;
    let power = match (args.delta, args.sigma, args.lambda) {
        (Some(delta), None, None) => power_at_delta(&design, delta)?,
        (None, Some(sigma), Some(lambda)) => {
            let map = NoncentralityMap::new(lambda).map_err(|e| usage(e.to_string()))?;
            power_at_sigma(&design, &map, sigma)?
        }
        _ => {
            return Err(usage(
                "give exactly one of --delta or --sigma with --lambda",
            ))
        }
    };
    let mut out = String::new();
    format::line(&mut out, power);
    Ok(out)
}

pub fn cmd_ci(args: &CiArgs) -> CliResult<String> {
    let summary = match (&args.data_file, args.q, args.n) {
        (Some(path), None, None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let values =
                parse_observations(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            SampleSummary::from_observations(&values)
        }
        (None, Some(q), Some(n)) => SampleSummary {
            n,
            mean: f64::NAN,
            q,
            s: (q / n as f64).sqrt(),
        },
        _ => return Err(usage("give either --data-file or both --q and --n")),
    };
    if !(summary.q > 0.0) {
        return Err(CliError::Runtime(
            "residual sum of squares is zero; a degenerate sample has no interval".into(),
        ));
    }
    let spec = TwoSidedTSpec::new(summary.n, args.mu0, args.mu)?;
    let design = spec.design(args.alpha)?;
    let map = spec.map();
    let sigma_ci = sigma_ci_equal_tail(summary.q, (summary.n - 1) as f64, args.gamma)?;
    let power = power_ci(&sigma_ci, &design, &map)?;
    let mle = power_at_sigma(&design, &map, summary.s)?;

    let mut csv = Csv::new(&["a", "b", "power_lo", "power_hi", "power_mle"]);
    csv.numeric_row(&[sigma_ci.lower, sigma_ci.upper, power.lo, power.hi, mle]);
    Ok(csv.finish())
}

/// One row of the curve table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub effect: f64,
    pub power_mle: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Power estimate and interval at each standardized effect `e = (μ - μ0)/S`
/// with `S = 1`, so `q = n` and `λ = √n |e|`.
pub fn figure1_rows(args: &Figure1Args) -> CliResult<Vec<CurveRow>> {
    if args.grid_steps < 2 {
        return Err(usage("--grid-steps must be at least 2"));
    }
    if !(args.grid_min < args.grid_max) || !args.grid_min.is_finite() || !args.grid_max.is_finite()
    {
        return Err(usage("--grid-min must be finite and below --grid-max"));
    }
    if args.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let n = args.n as f64;
    let design = TestDesign::new(1.0, n - 1.0, args.alpha)?;
    let sigma_ci = sigma_ci_equal_tail(n, n - 1.0, args.gamma)?;
    let span = args.grid_max - args.grid_min;
    let last = (args.grid_steps - 1) as f64;
    (0..args.grid_steps)
        .map(|i| {
            let effect = args.grid_min + span * i as f64 / last;
            let map = NoncentralityMap::new(n.sqrt() * effect.abs())?;
            let power = power_ci(&sigma_ci, &design, &map)?;
            Ok(CurveRow {
                effect,
                power_mle: power_at_sigma(&design, &map, 1.0)?,
                ci_lo: power.lo,
                ci_hi: power.hi,
            })
        })
        .collect()
}

pub fn cmd_figure1(args: &Figure1Args) -> CliResult<String> {
    let mut csv = Csv::new(&["effect", "power_mle", "ci_lo", "ci_hi"]);
    for row in figure1_rows(args)? {
        csv.numeric_row(&[row.effect, row.power_mle, row.ci_lo, row.ci_hi]);
    }
    Ok(csv.finish())
}

pub fn cmd_coverage(args: &CoverageArgs) -> CliResult<String> {
    let cfg = SimConfig {
        seed: args.seed,
        replicates: args.replicates,
        n: args.n,
        mu: args.mu,
        mu0: args.mu0,
        sigma: args.sigma,
        alpha: args.alpha,
        gamma: args.gamma,
        rule: args.rule.into(),
    };
    let workers = args.workers.unwrap_or_else(mcsim::default_workers);
    if workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    let outcome = mcsim::coverage_experiment(&cfg, workers)?;

    let mut csv = Csv::new(&[
        "interval",
        "rule",
        "hits",
        "replicates",
        "coverage",
        "std_err",
        "nominal",
        "coverage_guaranteed",
        "optimizer_failures",
        "indicator_mismatches",
    ]);
    for (name, report) in [("sigma", &outcome.sigma), ("power", &outcome.power)] {
        csv.row([
            name.to_owned(),
            report.rule.name().to_owned(),
            report.hits.to_string(),
            report.replicates.to_string(),
            sig10(report.coverage),
            sig10(report.std_err),
            sig10(report.nominal),
            outcome.coverage_guaranteed.to_string(),
            outcome.optimizer_failures.to_string(),
            outcome.mismatches.to_string(),
        ]);
    }
    let failure_fraction = outcome.optimizer_failures as f64 / args.replicates as f64;
    if failure_fraction > MAX_FAILURE_FRACTION {
        return Err(CliError::Runtime(format!(
            "min-length search failed on {} of {} replicates",
            outcome.optimizer_failures, args.replicates
        )));
    }
    Ok(csv.finish())
}

pub fn cmd_minlen(args: &MinlenArgs) -> CliResult<String> {
    if !(args.lambda > 0.0) {
        return Err(usage(
            "--lambda must be positive; with no effect every interval has zero length",
        ));
    }
    let design = TestDesign::new(args.u, args.v, args.alpha).map_err(|e| usage(e.to_string()))?;
    let map = NoncentralityMap::new(args.lambda).map_err(|e| usage(e.to_string()))?;
    let res = minlen_positions(args.q, args.v, args.gamma, &design, &map)?;
    let mut csv = Csv::new(&[
        "A",
        "B",
        "a",
        "b",
        "power_lo",
        "power_hi",
        "L",
        "L_equal_tail",
    ]);
    csv.numeric_row(&[
        res.sigma.lower_position,
        res.sigma.upper_position,
        res.sigma.lower,
        res.sigma.upper,
        res.power.lo,
        res.power.hi,
        res.length,
        res.equal_tail_length,
    ]);
    Ok(csv.finish())
}

pub fn execute(command: &Command) -> CliResult<String> {
    match command {
        Command::Power(a) => cmd_power(a),
        Command::Ci(a) => cmd_ci(a),
        Command::Figure1(a) => cmd_figure1(a),
        Command::Coverage(a) => cmd_coverage(a),
        Command::Minlen(a) => cmd_minlen(a),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let output = execute(&cli.command)?;
    match &cli.out {
        Some(path) => fs::write(path, output)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}
