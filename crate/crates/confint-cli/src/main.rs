//! `confint`: confidence intervals and coverage experiments from the
//! command line.
//!
//! Two command families:
//!
//! * `ci` computes a confidence interval for a binomial proportion
//!   (`ci binom`), a mean from a data file (`ci mean`), or a
//!   bootstrapped estimator (`ci boot`). Output is one
//!   `method lower upper` line per interval, or JSON with `--json`.
//! * `coverage` evaluates methods: exact enumeration for the binomial
//!   constructions (`coverage binom-exact`) and Monte-Carlo simulation
//!   for mean intervals (`coverage mean-cubic`) and exponential-rate
//!   ML intervals (`coverage exp-ml`). Output is CSV on stdout.
//!
//! All output is a pure function of the flags, input files, and seed:
//! rerunning a command reproduces it byte for byte.

mod input;
mod report;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use confint::bootstrap::{self, BootstrapReplicates};
use confint::coverage::{self, default_p_grid, ExperimentConfig, Family, DEFAULT_N_GRID};
use confint::numerics::RngStream;
use confint::{binom, mean, ml, BinomObservation, Error, Method, Sample};
use report::{sig6, write_coverage_csv, IntervalReport};

/// Simulation replication defaults: classical methods get the desk
/// budget, bootstrap-in-the-loop runs are an order of magnitude
/// smaller because each replication spawns 1000 inner resamples.
const DEFAULT_REPS_CLASSICAL: u64 = 100_000;
const DEFAULT_REPS_BOOTSTRAP: u64 = 10_000;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations: exit status 2.
    Usage(String),
    /// Unreadable or malformed input data: exit status 3.
    Input(String),
    /// Numeric or convergence failure in an otherwise valid request:
    /// exit status 4.
    Numeric(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            // Domain errors come from validating caller-supplied
            // parameters, which at this boundary means flags.
            Error::Domain(m) => CliError::Usage(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "confint",
    version,
    about = "Confidence intervals and coverage experiments",
    max_term_width = 80
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a confidence interval.
    #[command(subcommand)]
    Ci(CiCommand),
    /// Evaluate coverage and length of interval methods (CSV output).
    #[command(subcommand)]
    Coverage(CoverageCommand),
}

#[derive(Subcommand)]
enum CiCommand {
    /// Interval for a binomial proportion from n trials and k successes.
    Binom(BinomArgs),
    /// Interval for a mean from a file of values.
    Mean(MeanArgs),
    /// Bootstrap interval for an estimator over a file of values.
    Boot(BootArgs),
}

#[derive(Args)]
struct BinomArgs {
    /// Number of trials.
    #[arg(long)]
    n: u32,
    /// Number of successes.
    #[arg(long)]
    k: u32,
    /// Two-sided miss probability for probability-calibrated methods.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Density ratio K for the likelihood-ratio support method.
    #[arg(long, default_value_t = 8.0)]
    k_ratio: f64,
    /// Methods to compute: exact, wilson, wald, lr, hpd. Repeat or
    /// comma-separate; default is all five.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Emit a JSON array instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MeanArgs {
    /// File with one numeric value per line (# comments allowed).
    #[arg(long)]
    file: PathBuf,
    /// Two-sided miss probability for probability-calibrated methods.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Density ratio K for the likelihood-ratio support methods.
    #[arg(long, default_value_t = 8.0)]
    k_ratio: f64,
    /// Method: t, z, lr-t, lr-normal, hpd-t, hpd-normal.
    #[arg(long, default_value = "t")]
    method: String,
    /// Emit JSON instead of a text line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BootArgs {
    /// File with one numeric value per line (# comments allowed).
    #[arg(long)]
    file: PathBuf,
    /// Two-sided miss probability.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bootstrap replicates (values below 1000 draw a warning).
    #[arg(long, default_value_t = 1000)]
    r: usize,
    /// RNG seed; identical seeds reproduce identical intervals.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Estimator: mean or exp-lambda (exponential rate 1/mean).
    #[arg(long, default_value = "mean")]
    estimator: String,
    /// Interval kind: percentile, basic, or bca.
    #[arg(long, default_value = "percentile")]
    kind: String,
    /// Emit JSON instead of a text line.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum CoverageCommand {
    /// Exact coverage of binomial methods over a grid of true p.
    BinomExact(BinomExactArgs),
    /// Simulated coverage of mean intervals; data follow the density
    /// 3x^2 on [0, 1], whose true mean is 3/4.
    MeanCubic(SimArgs),
    /// Simulated coverage of exponential-rate ML intervals. Also
    /// prints, per n, the correlation between estimation error and
    /// each spread estimate on stderr.
    ExpMl(SimArgs),
}

#[derive(Args)]
struct BinomExactArgs {
    /// Number of trials.
    #[arg(long, default_value_t = 100)]
    n: u32,
    /// Two-sided miss probability for probability-calibrated methods.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Density ratio K for the likelihood-ratio support method.
    #[arg(long, default_value_t = 8.0)]
    k_ratio: f64,
    /// Methods: exact, wilson, wald, lr, hpd. Default all five.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
}

#[derive(Args)]
struct SimArgs {
    /// Sample sizes to simulate.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_GRID)]
    n: Vec<usize>,
    /// Replications per sample size. Defaults to 100000, or 10000 when
    /// any bootstrap method is requested.
    #[arg(long)]
    n_reps: Option<u64>,
    /// Two-sided miss probability.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Density ratio K for likelihood-ratio support methods.
    #[arg(long, default_value_t = 8.0)]
    k_ratio: f64,
    /// RNG seed; identical seeds reproduce identical tables.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// True exponential rate (exp-ml only).
    #[arg(long, default_value_t = 2.0)]
    true_param: f64,
    /// Methods to evaluate; default is every method the family
    /// supports. mean-cubic: t, z, lr-t, lr-normal, boot-percentile,
    /// boot-basic, boot-bca. exp-ml: hessian, jackknife, boot-*.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ci(CiCommand::Binom(args)) => cmd_ci_binom(args),
        Command::Ci(CiCommand::Mean(args)) => cmd_ci_mean(args),
        Command::Ci(CiCommand::Boot(args)) => cmd_ci_boot(args),
        Command::Coverage(CoverageCommand::BinomExact(args)) => cmd_coverage_binom(args),
        Command::Coverage(CoverageCommand::MeanCubic(args)) => cmd_coverage_sim(args, Family::MeanCubic),
        Command::Coverage(CoverageCommand::ExpMl(args)) => cmd_coverage_sim(args, Family::ExpMl),
    }
}

fn parse_method(name: &str) -> Result<Method, CliError> {
    Method::from_str(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_methods(names: &[String], default: &[Method]) -> Result<Vec<Method>, CliError> {
    if names.is_empty() {
        return Ok(default.to_vec());
    }
    names.iter().map(|s| parse_method(s)).collect()
}

fn print_reports(reports: &[IntervalReport], json: bool) -> Result<(), CliError> {
    if json {
        let body = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(reports)
        };
        println!("{}", body.expect("interval reports are plain data"));
    } else {
        for report in reports {
            println!("{}", report.text_line());
        }
    }
    Ok(())
}

fn cmd_ci_binom(args: BinomArgs) -> Result<(), CliError> {
    let methods = parse_methods(&args.method, &coverage::BINOM_METHODS)?;
    let obs = BinomObservation::new(args.n, args.k)?;
    let mut reports = Vec::with_capacity(methods.len());
    for method in methods {
        let level = if method.is_support() { args.k_ratio } else { args.alpha };
        let interval = binom::interval_for(method, obs, level)?;
        reports.push(IntervalReport::new(
            &interval,
            obs.p_hat(),
            args.n as usize,
        ));
    }
    print_reports(&reports, args.json)
}

fn cmd_ci_mean(args: MeanArgs) -> Result<(), CliError> {
    let method = parse_method(&args.method)?;
    let values = input::read_values(&args.file)?;
    if values.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: need at least 2 values for a mean interval, found {}",
            args.file.display(),
            values.len()
        )));
    }
    let sample = Sample::new(values)?;
    let level = if method.is_support() { args.k_ratio } else { args.alpha };
    let interval = mean::interval_for(method, &sample, level)?;
    let report = IntervalReport::new(&interval, sample.mean(), sample.len());
    print_reports(&[report], args.json)
}

fn cmd_ci_boot(args: BootArgs) -> Result<(), CliError> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::Usage(format!(
            "alpha must lie strictly between 0 and 1, got {}",
            args.alpha
        )));
    }
    if args.r < 1000 {
        eprintln!(
            "warning: r = {} is below the recommended 1000 bootstrap replicates",
            args.r
        );
    }
    let estimator: fn(&Sample) -> confint::Result<f64> = match args.estimator.as_str() {
        "mean" => |s: &Sample| Ok(s.mean()),
        "exp-lambda" => ml::exp_mle,
        other => {
            return Err(CliError::Usage(format!(
                "unknown estimator {other:?} (expected mean or exp-lambda)"
            )))
        }
    };
    let values = input::read_values(&args.file)?;
    let sample = Sample::new(values)?;
    let mut rng = RngStream::new(args.seed, 0);
    // Failures here depend on the data (for example a non-positive
    // mean under exp-lambda), not on the flags.
    let dist = bootstrap::boot_distribution(&sample, estimator, args.r, &mut rng)
        .map_err(|e| match e {
            Error::Domain(m) => CliError::Input(m),
            other => other.into(),
        })?;
    let interval = boot_interval(&args.kind, &dist, &sample, estimator, args.alpha)?;
    let report = IntervalReport::new(&interval, dist.theta_hat(), sample.len())
        .with_bootstrap(args.r, args.seed);
    print_reports(&[report], args.json)
}

fn boot_interval(
    kind: &str,
    dist: &BootstrapReplicates,
    sample: &Sample,
    estimator: fn(&Sample) -> confint::Result<f64>,
    alpha: f64,
) -> Result<confint::Interval, CliError> {
    match kind {
        "percentile" => Ok(bootstrap::percentile_interval(dist, alpha)?),
        "basic" => Ok(bootstrap::basic_interval(dist, alpha)?),
        "bca" => Ok(bootstrap::bca_interval(dist, sample, estimator, alpha)?),
        other => Err(CliError::Usage(format!(
            "unknown interval kind {other:?} (expected percentile, basic, or bca)"
        ))),
    }
}

fn cmd_coverage_binom(args: BinomExactArgs) -> Result<(), CliError> {
    let methods = parse_methods(&args.method, &coverage::BINOM_METHODS)?;
    let curves = coverage::run_binom_exact(
        args.n,
        &methods,
        args.alpha,
        args.k_ratio,
        &default_p_grid(),
    )?;
    let stdout = std::io::stdout();
    write_coverage_csv(&curves, &mut stdout.lock())
        .map_err(|e| CliError::Numeric(format!("cannot write output: {e}")))?;
    Ok(())
}

fn cmd_coverage_sim(args: SimArgs, family: Family) -> Result<(), CliError> {
    let defaults: &[Method] = match family {
        Family::MeanCubic => &[
            Method::MeanT,
            Method::MeanZ,
            Method::MeanLrT,
            Method::MeanLrNormal,
            Method::BootPercentile,
            Method::BootBasic,
            Method::BootBca,
        ],
        Family::ExpMl => &[
            Method::MlHessian,
            Method::MlJackknife,
            Method::BootPercentile,
            Method::BootBasic,
            Method::BootBca,
        ],
        Family::BinomExact => unreachable!("binom-exact has its own command"),
    };
    let methods = parse_methods(&args.method, defaults)?;
    let n_reps = args.n_reps.unwrap_or_else(|| {
        if methods.iter().any(|m| m.is_bootstrap()) {
            DEFAULT_REPS_BOOTSTRAP
        } else {
            DEFAULT_REPS_CLASSICAL
        }
    });
    let config = ExperimentConfig {
        family,
        methods,
        n_values: args.n.clone(),
        n_reps,
        alpha: args.alpha,
        k_ratio: args.k_ratio,
        seed: args.seed,
        true_param: args.true_param,
    };

    let curves = match family {
        Family::MeanCubic => coverage::run_mean_experiment(&config)?,
        Family::ExpMl => {
            let result = coverage::run_exp_experiment(&config)?;
            for corr in &result.correlations {
                eprintln!(
                    "correlations at n={}: |error| vs sigma_hessian = {}, |error| vs sigma_jackknife = {}",
                    corr.n,
                    sig6(corr.abs_error_vs_hessian),
                    sig6(corr.abs_error_vs_jackknife),
                );
            }
            result.curves
        }
        Family::BinomExact => unreachable!("binom-exact has its own command"),
    };
    let stdout = std::io::stdout();
    write_coverage_csv(&curves, &mut stdout.lock())
        .map_err(|e| CliError::Numeric(format!("cannot write output: {e}")))?;
    Ok(())
}
