//! Command-line front end.
//!
//! Exit codes: 0 success or certified, 1 internal error, 2 domain or
//! configuration error, 3 infeasible inversion, 4 resource limit, 5 I/O
//! error, 6 certification failure of a distribution-free bound.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{BoundKind, BoundQuery};
use crate::error::Error;
use crate::exact::{exact_bound, RationalProb};
use crate::inversion::{epsilon_for_confidence, sample_size_for, InversionTarget};
use crate::lab::{run_trials, Distribution, MonteCarloReport, ProblemConfig, Vec2};
use crate::report::{compute_table, render_table_csv, Certification, DGrid, Record, TableSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_CERTIFICATION: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "scenario-bounds",
    version,
    about = "Compression-based confidence bounds for scenario decision making"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a bound q(N, epsilon).
    Eval(EvalArgs),
    /// Smallest epsilon with q(N, epsilon) <= beta.
    Invert(InvertArgs),
    /// Smallest N with q(N, epsilon) <= beta.
    Design(DesignArgs),
    /// CSV of inverted epsilon over a grid of d, one column per bound.
    Table(TableArgs),
    /// Monte Carlo certification on the planar min-norm problem.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub bound: BoundKind,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub r: u64,
    /// Tolerance as a decimal (or `p/q` together with --exact).
    #[arg(long)]
    pub eps: String,
    /// Also evaluate the exact rational reference value.
    #[arg(long, hide = true)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long)]
    pub bound: BoundKind,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub r: u64,
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long)]
    pub bound: BoundKind,
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub r: u64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub r: u64,
    #[arg(long)]
    pub d_min: u64,
    #[arg(long)]
    pub d_max: u64,
    #[arg(long, default_value_t = 1)]
    pub d_step: u64,
    /// Comma-separated bounds; defaults to the four consistent bounds when
    /// r = 0 and the four discard bounds otherwise.
    #[arg(long, value_delimiter = ',')]
    pub bounds: Vec<BoundKind>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Circle,
    Disk,
    /// Point mass at a = (1, 0).
    DiscreteSingleAtom,
    /// Atoms from --atoms.
    Discrete,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Constraint anchor `x,y`.
    #[arg(long, default_value = "-3,0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, value_enum, default_value_t = DistArg::Circle)]
    pub dist: DistArg,
    /// Atoms `ax,ay,w;ax,ay,w;...` for `--dist discrete`.
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    /// Tolerance; when absent it is obtained by inverting --bound at --beta.
    #[arg(long, conflicts_with = "beta", required_unless_present = "beta")]
    pub eps: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to new-consistent when r = 0 and new-discard otherwise.
    #[arg(long)]
    pub bound: Option<BoundKind>,
    #[arg(long, default_value_t = 2)]
    pub d: u64,
}

impl clap::ValueEnum for BoundKind {
    fn value_variants<'a>() -> &'a [Self] {
        &BoundKind::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(std::io::Error),
    Certification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Domain(_) | Error::Config(_)) => EXIT_DOMAIN,
            CliError::Core(Error::Infeasible { .. }) => EXIT_INFEASIBLE,
            CliError::Core(Error::ResourceLimit { .. }) => EXIT_RESOURCE,
            CliError::Core(Error::Solver(_)) => EXIT_INTERNAL,
            CliError::Io(_) => EXIT_IO,
            CliError::Certification(_) => EXIT_CERTIFICATION,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => format!("i/o error: {e}"),
            CliError::Certification(msg) => msg.clone(),
        }
    }
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(&args, out, err),
        Command::Invert(args) => cmd_invert(&args, out),
        Command::Design(args) => cmd_design(&args, out),
        Command::Table(args) => cmd_table(&args, out),
        Command::Validate(args) => cmd_validate(&args, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(err, "error: {}", e.message());
            code
        }
    }
}

fn warn_assumptions(kind: BoundKind, err: &mut dyn Write) -> std::io::Result<()> {
    if let Some(w) = kind.assumptions_warning() {
        writeln!(err, "warning: {w}")?;
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let epsilon = parse_tolerance(&args.eps)?;
    let query = BoundQuery::discard(args.n, args.d, args.r, epsilon);
    let q = args.bound.evaluate(&query)?;
    warn_assumptions(args.bound, err)?;
    let mut record = Record::new()
        .str("bound", args.bound.name())
        .int("N", args.n)
        .int("d", args.d)
        .int("r", args.r)
        .num("epsilon", epsilon)
        .num("q", q)
        .opt_str("assumptions_warning", args.bound.assumptions_warning());
    if args.exact {
        let eps: RationalProb = args.eps.parse()?;
        let exact = exact_bound(args.bound, args.n, args.d, args.r, &eps)?;
        record = record.str("q_exact", &exact.to_string());
    }
    writeln!(out, "{}", record.to_json())?;
    Ok(())
}

fn parse_tolerance(s: &str) -> Result<f64, Error> {
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad_eps(s))?;
        let q: f64 = q.trim().parse().map_err(|_| bad_eps(s))?;
        return Ok(p / q);
    }
    s.trim().parse().map_err(|_| bad_eps(s))
}

fn bad_eps(s: &str) -> Error {
    Error::Domain(format!("cannot parse tolerance '{s}'"))
}

fn cmd_invert(args: &InvertArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let target = InversionTarget::new(args.bound, args.beta, args.d, args.r);
    let epsilon = epsilon_for_confidence(&target, args.n)?;
    let q = args
        .bound
        .evaluate(&BoundQuery::discard(args.n, args.d, args.r, epsilon))?;
    let record = Record::new()
        .str("bound", args.bound.name())
        .int("N", args.n)
        .int("d", args.d)
        .int("r", args.r)
        .num("beta", args.beta)
        .num("epsilon", epsilon)
        .num("q", q)
        .opt_str("assumptions_warning", args.bound.assumptions_warning());
    writeln!(out, "{}", record.to_json())?;
    Ok(())
}

fn cmd_design(args: &DesignArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let target = InversionTarget::new(args.bound, args.beta, args.d, args.r);
    let n = sample_size_for(&target, args.eps)?;
    let q = args
        .bound
        .evaluate(&BoundQuery::discard(n, args.d, args.r, args.eps))?;
    let record = Record::new()
        .str("bound", args.bound.name())
        .int("d", args.d)
        .int("r", args.r)
        .num("epsilon", args.eps)
        .num("beta", args.beta)
        .int("N", n)
        .num("q", q)
        .opt_str("assumptions_warning", args.bound.assumptions_warning());
    writeln!(out, "{}", record.to_json())?;
    Ok(())
}

pub fn table_spec(args: &TableArgs) -> Result<TableSpec, Error> {
    let bounds = if args.bounds.is_empty() {
        if args.r == 0 {
            BoundKind::CONSISTENT.to_vec()
        } else {
            BoundKind::DISCARD.to_vec()
        }
    } else {
        args.bounds.clone()
    };
    Ok(TableSpec {
        n: args.n,
        beta: args.beta,
        r: args.r,
        d_grid: DGrid::new(args.d_min, args.d_max, args.d_step)?,
        bounds,
    })
}

fn cmd_table(args: &TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = table_spec(args)?;
    let rows = compute_table(&spec)?;
    let csv = render_table_csv(&spec, &rows);
    match &args.output {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn parse_pair(s: &str) -> Result<Vec2, Error> {
    let bad = || Error::Config(format!("expected 'x,y', got '{s}'"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    Ok(Vec2::new(x, y))
}

fn parse_atoms(s: &str) -> Result<Vec<(Vec2, f64)>, Error> {
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let nums: Vec<&str> = part.split(',').collect();
            let bad = || Error::Config(format!("expected 'ax,ay,w', got '{part}'"));
            if nums.len() != 3 {
                return Err(bad());
            }
            let v: Vec<f64> = nums
                .iter()
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            Ok((Vec2::new(v[0], v[1]), v[2]))
        })
        .collect()
}

pub fn problem_config(args: &ValidateArgs) -> Result<(ProblemConfig, BoundKind), Error> {
    let distribution = match args.dist {
        DistArg::Circle => Distribution::CircleUniform,
        DistArg::Disk => Distribution::DiskUniform,
        DistArg::DiscreteSingleAtom => {
            Distribution::DiscreteAtoms(vec![(Vec2::new(1.0, 0.0), 1.0)])
        }
        DistArg::Discrete => {
            let atoms = args
                .atoms
                .as_deref()
                .ok_or_else(|| Error::Config("--dist discrete needs --atoms".into()))?;
            Distribution::DiscreteAtoms(parse_atoms(atoms)?)
        }
    };
    let bound = args.bound.unwrap_or(if args.r == 0 {
        BoundKind::NewConsistent
    } else {
        BoundKind::NewDiscard
    });
    let epsilon = match (args.eps, args.beta) {
        (Some(eps), _) => eps,
        (None, Some(beta)) => {
            let target = InversionTarget::new(bound, beta, args.d, args.r as u64);
            epsilon_for_confidence(&target, args.n as u64)?
        }
        (None, None) => return Err(Error::Config("either --eps or --beta is required".into())),
    };
    let config = ProblemConfig {
        c: parse_pair(&args.center)?,
        distribution,
        n: args.n,
        r: args.r,
        epsilon,
        trials: args.trials,
        seed: args.seed,
    };
    config.validate()?;
    bound.validate(&BoundQuery::discard(
        args.n as u64,
        args.d,
        args.r as u64,
        epsilon,
    ))?;
    Ok((config, bound))
}

pub fn summary_record(config: &ProblemConfig, report: &MonteCarloReport, d: u64) -> Record {
    let status = Certification::of(report);
    Record::new()
        .str("type", "summary")
        .str("bound_kind", report.bound_kind.name())
        .str("distribution", config.distribution.name())
        .int("N", config.n as u64)
        .int("d", d)
        .int("r", config.r as u64)
        .num("epsilon", config.epsilon)
        .int("seed", config.seed)
        .int("trials", report.trials)
        .int("violations", report.violations)
        .num("empirical_rate", report.empirical_rate)
        .num("exact_binomial_upper_95", report.exact_binomial_upper_95)
        .num("theoretical_bound", report.theoretical_bound)
        .bool(
            "distribution_free",
            report.bound_kind.is_distribution_free(),
        )
        .bool("inconclusive", status == Certification::Inconclusive)
        .str("status", status.name())
}

fn cmd_validate(
    args: &ValidateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let (config, bound) = problem_config(args)?;
    warn_assumptions(bound, err)?;
    let outcomes = run_trials(&config)?;
    let mut buf = std::io::BufWriter::new(out);
    for (t, o) in outcomes.iter().enumerate() {
        let record = Record::new()
            .int("trial", t as u64)
            .num("risk", o.risk)
            .int("support_size", o.support_indices.len() as u64)
            .bool("violated", o.violated);
        writeln!(buf, "{}", record.to_json())?;
    }
    let report = MonteCarloReport::from_outcomes(&config, &outcomes, bound, args.d)?;
    writeln!(
        buf,
        "{}",
        summary_record(&config, &report, args.d).to_json()
    )?;
    buf.flush()?;
    match Certification::of(&report) {
        Certification::Failed => Err(CliError::Certification(format!(
            "upper confidence limit {} exceeds {} bound {}",
            report.exact_binomial_upper_95,
            bound.name(),
            report.theoretical_bound
        ))),
        Certification::Inconclusive => {
            writeln!(
                err,
                "warning: theoretical bound below 0.05; certification inconclusive"
            )?;
            Ok(())
        }
        _ => Ok(()),
    }
}
