//! Command-line front end: one JSON report per invocation on stdout, a
//! short human summary on stderr.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use fps_core::exactnum::{format_scalar, parse_scalar};
use fps_core::growth::{CriteriaMode, GrowthSpec, RhoSpec};
use fps_core::{AbsValue, Error, Scalar, Series, SeriesPoly};

mod commands;

pub const SCHEMA: &str = "fps-transcend/1";

/// Default guardrails, lifted by `--allow-large`.
pub const MAX_ORDER: usize = 60;
pub const MAX_DEGREE: usize = 6;
pub const MAX_PARTITION_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    UsageError,
    DomainError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::UsageError => 2,
            Status::DomainError => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::CheckFailed => "CHECK_FAILED",
            Status::UsageError => "USAGE_ERROR",
            Status::DomainError => "DOMAIN_ERROR",
        }
    }

    fn from_passed(passed: bool) -> Status {
        if passed {
            Status::Ok
        } else {
            Status::CheckFailed
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommandResult {
    pub status: Status,
    /// The JSON document for stdout. `None` for `--help` and `--version`.
    pub report: Option<Value>,
    /// Plain text for stdout when there is no report.
    pub text: Option<String>,
    /// One-line summary for stderr.
    pub summary: String,
    pub exit_code: i32,
}

impl CommandResult {
    fn report(command: &str, status: Status, result: Value, summary: String) -> Self {
        CommandResult {
            status,
            report: Some(json!({
                "schema": SCHEMA,
                "command": command,
                "status": status.as_str(),
                "result": result,
            })),
            text: None,
            summary,
            exit_code: status.exit_code(),
        }
    }

    fn failure(command: Option<&str>, status: Status, message: String) -> Self {
        CommandResult {
            status,
            report: Some(json!({
                "schema": SCHEMA,
                "command": command,
                "status": status.as_str(),
                "error": message,
            })),
            text: None,
            summary: format!("{}: {message}", status.as_str()),
            exit_code: status.exit_code(),
        }
    }

    fn from_error(command: &str, err: CliError) -> Self {
        let status = match &err {
            CliError::Core(e) if e.is_usage() => Status::UsageError,
            CliError::Core(_) | CliError::Input(_) => Status::DomainError,
        };
        Self::failure(Some(command), status, err.to_string())
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    Core(Error),
    /// Unreadable or malformed input file.
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Output of a successfully executed command.
pub(crate) struct Outcome {
    pub passed: bool,
    pub result: Value,
    pub summary: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "fps-transcend",
    version,
    about = "Exact power series checks for fast-growth transcendence criteria"
)]
struct Cli {
    /// Lift the default size guardrails (order, degree, partition index)
    #[arg(long, global = true)]
    allow_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact identity and bound checks
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Margins of the growth criteria over a finite range
    Criteria(CriteriaArgs),
    /// Gap-series coefficient claims
    Liouville(LiouvilleArgs),
    /// Emit an example series or spec as JSON
    Gen(GenArgs),
    /// Tally the monomials of A(X)_n by region
    Partition(PartitionArgs),
    /// Heuristic growth classification
    Classify(ClassifyArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// X^m = X^[m] + m X^<m> at every index
    Lemma1(Lemma1Args),
    /// A(X)_n = head + gamma + delta + epsilon
    Theorem2(Theorem2Args),
    /// |X_n| <= d (1 + c)^n r^n for X = D / C
    Prop1(Prop1Args),
}

#[derive(Args, Debug)]
struct Lemma1Args {
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    m_max: usize,
    #[arg(long)]
    order: usize,
    /// Cross-check against brute-force enumeration where it is feasible
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct Theorem2Args {
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    poly: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
}

#[derive(Args, Debug)]
struct Prop1Args {
    #[arg(long = "c")]
    c_series: PathBuf,
    #[arg(long = "d")]
    d_series: PathBuf,
    #[arg(long, value_parser = scalar_arg)]
    cbound: Scalar,
    #[arg(long, value_parser = scalar_arg)]
    dbound: Scalar,
    #[arg(long, value_parser = scalar_arg, default_value = "1")]
    r: Scalar,
    /// `archimedean` or `padic:P`
    #[arg(long, value_parser = abs_arg, default_value = "archimedean")]
    abs: AbsValue,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Arch,
    Nonarch,
}

#[derive(Args, Debug)]
struct CriteriaArgs {
    #[arg(long)]
    growth: PathBuf,
    #[arg(long)]
    rho: PathBuf,
    #[arg(long, default_value_t = 3)]
    lambda_max: usize,
    #[arg(long, default_value_t = 5)]
    m_max: u32,
    /// Inclusive range `A:B`
    #[arg(long, value_parser = range_arg)]
    n_range: (usize, usize),
    #[arg(long, value_enum, default_value = "arch")]
    mode: ModeArg,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct LiouvilleArgs {
    #[command(subcommand)]
    sub: Option<LiouvilleCommand>,
    #[arg(long = "p")]
    p: Option<u32>,
    #[arg(long = "q")]
    q: Option<u32>,
    #[arg(long, default_value_t = 0)]
    dmax: u64,
}

#[derive(Subcommand, Debug)]
enum LiouvilleCommand {
    /// A(L)_(c + n) = (L^p)_c (A_p)_n != 0
    Punchline {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long = "p")]
        p: u32,
        #[arg(long = "q")]
        q: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Liouville,
    Factorial,
    Superfactorial,
    PadicSuperfactorial,
    SuperfactorialGrowth,
    PadicSuperfactorialGrowth,
    FactorialRho,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Truncation order, for series kinds
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long)]
    poly: PathBuf,
    #[arg(long)]
    series: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: usize,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    growth: PathBuf,
    #[arg(long)]
    n_max: usize,
    #[arg(long, value_parser = scalar_arg, default_value = "1/2")]
    tau: Scalar,
}

fn scalar_arg(s: &str) -> std::result::Result<Scalar, String> {
    parse_scalar(s).map_err(|e| e.to_string())
}

fn abs_arg(s: &str) -> std::result::Result<AbsValue, String> {
    if s == "archimedean" {
        return Ok(AbsValue::Archimedean);
    }
    let p = s
        .strip_prefix("padic:")
        .ok_or_else(|| format!("expected `archimedean` or `padic:P`, got {s:?}"))?;
    let p: u64 = p.parse().map_err(|e| format!("bad prime {p:?}: {e}"))?;
    AbsValue::padic(p).map_err(|e| e.to_string())
}

fn range_arg(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad bound {t:?}: {e}"))
    };
    Ok((parse(a)?, parse(b)?))
}

/// Parses `argv` (program name first) and executes the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    status: Status::Ok,
                    report: None,
                    text: Some(e.to_string()),
                    summary: String::new(),
                    exit_code: 0,
                },
                _ => CommandResult::failure(
                    None,
                    Status::UsageError,
                    e.to_string().trim_end().to_owned(),
                ),
            };
        }
    };
    let limits = Limits {
        allow_large: cli.allow_large,
    };
    let (name, outcome) = dispatch(cli.command, limits);
    match outcome {
        Ok(o) => {
            let status = Status::from_passed(o.passed);
            CommandResult::report(
                name,
                status,
                o.result,
                format!("{}: {}", status.as_str(), o.summary),
            )
        }
        Err(e) => CommandResult::from_error(name, e),
    }
}

fn dispatch(command: Command, limits: Limits) -> (&'static str, CliResult<Outcome>) {
    match command {
        Command::Verify { check } => match check {
            VerifyCommand::Lemma1(a) => (
                "verify lemma1",
                (|| {
                    let x: Series = load(&a.series)?;
                    commands::lemma1(&x, a.m_max, a.order, a.oracle, limits)
                })(),
            ),
            VerifyCommand::Theorem2(a) => (
                "verify theorem2",
                (|| {
                    let x: Series = load(&a.series)?;
                    let poly: SeriesPoly = load(&a.poly)?;
                    commands::theorem2(&poly, &x, a.n, a.lambda, limits)
                })(),
            ),
            VerifyCommand::Prop1(a) => (
                "verify prop1",
                (|| {
                    let c: Series = load(&a.c_series)?;
                    let d: Series = load(&a.d_series)?;
                    commands::prop1(&c, &d, &a.cbound, &a.dbound, &a.r, a.abs)
                })(),
            ),
        },
        Command::Criteria(a) => (
            "criteria",
            (|| {
                let growth: GrowthSpec = load(&a.growth)?;
                let rho: RhoSpec = load(&a.rho)?;
                let mode = match a.mode {
                    ModeArg::Arch => CriteriaMode::Archimedean,
                    ModeArg::Nonarch => CriteriaMode::Nonarchimedean,
                };
                commands::criteria(&growth, &rho, a.lambda_max, a.m_max, a.n_range, mode)
            })(),
        ),
        Command::Liouville(a) => match a.sub {
            Some(LiouvilleCommand::Punchline { poly, p, q }) => (
                "liouville punchline",
                (|| {
                    let poly: SeriesPoly = load(&poly)?;
                    commands::punchline(&poly, p, q)
                })(),
            ),
            None => (
                "liouville",
                match (a.p, a.q) {
                    (Some(p), Some(q)) => commands::gap_claims(p, q, a.dmax),
                    _ => Err(Error::Usage("liouville needs --p and --q".into()).into()),
                },
            ),
        },
        Command::Gen(a) => ("gen", commands::generate(a.kind, a.order, limits)),
        Command::Partition(a) => (
            "partition",
            (|| {
                let poly: SeriesPoly = load(&a.poly)?;
                let x: Series = load(&a.series)?;
                commands::partition(&poly, &x, a.n, a.lambda, limits)
            })(),
        ),
        Command::Classify(a) => (
            "classify",
            (|| {
                let growth: GrowthSpec = load(&a.growth)?;
                commands::classify(&growth, a.n_max, &a.tau)
            })(),
        ),
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Limits {
    allow_large: bool,
}

impl Limits {
    pub(crate) fn check(&self, what: &'static str, limit: usize, got: usize) -> CliResult<()> {
        if !self.allow_large && got > limit {
            return Err(Error::LimitExceeded {
                what,
                limit,
                got,
                hint: "pass --allow-large to lift the guardrail",
            }
            .into());
        }
        Ok(())
    }
}

/// Reads a JSON input file. A report produced by `gen` is accepted as well;
/// its `result` field is used.
fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("invalid JSON in {}: {e}", path.display())))?;
    if value.get("schema").and_then(Value::as_str) == Some(SCHEMA) {
        if let Some(result) = value.get_mut("result") {
            value = result.take();
        }
    }
    serde_json::from_value(value)
        .map_err(|e| CliError::Input(format!("invalid input in {}: {e}", path.display())))
}

pub(crate) fn scalar_json(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}
