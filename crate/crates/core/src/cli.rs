//! Command-line front end: JSON configuration in, JSON reports and CSV
//! dumps out.
//!
//! Exit codes: 0 when the run is certified (or the check passes), 1 for
//! pipeline errors and failed checks, 2 for unreadable or invalid
//! configuration and usage errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::compact_set::{CompactSetSample, SetSpec};
use crate::countable::{truncate_to_reach, ForbiddenSet, ForbiddenSpec};
use crate::error::Error;
use crate::mergelyan::{FunctionEvaluator, FunctionSpec};
use crate::obstruction::{demo_obstruction, write_curve_csv, ObstructionParams, DEFAULT_ARC_SAMPLES, DEFAULT_FIT_DEGREE};
use crate::pipeline::{run, verify, ApproximationProblem, Mode, DEFAULT_MAX_DEGREE};
use crate::poly::{Polynomial, C64};

pub const SCHEMA: &str = "avoidant-approx/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "avoidant-approx", version, about = "Polynomial approximation avoiding countable value sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the pipeline on a problem configuration.
    Approximate(ApproximateArgs),
    /// Re-check a polynomial against a problem configuration.
    Verify(VerifyArgs),
    /// Run the obstruction demo for an uncountable forbidden set.
    DemoObstruction(DemoArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output directory, created when missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Re-verify on a set sampled this many times more densely.
    #[arg(long, value_name = "N")]
    pub dense_verify: Option<usize>,
    /// Seed recorded in the report.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ApproximateArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Keep every avoidance iterate in the report.
    #[arg(long)]
    pub keep_iterates: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Problem configuration supplying the function, set and forbidden values.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Polynomial JSON as written by `approximate`.
    #[arg(long, value_name = "PATH")]
    pub polynomial: PathBuf,
    /// Overrides the configured eps.
    #[arg(long)]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Optional JSON with any of the fields below.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "RE,IM", value_parser = parse_complex)]
    pub a1: Option<C64>,
    #[arg(long, value_name = "RE,IM", value_parser = parse_complex)]
    pub a2: Option<C64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub fit_degree: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(C64::new(re, im))
}

/// Problem configuration file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub function: FunctionSpec,
    pub set: SetSpec,
    pub forbidden: ForbiddenSpec,
    pub eps: f64,
    pub mode: Mode,
    /// Keep only forbidden values of modulus at most `max |f| + eps`.
    #[serde(default)]
    pub truncate_to_reach: bool,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default)]
    pub keep_iterates: bool,
    #[serde(default)]
    pub dense_verify: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoConfig {
    #[serde(default, with = "opt_complex")]
    pub a1: Option<C64>,
    #[serde(default, with = "opt_complex")]
    pub a2: Option<C64>,
    pub eps: Option<f64>,
    pub fit_degree: Option<usize>,
    pub arc_samples: Option<usize>,
    pub seed: Option<u64>,
}

mod opt_complex {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::poly::C64;

    pub fn serialize<S: Serializer>(z: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.serialize_some(&[z.re, z.im]),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Ok(Option::<[f64; 2]>::deserialize(d)?.map(|[re, im]| C64::new(re, im)))
    }
}

/// Failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Configuration or usage problem (exit 2).
    Usage(String),
    /// Pipeline error (exit 1).
    Pipeline(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Pipeline(_) => EXIT_FAILURE,
        }
    }

    pub fn diagnostic(&self) -> Value {
        match self {
            CliError::Usage(msg) => json!({
                "schema": SCHEMA,
                "status": "usage_error",
                "error": { "message": msg },
            }),
            CliError::Pipeline(e) => {
                let (stage, inner) = match e {
                    Error::Stage { stage, source } => (Some(stage.to_string()), source.as_ref()),
                    other => (None, other),
                };
                json!({
                    "schema": SCHEMA,
                    "status": "error",
                    "error": {
                        "stage": stage,
                        "kind": variant_name(inner),
                        "message": e.to_string(),
                    },
                })
            }
        }
    }
}

fn variant_name(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or_default()
        .to_string()
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Pipeline(e)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| usage(format!("invalid configuration {}: {e}", path.display())))?;
    if !(config.eps > 0.0) || !config.eps.is_finite() {
        return Err(usage(format!("eps must be positive, got {}", config.eps)));
    }
    if config.dense_verify == Some(0) {
        return Err(usage("dense_verify must be at least 1"));
    }
    Ok(config)
}

struct Problem {
    f: FunctionEvaluator,
    k: CompactSetSample,
    a: ForbiddenSet,
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Builds the function, set and forbidden values. Constructor errors are
/// configuration errors.
fn build_problem(config: &RunConfig, config_path: &Path) -> Result<Problem, CliError> {
    let f = config.function.build(&base_dir(config_path)).map_err(usage)?;
    let k = config.set.build().map_err(usage)?;
    let mut a = config.forbidden.build().map_err(usage)?;
    if config.truncate_to_reach {
        let reach = f.eval_many(k.all_points()).iter().map(|v| v.norm()).fold(0.0, f64::max) + config.eps;
        a = truncate_to_reach(&a, reach).map_err(usage)?;
    }
    Ok(Problem { f, k, a })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    fs::write(path, text + "\n").map_err(|e| CliError::Pipeline(e.into()))
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))
}

fn dense_check(
    config: &RunConfig,
    factor: Option<usize>,
    f: &FunctionEvaluator,
    p: &Polynomial,
    a: &ForbiddenSet,
    eps: f64,
) -> Result<Option<crate::pipeline::Verification>, CliError> {
    match factor {
        None | Some(1) => Ok(None),
        Some(0) => Err(usage("--dense-verify must be at least 1")),
        Some(n) => {
            let dense = config.set.build_dense(n).map_err(usage)?;
            Ok(Some(verify(f, p, &dense, a, eps)?))
        }
    }
}

pub fn cmd_approximate(args: &ApproximateArgs) -> Result<i32, CliError> {
    let config = load_config(&args.config)?;
    prepare_out(&args.common.out)?;
    let problem = build_problem(&config, &args.config)?;
    let seed = args.common.seed.unwrap_or(config.seed);
    let dense_factor = args.common.dense_verify.or(config.dense_verify);
    let mut ap = ApproximationProblem::new(problem.f.clone(), problem.k.clone(), problem.a.clone(), config.eps, config.mode);
    ap.max_degree = config.max_degree;
    ap.keep_iterates = args.keep_iterates || config.keep_iterates;

    let (p, report) = run(&ap)?;
    let dense = dense_check(&config, dense_factor, &problem.f, &p, &problem.a, config.eps)?;
    let dense_ok = dense.as_ref().map_or(true, |v| v.passed);
    let certified = report.certified && dense_ok;

    write_json(&args.common.out.join("polynomial.json"), &p)?;
    let mut csv_buf = Vec::new();
    problem.k.write_csv(&mut csv_buf)?;
    fs::write(args.common.out.join("samples.csv"), csv_buf).map_err(|e| CliError::Pipeline(e.into()))?;
    let doc = json!({
        "schema": SCHEMA,
        "command": "approximate",
        "seed": seed,
        "config": config,
        "certified": certified,
        "dense_verify_factor": dense_factor,
        "dense_verification": dense,
        "report": report,
    });
    write_json(&args.common.out.join("report.json"), &doc)?;
    Ok(if certified { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let config = load_config(&args.config)?;
    prepare_out(&args.common.out)?;
    let text = fs::read_to_string(&args.polynomial)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.polynomial.display())))?;
    let p: Polynomial = serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid polynomial {}: {e}", args.polynomial.display())))?;
    let eps = args.eps.unwrap_or(config.eps);
    if !(eps > 0.0) {
        return Err(usage(format!("eps must be positive, got {eps}")));
    }
    let problem = build_problem(&config, &args.config)?;
    let factor = args.common.dense_verify.or(config.dense_verify).unwrap_or(1);
    if factor == 0 {
        return Err(usage("--dense-verify must be at least 1"));
    }
    let k = config.set.build_dense(factor).map_err(usage)?;
    let v = verify(&problem.f, &p, &k, &problem.a, eps)?;
    let doc = json!({
        "schema": SCHEMA,
        "command": "verify",
        "seed": args.common.seed.unwrap_or(config.seed),
        "eps": eps,
        "dense_verify_factor": factor,
        "passed": v.passed,
        "verification": v,
    });
    write_json(&args.common.out.join("verify.json"), &doc)?;
    Ok(if v.passed { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_demo_obstruction(args: &DemoArgs) -> Result<i32, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<DemoConfig>(&text)
                .map_err(|e| usage(format!("invalid configuration {}: {e}", path.display())))?
        }
        None => DemoConfig::default(),
    };
    let defaults = ObstructionParams::default();
    let mut params = ObstructionParams {
        a1: args.a1.or(file.a1).unwrap_or(defaults.a1),
        a2: args.a2.or(file.a2).unwrap_or(defaults.a2),
        eps: args.eps.or(file.eps).unwrap_or(defaults.eps),
        fit_degree: args.fit_degree.or(file.fit_degree).unwrap_or(DEFAULT_FIT_DEGREE),
        arc_samples: file.arc_samples.unwrap_or(DEFAULT_ARC_SAMPLES),
    };
    if let Some(n) = args.common.dense_verify {
        if n == 0 {
            return Err(usage("--dense-verify must be at least 1"));
        }
        params.arc_samples = (params.arc_samples - 1) * n + 1;
    }
    prepare_out(&args.common.out)?;
    let run = match demo_obstruction(&params) {
        Err(Error::InvalidParameter(msg)) => return Err(CliError::Usage(msg)),
        other => other?,
    };
    let out = &args.common.out;
    for (name, points) in [
        ("gamma.csv", &run.gamma_points[..]),
        ("p_curve.csv", &run.p_points[..]),
        ("loop.csv", run.loop_curve.points()),
    ] {
        let mut buf = Vec::new();
        write_curve_csv(points, &mut buf)?;
        fs::write(out.join(name), buf).map_err(|e| CliError::Pipeline(e.into()))?;
    }
    let doc = json!({
        "schema": SCHEMA,
        "command": "demo-obstruction",
        "seed": args.common.seed.or(file.seed).unwrap_or(0),
        "report": run.report,
    });
    write_json(&out.join("obstruction.json"), &doc)?;
    Ok(if run.report.obstructed { EXIT_OK } else { EXIT_FAILURE })
}

/// Runs a parsed command line. Errors are written as JSON to `error.json`
/// in the output directory (when it can be created) and to stderr.
pub fn execute(cli: &Cli) -> i32 {
    let (result, out) = match &cli.command {
        Command::Approximate(a) => (cmd_approximate(a), &a.common.out),
        Command::Verify(a) => (cmd_verify(a), &a.common.out),
        Command::DemoObstruction(a) => (cmd_demo_obstruction(a), &a.common.out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let diag = e.diagnostic();
            let text = serde_json::to_string_pretty(&diag).unwrap_or_default();
            if fs::create_dir_all(out).is_ok() {
                let _ = fs::write(out.join("error.json"), format!("{text}\n"));
            }
            eprintln!("{text}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
