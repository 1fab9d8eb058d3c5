//! The `fracbranch` command line.
//!
//! Subcommands:
//! - `simulate feller|yule|gw`: sample paths, CSV `replicate,t,value`.
//! - `moments`: time-changed CSBP mean and second moment, CSV
//!   `t,mean,second_moment,variance`.
//! - `pmf`: fractional Yule pmf, CSV `n,probability`.
//! - `ml-eval`: Mittag–Leffler values, CSV `beta,x,value`.
//! - `verify <kind>`: a named preset, CSV `check,estimate,target,std_error,pass`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! arguments, 3 numerical failure or censoring, 4 output not writable.
//! `--config file.json` supplies flags as a JSON object whose keys are the
//! flag names; explicit flags take precedence. `FRACBRANCH_THREADS` caps
//! the worker threads.

pub mod format;
pub mod verify;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::csbp::{
    simulate_feller, tc_mean, tc_second_moment, yule_pmf_upto, BranchingMechanism, InnerProcess,
    TcProcessSpec, TimeChange,
};
use crate::error::Error;
use crate::gw::{simulate_time_changed_gw, OffspringLaw};
use crate::random::{RngStream, WaitingTimeLaw};
use crate::special_fn::{mittag_leffler, GridFunction};

use format::{fmt_g17, Csv};
use verify::{Preset, VerifyKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_OUTPUT: i32 = 4;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "FRACBRANCH_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "fracbranch",
    version,
    about = "Time-fractional branching process toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample paths of a (time-changed) process.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Simulate(SimulateArgs),
    /// Mean and second moment of the time-changed CSBP on a time grid.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Moments(MomentsArgs),
    /// Fractional Yule pmf.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Pmf(PmfArgs),
    /// Mittag–Leffler function values.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    MlEval(MlArgs),
    /// Run a verification preset.
    #[command(allow_negative_numbers = true, args_override_self = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Process {
    Feller,
    Yule,
    Gw,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    process: Process,
    /// Time-change index; 1 means no time change (feller, yule).
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1)]
    n0: u64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Initial population (gw).
    #[arg(long, default_value_t = 1)]
    j: u64,
    /// Offspring pmf as `k:p,k:p,...` (gw).
    #[arg(long, default_value = "0:0.25,1:0.25,2:0.5")]
    pmf: String,
    /// Waiting times: `deterministic:PERIOD`, `exponential:RATE`,
    /// `pareto:TAIL[:SCALE]` or `stable:BETA` (gw).
    #[arg(long, default_value = "deterministic:1")]
    wait: String,
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    /// Output grid intervals on `[0, t_max]`.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Operational-time step of the time change.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 1)]
    n_rep: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Atomic jump measure as `z:w,z:w,...`.
    #[arg(long)]
    jumps: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    #[arg(long, default_value_t = 4.0)]
    t_max: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PmfArgs {
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MlArgs {
    #[arg(long)]
    beta: f64,
    /// One or more arguments, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    x: Vec<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    kind: VerifyKind,
    #[arg(long)]
    preset: Option<Preset>,
    /// Replicates per Monte Carlo check (preset default otherwise).
    #[arg(long)]
    n_rep: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Domain { param, .. } => Self::usage(format!("--{}: {e}", flag_name(param))),
            Error::Precondition(_) | Error::Input(_) => Self::usage(e.to_string()),
            _ => Self {
                code: EXIT_NUMERICAL,
                message: e.to_string(),
            },
        }
    }
}

fn flag_name(param: &str) -> String {
    match param {
        "t" | "t_grid[0]" => "t".into(),
        "tail_index" | "scale" | "period" | "rate" => "wait".into(),
        "jump size" | "jump weight" => "jumps".into(),
        "x" | "u" => "x".into(),
        other => other.replace('_', "-"),
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    match run_inner(argv) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn run_inner(argv: Vec<String>) -> Result<i32, Failure> {
    let argv = expand_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    Failure::usage(format!("{THREADS_ENV}={v} is not a positive integer"))
                })?,
        ),
        Err(_) => None,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::usage(format!("cannot start worker threads: {e}")))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Simulate(a) => {
            let sink = open_output(&a.output)?;
            finish(sink, simulate(&a))
        }
        Command::Moments(a) => {
            let sink = open_output(&a.output)?;
            finish(sink, moments(&a))
        }
        Command::Pmf(a) => {
            let sink = open_output(&a.output)?;
            finish(sink, pmf(&a))
        }
        Command::MlEval(a) => {
            let sink = open_output(&a.output)?;
            finish(sink, ml_eval(&a))
        }
        Command::Verify(a) => {
            let preset = a.preset.unwrap_or(Preset::default_for(a.kind));
            if !preset.applies_to(a.kind) {
                return Err(Failure::usage(format!(
                    "--preset: {} does not apply to `verify {}`",
                    preset.name(),
                    a.kind.to_possible_value().expect("named").get_name()
                )));
            }
            if a.n_rep.is_some_and(|n| n < 2) {
                return Err(Failure::usage(
                    "--n-rep: at least 2 replicates are required",
                ));
            }
            let sink = open_output(&a.output)?;
            let mut all_pass = true;
            let table = verify::run_preset(preset, a.seed, a.n_rep).map(|rows| {
                let mut csv = Csv::new(&["check", "estimate", "target", "std_error", "pass"]);
                for r in rows {
                    all_pass &= r.pass;
                    csv.row(&[
                        r.check,
                        fmt_g17(r.estimate),
                        fmt_g17(r.target),
                        fmt_g17(r.std_error),
                        r.pass.to_string(),
                    ]);
                }
                csv
            });
            finish(sink, table)?;
            Ok(if all_pass {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

enum Sink {
    Stdout,
    File(PathBuf, File),
}

fn open_output(out: &Output) -> Result<Sink, Failure> {
    match &out.output {
        None => Ok(Sink::Stdout),
        Some(path) => File::create(path)
            .map(|f| Sink::File(path.clone(), f))
            .map_err(|e| Failure {
                code: EXIT_OUTPUT,
                message: format!("--output: cannot write {}: {e}", path.display()),
            }),
    }
}

fn finish(sink: Sink, table: crate::Result<Csv>) -> Result<i32, Failure> {
    let csv = match table {
        Ok(csv) => csv,
        Err(e) => {
            if let Sink::File(path, f) = sink {
                drop(f);
                let _ = std::fs::remove_file(path);
            }
            return Err(e.into());
        }
    };
    let written = match sink {
        Sink::Stdout => std::io::stdout().lock().write_all(csv.as_str().as_bytes()),
        Sink::File(_, mut f) => f.write_all(csv.as_str().as_bytes()).and_then(|_| f.flush()),
    };
    written.map_err(|e| Failure {
        code: EXIT_OUTPUT,
        message: format!("--output: write failed: {e}"),
    })?;
    Ok(EXIT_OK)
}

fn time_grid(t_max: f64, steps: usize) -> crate::Result<Vec<f64>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(crate::error::domain("t_max", t_max, "finite t_max > 0"));
    }
    if steps == 0 {
        return Err(crate::error::domain("steps", 0.0, "steps >= 1"));
    }
    Ok(GridFunction::uniform_grid(0.0, t_max, steps))
}

fn parse_pairs(flag: &str, text: &str) -> crate::Result<Vec<(f64, f64)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (a, b) = item.split_once(':').ok_or_else(|| {
                Error::Input(format!("--{flag}: expected `a:b` pairs, got `{item}`"))
            })?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Input(format!("--{flag}: `{s}` is not a number")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn parse_offspring(text: &str) -> crate::Result<OffspringLaw> {
    let pairs = parse_pairs("pmf", text)?;
    let mut out = Vec::with_capacity(pairs.len());
    for (k, p) in pairs {
        if !(k >= 0.0) || k.fract() != 0.0 || k > 1e6 {
            return Err(Error::Input(format!(
                "--pmf: offspring count {k} is not a small nonnegative integer"
            )));
        }
        out.push((k as usize, p));
    }
    OffspringLaw::from_pairs(&out).map_err(|e| Error::Input(format!("--pmf: {e}")))
}

fn parse_wait(text: &str) -> crate::Result<WaitingTimeLaw> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let num = |i: usize| -> crate::Result<f64> {
        parts
            .get(i)
            .ok_or_else(|| Error::Input(format!("--wait: `{text}` is missing a parameter")))?
            .parse::<f64>()
            .map_err(|_| Error::Input(format!("--wait: `{}` is not a number", parts[i])))
    };
    let law = match parts[0] {
        "deterministic" => WaitingTimeLaw::Deterministic { period: num(1)? },
        "exponential" => WaitingTimeLaw::Exponential { rate: num(1)? },
        "pareto" => WaitingTimeLaw::Pareto {
            tail_index: num(1)?,
            scale: if parts.len() > 2 { num(2)? } else { 1.0 },
        },
        "stable" => WaitingTimeLaw::Stable { beta: num(1)? },
        other => {
            return Err(Error::Input(format!(
                "--wait: unknown kind `{other}` (deterministic, exponential, pareto, stable)"
            )))
        }
    };
    law.validate()
        .map_err(|e| Error::Input(format!("--wait: {e}")))?;
    Ok(law)
}

fn simulate(a: &SimulateArgs) -> crate::Result<Csv> {
    let grid = time_grid(a.t_max, a.steps)?;
    if a.n_rep == 0 {
        return Err(crate::error::domain("n_rep", 0.0, "n_rep >= 1"));
    }
    let mut rng = RngStream::new(a.seed, 0);
    let paths: Vec<Vec<f64>> = match a.process {
        Process::Feller | Process::Yule => {
            let inner = if a.process == Process::Feller {
                InnerProcess::Feller {
                    x0: a.x0,
                    b: a.b,
                    c: a.c,
                }
            } else {
                InnerProcess::Yule {
                    n0: a.n0,
                    theta: a.theta,
                }
            };
            let spec = TcProcessSpec::new(inner, a.beta)?;
            if a.process == Process::Feller && a.beta == 1.0 {
                crate::mc::par_replicates(&mut rng, a.n_rep, |r| {
                    Ok(simulate_feller(a.x0, a.b, a.c, &grid, r)?.values().to_vec())
                })?
            } else {
                let plan = TimeChange::plan(spec, a.t_max, a.dt, &mut rng)?;
                crate::mc::par_replicates(&mut rng, a.n_rep, |r| {
                    Ok(plan.sample(&grid, r)?.values().to_vec())
                })?
            }
        }
        Process::Gw => {
            let law = parse_offspring(&a.pmf)?;
            let wait = parse_wait(&a.wait)?;
            crate::mc::par_replicates(&mut rng, a.n_rep, |r| {
                Ok(simulate_time_changed_gw(a.j, &law, &wait, &grid, r)?
                    .values()
                    .to_vec())
            })?
        }
    };
    let mut csv = Csv::new(&["replicate", "t", "value"]);
    for (i, path) in paths.iter().enumerate() {
        for (t, v) in grid.iter().zip(path) {
            csv.row(&[i.to_string(), fmt_g17(*t), fmt_g17(*v)]);
        }
    }
    Ok(csv)
}

fn moments(a: &MomentsArgs) -> crate::Result<Csv> {
    let grid = time_grid(a.t_max, a.steps)?;
    let jumps = match &a.jumps {
        Some(text) => parse_pairs("jumps", text)?,
        None => Vec::new(),
    };
    let mech = BranchingMechanism::new(a.b, a.c, jumps)?;
    let mut csv = Csv::new(&["t", "mean", "second_moment", "variance"]);
    for &t in &grid {
        let m1 = tc_mean(&mech, a.x, t, a.beta)?;
        let m2 = tc_second_moment(&mech, a.x, t, a.beta)?;
        csv.row(&[fmt_g17(t), fmt_g17(m1), fmt_g17(m2), fmt_g17(m2 - m1 * m1)]);
    }
    Ok(csv)
}

fn pmf(a: &PmfArgs) -> crate::Result<Csv> {
    if a.n_max == 0 {
        return Err(crate::error::domain("n_max", 0.0, "n_max >= 1"));
    }
    let values = yule_pmf_upto(a.n_max, a.t, a.theta, a.beta)?;
    let mut csv = Csv::new(&["n", "probability"]);
    for (i, p) in values.iter().enumerate() {
        csv.row(&[(i + 1).to_string(), fmt_g17(*p)]);
    }
    Ok(csv)
}

fn ml_eval(a: &MlArgs) -> crate::Result<Csv> {
    let mut csv = Csv::new(&["beta", "x", "value"]);
    for &x in &a.x {
        let v = mittag_leffler(a.beta, x)?;
        csv.row(&[fmt_g17(a.beta), fmt_g17(x), fmt_g17(v)]);
    }
    Ok(csv)
}

/// Replaces `--config FILE` by the flags it holds, placed right after the
/// subcommand so that explicit flags override them.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            path = Some(
                it.next()
                    .ok_or_else(|| Failure::usage("--config: missing file name"))?,
            );
        } else if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::usage(format!("--config: cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("--config: {path} is not valid JSON: {e}")))?;
    let serde_json::Value::Object(map) = value else {
        return Err(Failure::usage(format!(
            "--config: {path} must hold a JSON object"
        )));
    };
    let mut flags = Vec::new();
    for (key, v) in map {
        let flag = format!("--{key}");
        match v {
            serde_json::Value::Bool(true) => flags.push(flag),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::Number(n) => flags.extend([flag, n.to_string()]),
            serde_json::Value::String(s) => flags.extend([flag, s]),
            serde_json::Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                flags.extend([flag, joined.join(",")]);
            }
            serde_json::Value::Object(_) => {
                return Err(Failure::usage(format!(
                    "--config: key `{key}` holds a nested object"
                )))
            }
        }
    }
    let at = rest.len().min(2);
    rest.splice(at..at, flags);
    Ok(rest)
}
