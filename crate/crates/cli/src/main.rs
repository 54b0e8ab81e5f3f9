//! `olct`: transforms, moment identities and uncertainty-bound checks from
//! TOML scenario files.
//!
//! Exit codes: 0 every requested check passed, 1 a check failed,
//! 2 configuration error, 3 numerical precondition failure.

mod commands;
mod config;
mod error;
mod repro;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use commands::{Context, Outcome};
use config::{parse_grid_flag, BoundKind, ScenarioConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "olct", version, about = "Offset linear canonical transform and uncertainty-bound checks")]
struct Cli {
    /// Scenario file (TOML). Omitted fields take their defaults.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Built-in scenario; see `olct list`.
    #[arg(long, global = true, value_name = "NAME")]
    scenario: Option<String>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Inequality tolerance, overriding `tolerance.inequality`.
    #[arg(long, global = true, value_name = "X", allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Time grid as `T_MIN:T_MAX:N`, overriding `[grid]`.
    #[arg(long, global = true, value_name = "T_MIN:T_MAX:N", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Print the machine-readable report (and errors) as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the transform; writes spectrum.csv and checks Parseval.
    Transform,
    /// Compare the 2p-th spectral moment with the derivative energy.
    Ppr,
    /// Check a lower bound on the moment product; writes report.json and report.csv.
    Verify {
        /// Bound to check, overriding `bound.kind`.
        #[arg(long, value_enum)]
        bound: Option<BoundKind>,
    },
    /// Q1 and Q2 over the `sweep.r_values` of the Gaussian-chirp family.
    Sweep,
    /// Closed-form squared bounds for `table1.r_values`.
    Table1,
    /// G(r) on the `[gcurve]` range.
    Gcurve,
    /// Energy densities in the time, weighted, Fourier and transform domains.
    Energy,
    /// List the built-in scenarios.
    List,
    /// Print the fully resolved configuration as TOML.
    ShowConfig,
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut config = if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        ScenarioConfig::parse(&text)?
    } else if let Some(name) = &cli.scenario {
        let e = repro::find(name).ok_or_else(|| {
            let names: Vec<&str> = repro::EMBEDDED.iter().map(|e| e.name).collect();
            CliError::config("--scenario", format!("unknown scenario `{name}` (known: {})", names.join(", ")))
        })?;
        ScenarioConfig::parse(e.text)?
    } else {
        ScenarioConfig::default()
    };
    if let Some(out) = &cli.out {
        config.output.dir = out.display().to_string();
    }
    if let Some(tol) = cli.tol {
        if !(tol >= 0.0) || !tol.is_finite() {
            return Err(CliError::config("--tol", format!("must be a finite nonnegative number, got {tol}")));
        }
        config.tolerance.inequality = tol;
    }
    if let Some(g) = &cli.grid {
        config.grid = parse_grid_flag(g)?;
    }
    Ok(config)
}

/// Sizes the global pool from `OLCT_NUM_THREADS` when set.
fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("OLCT_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config("OLCT_NUM_THREADS", format!("expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config("OLCT_NUM_THREADS", e.to_string()))
}

fn list() -> Outcome {
    let mut lines = Vec::new();
    let mut items = Vec::new();
    for e in repro::EMBEDDED {
        lines.push(format!("{:<12} {:<10} {}", e.name, e.command, repro::summary(e)));
        let mut m = Map::new();
        m.insert("name".into(), Value::String(e.name.into()));
        m.insert("command".into(), Value::String(e.command.into()));
        m.insert("summary".into(), Value::String(repro::summary(e).into()));
        items.push(Value::Object(m));
    }
    Outcome {
        passed: true,
        lines,
        json: Value::Array(items),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    init_threads()?;
    if let Command::List = cli.command {
        return Ok(list());
    }
    let config = load_config(cli)?;
    if let Command::ShowConfig = cli.command {
        let text = config.to_toml();
        let mut m = Map::new();
        m.insert("toml".into(), Value::String(text.clone()));
        return Ok(Outcome {
            passed: true,
            lines: vec![text.trim_end().to_string()],
            json: Value::Object(m),
        });
    }
    let ctx = Context {
        out: PathBuf::from(&config.output.dir),
        config,
    };
    match &cli.command {
        Command::Transform => ctx.transform(),
        Command::Ppr => ctx.ppr(),
        Command::Verify { bound } => ctx.verify(*bound),
        Command::Sweep => ctx.sweep(),
        Command::Table1 => ctx.table1(),
        Command::Gcurve => ctx.gcurve(),
        Command::Energy => ctx.energy(),
        Command::List | Command::ShowConfig => unreachable!("handled above"),
    }
}

/// Writes to stdout; a closed pipe (`olct ... | head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn report_error(e: &CliError, json: bool) {
    if json {
        let (path, message) = match e {
            CliError::Config { path, message } | CliError::Numerical { path, message } => (path.clone(), message.clone()),
            CliError::Io(err) => (String::new(), err.to_string()),
        };
        let mut inner = Map::new();
        inner.insert("kind".into(), Value::String(e.kind().into()));
        inner.insert("path".into(), Value::String(path));
        inner.insert("message".into(), Value::String(message));
        inner.insert("exit_code".into(), Value::from(e.exit_code()));
        let mut m = Map::new();
        m.insert("error".into(), Value::Object(inner));
        eprintln!("{}", serde_json::to_string_pretty(&Value::Object(m)).expect("serialises"));
    } else {
        eprintln!("error ({}): {e}", e.kind());
    }
}

fn main() -> ExitCode {
    let json_requested = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::config("arguments", e.render().to_string().trim_end());
            report_error(&err, json_requested);
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut text = if cli.json {
                serde_json::to_string_pretty(&outcome.json).expect("serialises")
            } else {
                outcome.lines.join("\n")
            };
            text.push('\n');
            emit(&text);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            report_error(&e, cli.json);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
