//! Thin CLI over the library: each subcommand parses JSON inputs, calls one
//! library entry point, and emits a JSON report on stdout or to `--out`.
//!
//! Exit codes: 0 success (all assertions passing), 1 assertion or numerical
//! failure, 2 input error. `KN_THREADS` caps the worker pool.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::json;

use knorbit::atlas::{run_survey, SurveyConfig};
use knorbit::cjson;
use knorbit::flow::{minimize_norm, FlowConfig};
use knorbit::invariants::d4_invariant_set;
use knorbit::rep::{rep_from_label, StateVector};
use knorbit::scenarios::run_example;
use knorbit::stabilizer::stabilizer_lie;
use knorbit::{KnError, tol};

#[derive(Parser)]
#[command(name = "kn", about = "Kempf-Ness orbit toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the norm-minimization flow on a state vector.
    Flow {
        #[arg(long)]
        rep: String,
        /// JSON file: array of [re, im] entries.
        #[arg(long)]
        input: PathBuf,
        /// JSON file with flow parameters (defaults apply per field).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the infinitesimal stabilizer at a state vector.
    Stabilizer {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the built-in invariants at a matrix or flattened vector.
    Invariants {
        /// `so4pair` (direct) or `sl2x4` (pulled back through the spin map).
        #[arg(long)]
        domain: String,
        /// JSON file: 4x4 matrix of [re, im] rows, or a flat 16-vector.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized orbit survey.
    Survey {
        #[arg(long)]
        rep: String,
        #[arg(short = 'n', long = "samples")]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Also evaluate invariants at every sample (sl2x4/so4pair only).
        #[arg(long)]
        invariants: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named built-in scenario (e1_nilpotent, e1_diag, e2_critical).
    Example {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // library input errors map to 2, numerical/assertion failures to 1
            match err.downcast_ref::<KnError>() {
                Some(KnError::Numerics(_)) => ExitCode::from(1),
                Some(_) => ExitCode::from(2),
                None => ExitCode::from(2),
            }
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    configure_threads()?;
    let cli = Cli::parse();
    match cli.command {
        Command::Flow { rep, input, config, out } => {
            let rep = rep_from_label(&rep)?;
            let v = read_state_vector(&input)?;
            let cfg: FlowConfig = match config {
                Some(path) => serde_json::from_str(&read_file(&path)?)
                    .with_context(|| format!("parsing flow config {}", path.display()))?,
                None => FlowConfig::default(),
            };
            let result = minimize_norm(&rep, &v, &cfg)?;
            emit(&with_timestamp(result.to_json()), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stabilizer { rep, input, out } => {
            let rep = rep_from_label(&rep)?;
            let v = read_state_vector(&input)?;
            let report = stabilizer_lie(&rep, &v)?;
            emit(&with_timestamp(serde_json::to_value(&report)?), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { domain, input, out } => {
            let set = match domain.as_str() {
                "so4pair" => d4_invariant_set(),
                "sl2x4" => d4_invariant_set().pullback_via_spin()?,
                other => anyhow::bail!(KnError::UnknownLabel(other.to_string())),
            };
            let raw: serde_json::Value = serde_json::from_str(&read_file(&input)?)
                .with_context(|| format!("parsing {}", input.display()))?;
            let x = cjson::vector_or_flattened_matrix(&raw)?;
            let evaluated = set.evaluate_all(&x)?;
            let in_null_cone = evaluated.all_below(tol::NULL_CONE_TEST);
            let mut value = serde_json::to_value(&evaluated)?;
            value["null_cone"] = json!(in_null_cone);
            value["domain"] = json!(set.domain_label());
            emit(&with_timestamp(value), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Survey { rep, n, seed, invariants, out } => {
            let mut cfg = SurveyConfig::new(rep, n, seed);
            cfg.with_invariants = invariants;
            let report = run_survey(&cfg)?;
            emit(&with_timestamp(serde_json::to_value(&report)?), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Example { name, out } => {
            let report = run_example(&name)?;
            emit(&with_timestamp(serde_json::to_value(&report)?), out.as_deref())?;
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("scenario `{name}` failed {} assertion(s)",
                    report.assertions.iter().filter(|a| !a.passed).count());
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("KN_THREADS") {
        let n: usize = raw
            .parse()
            .map_err(|_| KnError::InvalidInput(format!("KN_THREADS must be a positive integer, got `{raw}`")))?;
        if n == 0 {
            anyhow::bail!(KnError::InvalidInput("KN_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker pool")?;
    }
    Ok(())
}

fn read_file(path: &std::path::Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_state_vector(path: &std::path::Path) -> anyhow::Result<StateVector> {
    let raw: serde_json::Value = serde_json::from_str(&read_file(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    let entries = cjson::vector_or_flattened_matrix(&raw)?;
    Ok(StateVector::new(entries)?)
}

fn with_timestamp(mut value: serde_json::Value) -> serde_json::Value {
    if let Some(obj) = value.as_object_mut() {
        let ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        obj.insert("generated_unix_ms".into(), json!(ms));
    }
    value
}

fn emit(value: &serde_json::Value, out: Option<&std::path::Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}
