//! Command-line interface.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use codar_core::router::{InitialMappingPolicy, RouterConfig};

use crate::bench::{run_bench, BenchOptions, Policy};
use crate::pipeline::{route_source, PipelineError, RouteOptions};
use crate::presets;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNVERIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "codar-router",
    version,
    about = "Duration- and commutation-aware qubit routing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Identity,
    Reverse,
}

impl From<InitArg> for InitialMappingPolicy {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Identity => InitialMappingPolicy::Identity,
            InitArg::Reverse => InitialMappingPolicy::ReversePass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    /// Run the statevector check when the circuit is small enough.
    Auto,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Route one OpenQASM 2.0 file.
    Route {
        /// Preset name, `grid:RxC`, or path to an architecture JSON file.
        #[arg(long)]
        arch: String,
        #[arg(long)]
        input: PathBuf,
        /// Routed QASM; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// JSON run report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        no_duration_aware: bool,
        #[arg(long)]
        no_commutativity: bool,
        #[arg(long, value_enum, default_value = "identity")]
        init: InitArg,
        /// Write each SWAP as three CX gates.
        #[arg(long)]
        decompose_swap: bool,
        #[arg(long, value_enum, default_value = "auto")]
        oracle: OracleArg,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Idle cycles before a forced route; defaults to the SWAP duration.
        #[arg(long)]
        stall_limit: Option<u64>,
    },
    /// Route every `.qasm` file of a directory under the full and ablated policies.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        /// Repeatable; preset name, `grid:RxC`, or JSON path.
        #[arg(long = "arch", required = true)]
        archs: Vec<String>,
        /// Extra policies to route besides `full` and `ablated`.
        #[arg(long = "policy", value_enum)]
        policies: Vec<Policy>,
        #[arg(long, value_enum, default_value = "identity")]
        init: InitArg,
        #[arg(long, value_enum, default_value = "auto")]
        oracle: OracleArg,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the bundled architectures.
    Presets,
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Route {
            arch,
            input,
            output,
            report,
            no_duration_aware,
            no_commutativity,
            init,
            decompose_swap,
            oracle,
            tolerance,
            stall_limit,
        } => {
            let arch = presets::resolve(&arch)?;
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let opts = RouteOptions {
                config: RouterConfig {
                    duration_aware: !no_duration_aware,
                    commutativity: !no_commutativity,
                    initial_mapping: init.into(),
                    stall_limit,
                    cf_window: None,
                },
                decompose_swap,
                oracle: oracle == OracleArg::Auto,
                tolerance,
            };
            let name = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let outcome = match route_source(&name, &text, &arch, &opts) {
                Ok(o) => o,
                Err(PipelineError::Emitted(e)) => {
                    eprintln!("verification failed: emitted program does not parse: {e}");
                    return Ok(EXIT_UNVERIFIED);
                }
                Err(e) => return Err(e).with_context(|| format!("routing {}", input.display())),
            };
            match &output {
                Some(p) => write(p, &outcome.qasm)?,
                None => print!("{}", outcome.qasm),
            }
            if let Some(p) = &report {
                write(p, &(serde_json::to_string_pretty(&outcome.report)? + "\n"))?;
            }
            let r = &outcome.report;
            eprintln!(
                "{}: depth {} swaps {} stalls {} on {}",
                r.circuit, r.weighted_depth, r.swap_count, r.stall_events, r.arch
            );
            if r.verified() {
                Ok(EXIT_OK)
            } else {
                for v in r
                    .equivalence
                    .details
                    .iter()
                    .chain(&r.emitted_equivalence.details)
                {
                    eprintln!("verification: {v}");
                }
                if r.equivalence.oracle_ok == Some(false)
                    || r.emitted_equivalence.oracle_ok == Some(false)
                {
                    eprintln!("verification: statevector mismatch");
                }
                Ok(EXIT_UNVERIFIED)
            }
        }
        Command::Bench {
            corpus,
            archs,
            policies,
            init,
            oracle,
            csv,
            json,
        } => {
            let opts = BenchOptions {
                archs,
                policies,
                init: init.into(),
                oracle: oracle == OracleArg::Auto,
                ..BenchOptions::default()
            };
            let report = run_bench(&corpus, &opts)?;
            let table = report.to_csv()?;
            match &csv {
                Some(p) => write(p, &table)?,
                None => print!("{table}"),
            }
            if let Some(p) = &json {
                write(p, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            for s in &report.summary {
                eprintln!(
                    "{}: {} circuits, mean ablated/full depth {:.3}",
                    s.arch, s.circuits, s.mean_speedup
                );
            }
            for s in &report.skipped {
                eprintln!("skipped {} on {}: {}", s.circuit, s.arch, s.reason);
            }
            for s in &report.errors {
                eprintln!("error in {}: {}", s.circuit, s.reason);
            }
            Ok(if report.all_verified() {
                EXIT_OK
            } else {
                EXIT_UNVERIFIED
            })
        }
        Command::Presets => {
            for (name, _) in presets::PRESETS {
                let a = presets::resolve(name)?;
                println!(
                    "{name}\t{} qubits\t{} edges",
                    a.num_qubits(),
                    a.graph.edges().len()
                );
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses arguments, runs, and maps errors to exit code 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
