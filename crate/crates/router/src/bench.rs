//! Batch routing of a corpus over several devices and policies.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use codar_core::gate::Circuit;
use codar_core::qam::Architecture;
use codar_core::qasm::parse_program;
use codar_core::router::{InitialMappingPolicy, RouterConfig};

use crate::pipeline::{route_circuit, RouteOptions};
use crate::presets::{self, ArchError};
use crate::report::{depth_ratio, ArchSummary, BenchReport, BenchRow, ComparisonRow, Skipped};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Policy {
    /// Duration-aware with the commutative-forward front.
    Full,
    /// Unit durations and the plain dependency front.
    Ablated,
    /// Unit durations with the commutative-forward front.
    NoDuration,
    /// True durations with the plain dependency front.
    NoCommutativity,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Full => "full",
            Policy::Ablated => "ablated",
            Policy::NoDuration => "no-duration",
            Policy::NoCommutativity => "no-commutativity",
        }
    }

    pub fn config(self, init: InitialMappingPolicy) -> RouterConfig {
        let (duration_aware, commutativity) = match self {
            Policy::Full => (true, true),
            Policy::Ablated => (false, false),
            Policy::NoDuration => (false, true),
            Policy::NoCommutativity => (true, false),
        };
        RouterConfig {
            duration_aware,
            commutativity,
            initial_mapping: init,
            ..RouterConfig::default()
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub archs: Vec<String>,
    /// Routed in addition to `full` and `ablated`.
    pub policies: Vec<Policy>,
    pub init: InitialMappingPolicy,
    pub oracle: bool,
    pub tolerance: f64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            archs: Vec::new(),
            policies: Vec::new(),
            init: InitialMappingPolicy::Identity,
            oracle: true,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("reading corpus {path}")]
    Corpus {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Arch(#[from] ArchError),
}

/// `.qasm` files directly under `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let err = |source| BenchError::Corpus {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(err)? {
        let path = entry.map_err(err)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "qasm") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

enum Outcome {
    Row(BenchRow),
    Skipped(Skipped),
    Error(Skipped),
}

fn run_one(
    name: &str,
    circuit: &Circuit,
    arch: &Architecture,
    policies: &[Policy],
    opts: &BenchOptions,
) -> Vec<Outcome> {
    if circuit.num_qubits > arch.num_qubits() {
        return vec![Outcome::Skipped(Skipped {
            circuit: name.to_string(),
            arch: arch.name.clone(),
            reason: format!(
                "needs {} qubits, device has {}",
                circuit.num_qubits,
                arch.num_qubits()
            ),
        })];
    }
    let mut out = Vec::new();
    for &policy in policies {
        let ropts = RouteOptions {
            config: policy.config(opts.init),
            decompose_swap: false,
            oracle: opts.oracle,
            tolerance: opts.tolerance,
        };
        match route_circuit(name, circuit, arch, &ropts) {
            Ok(o) => out.push(Outcome::Row(BenchRow {
                circuit: name.to_string(),
                arch: arch.name.clone(),
                policy: policy.name().to_string(),
                depth: o.report.weighted_depth,
                swaps: o.report.swap_count,
                stalls: o.report.stall_events,
                ratio: 0.0,
                verified: o.report.verified(),
            })),
            Err(e) => {
                return vec![Outcome::Error(Skipped {
                    circuit: name.to_string(),
                    arch: arch.name.clone(),
                    reason: format!("{}: {e}", policy.name()),
                })]
            }
        }
    }
    out
}

/// Routes every corpus file on every device. Per-file failures are recorded
/// in the report and do not stop the batch.
pub fn run_bench(corpus: &Path, opts: &BenchOptions) -> Result<BenchReport, BenchError> {
    let mut archs: Vec<Architecture> = Vec::new();
    for spec in &opts.archs {
        let arch = presets::resolve(spec)?;
        if !archs.iter().any(|a| a.name == arch.name) {
            archs.push(arch);
        }
    }
    let files = corpus_files(corpus)?;
    let mut policies = vec![Policy::Full, Policy::Ablated];
    policies.extend(opts.policies.iter().copied());
    policies.sort();
    policies.dedup();

    let mut report = BenchReport::default();
    let mut circuits = Vec::new();
    for path in &files {
        let name = stem(path);
        let parsed = std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_program(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(c) => circuits.push((name, c)),
            Err(reason) => report.errors.push(Skipped {
                circuit: name,
                arch: String::new(),
                reason,
            }),
        }
    }

    let jobs: Vec<(&str, &Circuit, &Architecture)> = circuits
        .iter()
        .flat_map(|(n, c)| archs.iter().map(move |a| (n.as_str(), c, a)))
        .collect();
    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .flat_map_iter(|&(n, c, a)| run_one(n, c, a, &policies, opts))
        .collect();
    for o in outcomes {
        match o {
            Outcome::Row(r) => report.rows.push(r),
            Outcome::Skipped(s) => report.skipped.push(s),
            Outcome::Error(s) => report.errors.push(s),
        }
    }

    let full: BTreeMap<(String, String), u64> = report
        .rows
        .iter()
        .filter(|r| r.policy == Policy::Full.name())
        .map(|r| ((r.circuit.clone(), r.arch.clone()), r.depth))
        .collect();
    for r in &mut report.rows {
        r.ratio = depth_ratio(r.depth, full[&(r.circuit.clone(), r.arch.clone())]);
    }
    report
        .rows
        .sort_by(|a, b| (&a.circuit, &a.arch, &a.policy).cmp(&(&b.circuit, &b.arch, &b.policy)));
    report.skipped.sort();
    report.errors.sort();

    report.comparisons = report
        .rows
        .iter()
        .filter(|r| r.policy == Policy::Ablated.name())
        .map(|r| {
            let depth_full = full[&(r.circuit.clone(), r.arch.clone())];
            ComparisonRow {
                circuit: r.circuit.clone(),
                arch: r.arch.clone(),
                depth_full,
                depth_ablated: r.depth,
                speedup_ratio: depth_ratio(r.depth, depth_full),
            }
        })
        .collect();
    for arch in &archs {
        let ratios: Vec<f64> = report
            .comparisons
            .iter()
            .filter(|c| c.arch == arch.name)
            .map(|c| c.speedup_ratio)
            .collect();
        let mean = if ratios.is_empty() {
            0.0
        } else {
            ratios.iter().sum::<f64>() / ratios.len() as f64
        };
        report.summary.push(ArchSummary {
            arch: arch.name.clone(),
            circuits: ratios.len(),
            mean_speedup: mean,
        });
    }
    Ok(report)
}
