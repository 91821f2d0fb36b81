//! JSON and CSV documents written by the CLI.

use serde::{Deserialize, Serialize};

use codar_core::router::{RouterConfig, Schedule};
use codar_core::verify::EquivalenceReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemDoc {
    pub gate: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    pub start: u64,
    pub duration: u64,
    /// True for SWAPs added by the router.
    pub inserted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub items: Vec<ItemDoc>,
    pub initial_mapping: Vec<usize>,
    pub final_mapping: Vec<usize>,
    pub weighted_depth: u64,
    pub swap_count: usize,
    pub stall_events: usize,
}

impl From<&Schedule> for ScheduleDoc {
    fn from(s: &Schedule) -> Self {
        ScheduleDoc {
            items: s
                .items
                .iter()
                .map(|it| ItemDoc {
                    gate: it.gate.kind.name().to_string(),
                    qubits: it.gate.qubits.clone(),
                    params: it.gate.params.clone(),
                    start: it.start,
                    duration: it.duration,
                    inserted: it.origin.is_none(),
                })
                .collect(),
            initial_mapping: s.initial_mapping.forward().to_vec(),
            final_mapping: s.final_mapping.forward().to_vec(),
            weighted_depth: s.weighted_depth,
            swap_count: s.swap_count,
            stall_events: s.stall_events,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDoc {
    pub duration_aware: bool,
    pub commutativity: bool,
    pub initial_mapping: codar_core::router::InitialMappingPolicy,
}

impl From<&RouterConfig> for PolicyDoc {
    fn from(c: &RouterConfig) -> Self {
        PolicyDoc {
            duration_aware: c.duration_aware,
            commutativity: c.commutativity,
            initial_mapping: c.initial_mapping,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub circuit: String,
    pub arch: String,
    pub policy: PolicyDoc,
    pub weighted_depth: u64,
    pub swap_count: usize,
    pub gate_count: usize,
    pub stall_events: usize,
    pub wall_time_ms: f64,
    /// Checks against the schedule the router produced.
    pub equivalence: EquivalenceReport,
    /// Checks against the emitted QASM after parsing it back.
    pub emitted_equivalence: EquivalenceReport,
    pub schedule: ScheduleDoc,
}

impl RunReport {
    pub fn verified(&self) -> bool {
        self.equivalence.is_ok() && self.emitted_equivalence.is_ok()
    }
}

/// Depths of one circuit on one device under the full and ablated policies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub circuit: String,
    pub arch: String,
    pub depth_full: u64,
    pub depth_ablated: u64,
    /// `depth_ablated / depth_full`; 1 when the full depth is 0.
    pub speedup_ratio: f64,
}

/// One routed (circuit, device, policy) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub circuit: String,
    pub arch: String,
    pub policy: String,
    pub depth: u64,
    pub swaps: usize,
    pub stalls: usize,
    /// This depth over the full-policy depth of the same circuit and device.
    pub ratio: f64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Skipped {
    pub circuit: String,
    /// Empty when the file failed before any device was tried.
    pub arch: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchSummary {
    pub arch: String,
    pub circuits: usize,
    pub mean_speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub comparisons: Vec<ComparisonRow>,
    pub summary: Vec<ArchSummary>,
    pub skipped: Vec<Skipped>,
    pub errors: Vec<Skipped>,
}

impl BenchReport {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }

    /// CSV with columns `circuit,arch,policy,depth,swaps,stalls,ratio`.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "circuit", "arch", "policy", "depth", "swaps", "stalls", "ratio",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.circuit.clone(),
                r.arch.clone(),
                r.policy.clone(),
                r.depth.to_string(),
                r.swaps.to_string(),
                r.stalls.to_string(),
                format!("{:.6}", r.ratio),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn depth_ratio(depth: u64, reference: u64) -> f64 {
    if reference == 0 {
        1.0
    } else {
        depth as f64 / reference as f64
    }
}
