//! Lock-based, duration-aware SWAP routing.
//!
//! The router walks the execution timeline one cycle at a time. Each cycle
//! it launches every commutative-forward gate whose physical operands are
//! coupled and free, then greedily inserts lock-free SWAPs that shorten the
//! total distance of the two-qubit gates still waiting in the front.

mod heuristic;
mod locks;
mod state;

use alloc::vec::Vec;
use core::fmt;

pub use heuristic::{best_swap, candidate_swaps, heuristic_priority};
pub use locks::{LockViolation, QubitLocks};
pub use state::Router;

use crate::gate::{Circuit, Gate, GateKind};
use crate::mapping::{Mapping, MappingError};
use crate::qam::Architecture;
use crate::qasm::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitialMappingPolicy {
    #[default]
    Identity,
    /// Route the reversed circuit from the identity and start from where it ends.
    ReversePass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RouterConfig {
    /// Use the configured gate durations for locks; otherwise every gate takes one cycle.
    pub duration_aware: bool,
    /// Use the commutative-forward front; otherwise only gates without predecessors.
    pub commutativity: bool,
    pub initial_mapping: InitialMappingPolicy,
    /// Idle cycles before a forced route. `None` means the SWAP duration.
    pub stall_limit: Option<u64>,
    /// Scan at most this many pending gates when building the front.
    pub cf_window: Option<usize>,
}

impl Default for RouterConfig {
    fn default() -> Self {
        RouterConfig {
            duration_aware: true,
            commutativity: true,
            initial_mapping: InitialMappingPolicy::Identity,
            stall_limit: None,
            cf_window: None,
        }
    }
}

impl RouterConfig {
    /// Duration-unaware, no commutation analysis: the in-repo baseline.
    pub fn ablated() -> Self {
        RouterConfig {
            duration_aware: false,
            commutativity: false,
            ..RouterConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RouteError {
    TooManyQubits {
        needed: usize,
        available: usize,
    },
    InvalidCircuit(Vec<Diagnostic>),
    MissingDuration(GateKind),
    Mapping(MappingError),
    /// The initial mapping does not match the circuit or the device.
    MappingShape {
        logical: usize,
        physical: usize,
    },
    BadStallLimit,
}

impl fmt::Display for RouteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RouteError::TooManyQubits { needed, available } => write!(
                f,
                "circuit needs {needed} qubits but the architecture has {available}"
            ),
            RouteError::InvalidCircuit(diags) => {
                f.write_str("invalid circuit")?;
                for d in diags {
                    write!(f, "; {d}")?;
                }
                Ok(())
            }
            RouteError::MissingDuration(k) => write!(f, "no duration configured for `{k}`"),
            RouteError::Mapping(e) => write!(f, "initial mapping: {e}"),
            RouteError::MappingShape { logical, physical } => write!(
                f,
                "initial mapping covers {logical} logical / {physical} physical qubits, which does not match the input"
            ),
            RouteError::BadStallLimit => f.write_str("stall limit must be at least 1"),
        }
    }
}

impl core::error::Error for RouteError {}

impl From<MappingError> for RouteError {
    fn from(e: MappingError) -> Self {
        RouteError::Mapping(e)
    }
}

/// One gate of the final timeline, on physical qubits.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScheduledGate {
    pub gate: Gate,
    pub start: u64,
    /// True duration of the gate kind.
    pub duration: u64,
    /// Start cycle in the timeline the router made its decisions on. Equal to
    /// `start` unless the run was duration-unaware or the timeline was compacted.
    pub decision_start: u64,
    /// Index of the source gate, `None` for inserted SWAPs.
    pub origin: Option<usize>,
}

impl ScheduledGate {
    pub fn end(&self) -> u64 {
        self.start + self.duration
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Schedule {
    /// Sorted by start cycle, then launch order.
    pub items: Vec<ScheduledGate>,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub weighted_depth: u64,
    pub swap_count: usize,
    pub stall_events: usize,
}

impl Schedule {
    /// Physical-qubit circuit in timeline order, SWAPs included.
    pub fn to_circuit(&self) -> Circuit {
        Circuit::from_gates(
            self.final_mapping.num_physical(),
            self.items.iter().map(|i| i.gate.clone()).collect(),
        )
    }
}

/// `max(start + duration)` over the items, 0 when empty.
pub fn weighted_depth(items: &[ScheduledGate]) -> u64 {
    items.iter().map(ScheduledGate::end).max().unwrap_or(0)
}

/// Appends `gate` at `start`, occupying its qubits for `duration` cycles.
pub fn launch(
    locks: &mut QubitLocks,
    items: &mut Vec<ScheduledGate>,
    gate: Gate,
    start: u64,
    duration: u64,
    origin: Option<usize>,
) -> Result<(), LockViolation> {
    locks.acquire(&gate, start, duration)?;
    items.push(ScheduledGate {
        gate,
        start,
        duration,
        decision_start: start,
        origin,
    });
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Routed {
    pub schedule: Schedule,
    /// The routed program over the device's physical qubits.
    pub circuit: Circuit,
}

/// Routes `circuit` from `init` until every gate is scheduled.
pub fn route(
    circuit: &Circuit,
    arch: &Architecture,
    init: &Mapping,
    cfg: &RouterConfig,
) -> Result<Routed, RouteError> {
    let mut router = Router::new(circuit, arch, init.clone(), cfg)?;
    while !router.is_done() {
        router.step();
    }
    Ok(router.finish())
}

/// Starting placement for `circuit` under `cfg.initial_mapping`.
pub fn initial_mapping(
    circuit: &Circuit,
    arch: &Architecture,
    cfg: &RouterConfig,
) -> Result<Mapping, RouteError> {
    if circuit.num_qubits > arch.num_qubits() {
        return Err(RouteError::TooManyQubits {
            needed: circuit.num_qubits,
            available: arch.num_qubits(),
        });
    }
    let identity = Mapping::identity(circuit.num_qubits, arch.num_qubits())?;
    match cfg.initial_mapping {
        InitialMappingPolicy::Identity => Ok(identity),
        InitialMappingPolicy::ReversePass => {
            let routed = route(&circuit.reversed(), arch, &identity, cfg)?;
            Ok(routed.schedule.final_mapping)
        }
    }
}

/// [`initial_mapping`] followed by [`route`].
pub fn route_with_policy(
    circuit: &Circuit,
    arch: &Architecture,
    cfg: &RouterConfig,
) -> Result<Routed, RouteError> {
    let init = initial_mapping(circuit, arch, cfg)?;
    route(circuit, arch, &init, cfg)
}
