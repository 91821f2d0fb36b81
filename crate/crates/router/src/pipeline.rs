//! Route one circuit, emit QASM, and verify both the schedule and the emitted text.

use std::time::Instant;

use codar_core::gate::{Circuit, Gate, GateKind};
use codar_core::qam::Architecture;
use codar_core::qasm::{emit_program, parse_program, validate, Diagnostic, ParseError};
use codar_core::router::{
    initial_mapping, route, RouteError, RouterConfig, Schedule, ScheduledGate,
};
use codar_core::verify::{
    coupling_violations, dependency_equivalence, statevector_oracle, verify, EquivalenceReport,
    Violation,
};

use crate::report::{PolicyDoc, RunReport, ScheduleDoc};

#[derive(Debug, Clone)]
pub struct RouteOptions {
    pub config: RouterConfig,
    pub decompose_swap: bool,
    pub oracle: bool,
    pub tolerance: f64,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions {
            config: RouterConfig::default(),
            decompose_swap: false,
            oracle: true,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{}", join(.0))]
    Diagnostics(Vec<Diagnostic>),
    #[error("{0}")]
    Route(#[from] RouteError),
    /// The emitted program could not be read back.
    #[error("emitted program does not parse: {0}")]
    Emitted(ParseError),
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone)]
pub struct RouteOutcome {
    pub report: RunReport,
    pub schedule: Schedule,
    pub qasm: String,
}

pub fn route_source(
    name: &str,
    text: &str,
    arch: &Architecture,
    opts: &RouteOptions,
) -> Result<RouteOutcome, PipelineError> {
    let circuit = parse_program(text)?;
    route_circuit(name, &circuit, arch, opts)
}

pub fn route_circuit(
    name: &str,
    circuit: &Circuit,
    arch: &Architecture,
    opts: &RouteOptions,
) -> Result<RouteOutcome, PipelineError> {
    let diags = validate(circuit, arch.num_qubits());
    if !diags.is_empty() {
        return Err(PipelineError::Diagnostics(diags));
    }
    let started = Instant::now();
    let init = initial_mapping(circuit, arch, &opts.config)?;
    let routed = route(circuit, arch, &init, &opts.config)?;
    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    let schedule = routed.schedule;

    let equivalence = verify(
        circuit,
        &schedule.items,
        &schedule.initial_mapping,
        &schedule.final_mapping,
        arch,
        opts.oracle,
        opts.tolerance,
    );
    let qasm = emit_program(&routed.circuit, opts.decompose_swap);
    let emitted_equivalence =
        reverify(circuit, &schedule, &qasm, arch, opts).map_err(PipelineError::Emitted)?;

    let report = RunReport {
        circuit: name.to_string(),
        arch: arch.name.clone(),
        policy: PolicyDoc::from(&opts.config),
        weighted_depth: schedule.weighted_depth,
        swap_count: schedule.swap_count,
        gate_count: schedule.items.len(),
        stall_events: schedule.stall_events,
        wall_time_ms,
        equivalence,
        emitted_equivalence,
        schedule: ScheduleDoc::from(&schedule),
    };
    Ok(RouteOutcome {
        report,
        schedule,
        qasm,
    })
}

fn is_swap_triple(gates: &[Gate], a: usize, b: usize) -> bool {
    gates.len() == 3
        && gates[0] == Gate::cx(a, b)
        && gates[1] == Gate::cx(b, a)
        && gates[2] == Gate::cx(a, b)
}

/// Parses `qasm` back and checks it against `original`.
///
/// Parsed gates are paired with schedule items by position so that inserted
/// SWAPs keep their origin. A decomposed SWAP is collapsed back from its
/// three CX gates. Any mismatch in gate count or shape is reported as an
/// extra or missing gate.
pub fn reverify(
    original: &Circuit,
    schedule: &Schedule,
    qasm: &str,
    arch: &Architecture,
    opts: &RouteOptions,
) -> Result<EquivalenceReport, ParseError> {
    let fail = |details: Vec<Violation>| EquivalenceReport {
        dependency_ok: false,
        oracle_ok: None,
        max_amplitude_error: None,
        details,
    };
    let parsed = parse_program(qasm)?;
    let mut items = Vec::with_capacity(schedule.items.len());
    let mut pos = 0;
    for (i, it) in schedule.items.iter().enumerate() {
        let decomposed = opts.decompose_swap && it.gate.kind == GateKind::Swap;
        let width = if decomposed { 3 } else { 1 };
        let Some(chunk) = parsed.gates.get(pos..pos + width) else {
            return Ok(fail(vec![Violation::MissingGate {
                index: it.origin.unwrap_or(i),
            }]));
        };
        let gate = if decomposed {
            let (a, b) = (it.gate.qubits[0], it.gate.qubits[1]);
            if !is_swap_triple(chunk, a, b) {
                return Ok(fail(vec![Violation::ExtraGate { position: pos }]));
            }
            Gate::swap(a, b)
        } else {
            chunk[0].clone()
        };
        items.push(ScheduledGate { gate, ..it.clone() });
        pos += width;
    }
    if pos != parsed.gates.len() {
        return Ok(fail(vec![Violation::ExtraGate { position: pos }]));
    }

    let mut details = dependency_equivalence(
        original,
        &items,
        &schedule.initial_mapping,
        &schedule.final_mapping,
        &arch.commutation,
    );
    details.extend(coupling_violations(&items, arch));
    let mut report = EquivalenceReport {
        dependency_ok: details.is_empty(),
        details,
        ..EquivalenceReport::default()
    };
    if opts.oracle {
        if let Ok(out) = statevector_oracle(
            original,
            &parsed,
            &schedule.initial_mapping,
            &schedule.final_mapping,
            opts.tolerance,
        ) {
            report.oracle_ok = Some(out.equivalent);
            report.max_amplitude_error = Some(out.max_amplitude_error);
        }
    }
    Ok(report)
}
