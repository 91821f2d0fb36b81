//! Equivalence checks between a source circuit and its routed form.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::commute::{op_on, CommutationTable, QubitOp};
use crate::gate::{Circuit, Gate, GateKind};
use crate::mapping::Mapping;
use crate::qam::Architecture;
use crate::router::ScheduledGate;
use crate::sim::StateVector;

/// Largest logical register the statevector oracle accepts.
pub const ORACLE_MAX_LOGICAL: usize = 10;
/// Largest number of distinct physical qubits the oracle will simulate.
pub const ORACLE_MAX_PHYSICAL: usize = 20;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Violation {
    /// A source gate has no counterpart in the routed circuit.
    MissingGate { index: usize },
    /// A routed gate matches no remaining source gate.
    ExtraGate { position: usize },
    /// A routed gate acts on a physical qubit with no logical occupant.
    UnoccupiedQubit { position: usize, physical: usize },
    /// Two non-commuting source gates were reordered.
    Reordered { first: usize, second: usize },
    /// A two-qubit gate sits on an uncoupled pair.
    Uncoupled { position: usize },
    /// Replaying the inserted SWAPs does not reach the reported final mapping.
    FinalMapping,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingGate { index } => write!(f, "missing gate: source gate #{index}"),
            Violation::ExtraGate { position } => {
                write!(f, "extra gate at routed position {position}")
            }
            Violation::UnoccupiedQubit { position, physical } => write!(
                f,
                "routed gate {position} acts on unoccupied physical qubit {physical}"
            ),
            Violation::Reordered { first, second } => write!(
                f,
                "source gates #{first} and #{second} do not commute but were reordered"
            ),
            Violation::Uncoupled { position } => {
                write!(f, "routed gate {position} is on an uncoupled pair")
            }
            Violation::FinalMapping => f.write_str("final mapping does not match SWAP replay"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceReport {
    pub dependency_ok: bool,
    /// Present only when the statevector oracle ran.
    pub oracle_ok: Option<bool>,
    pub max_amplitude_error: Option<f64>,
    pub details: Vec<Violation>,
}

/// Checks that `routed` is `original` plus SWAPs, up to exchanges of
/// commuting gates.
///
/// Items with `origin == None` are treated as inserted SWAPs and replayed
/// onto the mapping; every other item is mapped back to logical operands and
/// matched structurally against the source. The source order of every
/// non-commuting pair sharing a qubit must be preserved.
pub fn dependency_equivalence(
    original: &Circuit,
    routed: &[ScheduledGate],
    init: &Mapping,
    final_mapping: &Mapping,
    table: &CommutationTable,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut mapping = init.clone();

    // (kind, operands) -> unmatched source indices, in program order.
    let mut buckets: BTreeMap<(GateKind, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for (i, g) in original.gates.iter().enumerate() {
        buckets
            .entry((g.kind, g.qubits.clone()))
            .or_default()
            .push(i);
    }
    let mut position = vec![usize::MAX; original.gates.len()];

    for (pos, item) in routed.iter().enumerate() {
        if item.origin.is_none() && item.gate.kind == GateKind::Swap {
            mapping.swap_physical(item.gate.qubits[0], item.gate.qubits[1]);
            continue;
        }
        let mut operands = Vec::with_capacity(item.gate.qubits.len());
        for &p in &item.gate.qubits {
            match mapping.logical(p) {
                Some(l) => operands.push(l),
                None => violations.push(Violation::UnoccupiedQubit {
                    position: pos,
                    physical: p,
                }),
            }
        }
        if operands.len() != item.gate.qubits.len() {
            continue;
        }
        let found = buckets
            .get_mut(&(item.gate.kind, operands))
            .and_then(|cands| {
                let k = cands
                    .iter()
                    .position(|&i| original.gates[i].params == item.gate.params)?;
                Some(cands.remove(k))
            });
        match found {
            Some(i) => position[i] = pos,
            None => violations.push(Violation::ExtraGate { position: pos }),
        }
    }
    if &mapping != final_mapping {
        violations.push(Violation::FinalMapping);
    }
    for (i, &p) in position.iter().enumerate() {
        if p == usize::MAX {
            violations.push(Violation::MissingGate { index: i });
        }
    }

    // Per qubit, remember for each operation kind the latest routed position
    // among earlier source gates; a later non-commuting gate must come after it.
    let mut latest: Vec<BTreeMap<QubitOp, (usize, usize)>> =
        vec![BTreeMap::new(); original.num_qubits];
    for (j, g) in original.gates.iter().enumerate() {
        let pj = position[j];
        for &q in &g.qubits {
            let op = op_on(g, q).expect("gate touches its own qubit");
            if pj != usize::MAX {
                for (&seen, &(pi, i)) in &latest[q] {
                    if pi > pj && !table.allows(seen, op) {
                        violations.push(Violation::Reordered {
                            first: i,
                            second: j,
                        });
                    }
                }
            }
        }
        if pj == usize::MAX {
            continue;
        }
        for &q in &g.qubits {
            let op = op_on(g, q).expect("gate touches its own qubit");
            let slot = latest[q].entry(op).or_insert((pj, j));
            if pj > slot.0 {
                *slot = (pj, j);
            }
        }
    }
    violations.sort_by_key(|v| match v {
        Violation::Reordered { first, second } => (*first, *second),
        _ => (0, 0),
    });
    violations.dedup();
    violations
}

/// Two-qubit routed gates that sit on uncoupled pairs.
pub fn coupling_violations(routed: &[ScheduledGate], arch: &Architecture) -> Vec<Violation> {
    routed
        .iter()
        .enumerate()
        .filter(|(_, it)| {
            it.gate.kind.is_two_qubit() && !arch.is_coupled(it.gate.qubits[0], it.gate.qubits[1])
        })
        .map(|(position, _)| Violation::Uncoupled { position })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooLargeForOracle { qubits: usize },
    MidCircuitMeasure { index: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLargeForOracle { qubits } => {
                write!(f, "{qubits} qubits exceed the statevector oracle limit")
            }
            OracleError::MidCircuitMeasure { index } => {
                write!(f, "gate #{index} acts on a qubit after it was measured")
            }
        }
    }
}

impl core::error::Error for OracleError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOutcome {
    pub equivalent: bool,
    /// Largest `1 - |<expected|actual>|` over the probe states.
    pub infidelity: f64,
    /// Largest amplitude deviation after aligning global phase.
    pub max_amplitude_error: f64,
}

/// Per-qubit input preparations: the all-zero state and two generic product states.
fn probe_gates(probe: usize, q: usize) -> Option<Gate> {
    let l = q as f64;
    let params = match probe {
        0 => return None,
        1 => alloc::vec![0.7 + 0.37 * l, 0.3 + 0.61 * l, -0.4 + 0.53 * l],
        _ => alloc::vec![2.1 - 0.29 * l, -1.1 + 0.47 * l, 0.9 + 0.83 * l],
    };
    Some(Gate::new(GateKind::U3, alloc::vec![q], params))
}

const PROBES: usize = 3;

fn check_terminal_measures(circuit: &Circuit) -> Result<(), OracleError> {
    let mut measured = vec![false; circuit.num_qubits];
    for (i, g) in circuit.gates.iter().enumerate() {
        match g.kind {
            GateKind::Measure => measured[g.qubits[0]] = true,
            GateKind::Barrier => {}
            _ if g.qubits.iter().any(|&q| measured[q]) => {
                return Err(OracleError::MidCircuitMeasure { index: i })
            }
            _ => {}
        }
    }
    Ok(())
}

/// Simulates both circuits on probe inputs and compares the outputs, with the
/// routed output read through `final_mapping` and measurements dropped.
/// Unoccupied physical qubits must end in `|0>`.
pub fn statevector_oracle(
    original: &Circuit,
    routed: &Circuit,
    init: &Mapping,
    final_mapping: &Mapping,
    tol: f64,
) -> Result<OracleOutcome, OracleError> {
    let n = original.num_qubits;
    if n > ORACLE_MAX_LOGICAL {
        return Err(OracleError::TooLargeForOracle { qubits: n });
    }
    check_terminal_measures(original)?;

    // Compact the physical qubits that matter.
    let mut used: Vec<usize> = routed
        .gates
        .iter()
        .flat_map(|g| g.qubits.iter().copied())
        .chain(init.forward().iter().copied())
        .chain(final_mapping.forward().iter().copied())
        .collect();
    used.sort_unstable();
    used.dedup();
    if used.len() > ORACLE_MAX_PHYSICAL {
        return Err(OracleError::TooLargeForOracle { qubits: used.len() });
    }
    let slot = |p: usize| {
        used.binary_search(&p)
            .expect("physical qubit collected above")
    };
    let m = used.len();

    let mut outcome = OracleOutcome {
        equivalent: true,
        infidelity: 0.0,
        max_amplitude_error: 0.0,
    };
    for probe in 0..PROBES {
        let mut logical = StateVector::zero(n);
        let mut physical = StateVector::zero(m);
        for l in 0..n {
            if let Some(g) = probe_gates(probe, l) {
                logical.apply(&g);
                physical.apply(&g.remapped(|_| slot(init.physical(l))));
            }
        }
        for g in original
            .gates
            .iter()
            .filter(|g| g.kind != GateKind::Measure)
        {
            logical.apply(g);
        }
        for g in routed.gates.iter().filter(|g| g.kind != GateKind::Measure) {
            physical.apply(&g.remapped(slot));
        }

        let mut expected = vec![Complex64::new(0.0, 0.0); 1 << m];
        for (x, amp) in logical.amplitudes().iter().enumerate() {
            let y = (0..n)
                .filter(|l| x >> l & 1 == 1)
                .fold(0usize, |acc, l| acc | 1 << slot(final_mapping.physical(l)));
            expected[y] = *amp;
        }
        let overlap: Complex64 = expected
            .iter()
            .zip(physical.amplitudes())
            .map(|(e, a)| e.conj() * a)
            .sum();
        let fidelity = overlap.norm();
        let phase = if fidelity > 0.0 {
            overlap / fidelity
        } else {
            Complex64::new(1.0, 0.0)
        };
        let amp_err = expected
            .iter()
            .zip(physical.amplitudes())
            .map(|(e, a)| (a - phase * e).norm())
            .fold(0.0, f64::max);
        outcome.infidelity = outcome.infidelity.max(1.0 - fidelity);
        outcome.max_amplitude_error = outcome.max_amplitude_error.max(amp_err);
        if fidelity < 1.0 - tol {
            outcome.equivalent = false;
        }
    }
    Ok(outcome)
}

/// Runs the dependency check and, when the instance is small enough, the oracle.
pub fn verify(
    original: &Circuit,
    routed: &[ScheduledGate],
    init: &Mapping,
    final_mapping: &Mapping,
    arch: &Architecture,
    run_oracle: bool,
    tol: f64,
) -> EquivalenceReport {
    let mut details =
        dependency_equivalence(original, routed, init, final_mapping, &arch.commutation);
    details.extend(coupling_violations(routed, arch));
    let mut report = EquivalenceReport {
        dependency_ok: details.is_empty(),
        details,
        ..EquivalenceReport::default()
    };
    if run_oracle {
        let circuit = Circuit::from_gates(
            arch.num_qubits(),
            routed.iter().map(|it| it.gate.clone()).collect(),
        );
        if let Ok(out) = statevector_oracle(original, &circuit, init, final_mapping, tol) {
            report.oracle_ok = Some(out.equivalent);
            report.max_amplitude_error = Some(out.max_amplitude_error);
        }
    }
    report
}

impl EquivalenceReport {
    /// Dependency check passed and the oracle, if it ran, agreed.
    pub fn is_ok(&self) -> bool {
        self.dependency_ok && self.oracle_ok != Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(gate: Gate, origin: Option<usize>) -> ScheduledGate {
        ScheduledGate {
            gate,
            start: 0,
            duration: 1,
            decision_start: 0,
            origin,
        }
    }

    #[test]
    fn identity_routing_is_equivalent() {
        let c = Circuit::from_gates(2, vec![Gate::one(GateKind::H, 0), Gate::cx(0, 1)]);
        let m = Mapping::identity(2, 2).unwrap();
        let items: Vec<_> = c
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| item(g.clone(), Some(i)))
            .collect();
        let table = CommutationTable::baseline();
        assert!(dependency_equivalence(&c, &items, &m, &m, &table).is_empty());
        let out = statevector_oracle(&c, &c, &m, &m, 1e-9).unwrap();
        assert!(out.equivalent);
        assert!(out.max_amplitude_error < 1e-12);
    }

    #[test]
    fn deleted_gate_is_missing() {
        let c = Circuit::from_gates(2, vec![Gate::one(GateKind::H, 0), Gate::cx(0, 1)]);
        let m = Mapping::identity(2, 2).unwrap();
        let items = vec![item(Gate::one(GateKind::H, 0), Some(0))];
        let v = dependency_equivalence(&c, &items, &m, &m, &CommutationTable::baseline());
        assert_eq!(v, vec![Violation::MissingGate { index: 1 }]);
    }

    #[test]
    fn reordering_non_commuting_gates_is_caught() {
        let c = Circuit::from_gates(2, vec![Gate::one(GateKind::H, 0), Gate::cx(0, 1)]);
        let m = Mapping::identity(2, 2).unwrap();
        let items = vec![
            item(Gate::cx(0, 1), Some(1)),
            item(Gate::one(GateKind::H, 0), Some(0)),
        ];
        let v = dependency_equivalence(&c, &items, &m, &m, &CommutationTable::baseline());
        assert_eq!(
            v,
            vec![Violation::Reordered {
                first: 0,
                second: 1
            }]
        );

        // Commuting pair may be exchanged.
        let c = Circuit::from_gates(3, vec![Gate::cx(1, 0), Gate::cx(2, 0)]);
        let m = Mapping::identity(3, 3).unwrap();
        let items = vec![item(Gate::cx(2, 0), Some(1)), item(Gate::cx(1, 0), Some(0))];
        assert!(
            dependency_equivalence(&c, &items, &m, &m, &CommutationTable::baseline()).is_empty()
        );
    }

    #[test]
    fn oracle_rejects_mid_circuit_measure_and_large_inputs() {
        let c = Circuit::from_gates(
            1,
            vec![Gate::one(GateKind::Measure, 0), Gate::one(GateKind::X, 0)],
        );
        let m = Mapping::identity(1, 1).unwrap();
        assert_eq!(
            statevector_oracle(&c, &c, &m, &m, 1e-9),
            Err(OracleError::MidCircuitMeasure { index: 1 })
        );
        let big = Circuit::new(11);
        let m = Mapping::identity(11, 11).unwrap();
        assert_eq!(
            statevector_oracle(&big, &big, &m, &m, 1e-9),
            Err(OracleError::TooLargeForOracle { qubits: 11 })
        );
    }
}
