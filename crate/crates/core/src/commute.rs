//! Gate commutation and the commutative-forward (CF) frontier.
//!
//! Two gates commute when, on every qubit they share, the operations they
//! apply there belong to a commuting pair in the [`CommutationTable`]. The
//! table is keyed by gate kind plus the role the qubit plays in the gate
//! (plain single-qubit operand, CX control or CX target), so the CF frontier
//! of a gate list can be found in one pass with per-qubit flag sets.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::gate::{Gate, GateKind};
use crate::sim::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Role {
    Single,
    CxControl,
    CxTarget,
}

/// What a gate does to one of its qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitOp {
    pub kind: GateKind,
    pub role: Role,
}

impl QubitOp {
    pub const fn new(kind: GateKind, role: Role) -> Self {
        QubitOp { kind, role }
    }
}

/// Role of operand `pos` in a gate of `kind`.
pub fn role_of(kind: GateKind, pos: usize) -> Role {
    match (kind, pos) {
        (GateKind::Cx, 0) => Role::CxControl,
        (GateKind::Cx, _) => Role::CxTarget,
        _ => Role::Single,
    }
}

/// The operation `gate` applies to qubit `q`, if it touches it.
pub fn op_on(gate: &Gate, q: usize) -> Option<QubitOp> {
    gate.qubits
        .iter()
        .position(|&x| x == q)
        .map(|pos| QubitOp::new(gate.kind, role_of(gate.kind, pos)))
}

/// A user-supplied table entry: `[kind_a, role_a, kind_b, role_b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtraEntry(pub GateKind, pub Role, pub GateKind, pub Role);

#[derive(Debug, Clone, PartialEq)]
pub enum TableError {
    /// The role does not fit the kind, or the kind is not unitary.
    InvalidOp(GateKind, Role),
    /// The operators do not commute, so the entry would be unsound.
    NotCommuting(ExtraEntry),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::InvalidOp(k, r) => write!(f, "`{k}` cannot act in role {r:?}"),
            TableError::NotCommuting(ExtraEntry(a, ra, b, rb)) => {
                write!(f, "`{a}` ({ra:?}) and `{b}` ({rb:?}) do not commute")
            }
        }
    }
}

impl core::error::Error for TableError {}

const DIAGONAL: [QubitOp; 8] = [
    QubitOp::new(GateKind::Z, Role::Single),
    QubitOp::new(GateKind::S, Role::Single),
    QubitOp::new(GateKind::Sdg, Role::Single),
    QubitOp::new(GateKind::T, Role::Single),
    QubitOp::new(GateKind::Tdg, Role::Single),
    QubitOp::new(GateKind::Rz, Role::Single),
    QubitOp::new(GateKind::U1, Role::Single),
    QubitOp::new(GateKind::Cx, Role::CxControl),
];

const X_AXIS: [QubitOp; 3] = [
    QubitOp::new(GateKind::X, Role::Single),
    QubitOp::new(GateKind::Rx, Role::Single),
    QubitOp::new(GateKind::Cx, Role::CxTarget),
];

const Y_AXIS: [QubitOp; 2] = [
    QubitOp::new(GateKind::Y, Role::Single),
    QubitOp::new(GateKind::Ry, Role::Single),
];

/// Pairs of per-qubit operations known to commute on a shared qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationTable {
    pairs: BTreeSet<(QubitOp, QubitOp)>,
}

fn ordered(a: QubitOp, b: QubitOp) -> (QubitOp, QubitOp) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CommutationTable {
    /// Diagonal, X-axis and Y-axis families, each pairwise commuting, plus
    /// H with itself.
    pub fn baseline() -> Self {
        let mut pairs = BTreeSet::new();
        for family in [&DIAGONAL[..], &X_AXIS[..], &Y_AXIS[..]] {
            for &a in family {
                for &b in family {
                    pairs.insert(ordered(a, b));
                }
            }
        }
        let h = QubitOp::new(GateKind::H, Role::Single);
        pairs.insert((h, h));
        CommutationTable { pairs }
    }

    pub fn allows(&self, a: QubitOp, b: QubitOp) -> bool {
        self.pairs.contains(&ordered(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (QubitOp, QubitOp)> + '_ {
        self.pairs.iter().copied()
    }

    /// Adds an entry after checking it against the operator definitions.
    pub fn insert_checked(&mut self, entry: ExtraEntry) -> Result<(), TableError> {
        let ExtraEntry(ka, ra, kb, rb) = entry;
        let (a, b) = (QubitOp::new(ka, ra), QubitOp::new(kb, rb));
        if !operators_commute(a, b)? {
            return Err(TableError::NotCommuting(entry));
        }
        self.pairs.insert(ordered(a, b));
        Ok(())
    }

    /// True iff `a` and `b` are known to commute. Barriers commute with
    /// nothing that shares one of their qubits.
    pub fn commutes(&self, a: &Gate, b: &Gate) -> bool {
        for (pos, &q) in a.qubits.iter().enumerate() {
            let Some(op_b) = op_on(b, q) else {
                continue;
            };
            let op_a = QubitOp::new(a.kind, role_of(a.kind, pos));
            if !self.allows(op_a, op_b) {
                return false;
            }
        }
        true
    }
}

impl Default for CommutationTable {
    fn default() -> Self {
        CommutationTable::baseline()
    }
}

/// [`CommutationTable::commutes`] with the baseline table.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    CommutationTable::baseline().commutes(a, b)
}

/// Places `op` on qubit 0 of a three-qubit register, using `spare` for the
/// other CX operand.
fn witness_gate(op: QubitOp, spare: usize, params: &[f64]) -> Result<Gate, TableError> {
    let bad = TableError::InvalidOp(op.kind, op.role);
    match (op.kind, op.role) {
        (GateKind::Cx, Role::CxControl) => Ok(Gate::cx(0, spare)),
        (GateKind::Cx, Role::CxTarget) => Ok(Gate::cx(spare, 0)),
        (GateKind::Cx, Role::Single) => Err(bad),
        (k, Role::Single) if k.is_unitary() && !k.is_two_qubit() => {
            Ok(Gate::new(k, vec![0], params[..k.num_params()].to_vec()))
        }
        _ => Err(bad),
    }
}

const ANGLE_SAMPLES: [[f64; 3]; 3] = [[0.37, -1.21, 2.03], [1.9, 0.55, -0.8], [-2.6, 2.9, 0.11]];

/// Checks `AB = BA` for gates acting as `a` and `b` on a shared qubit, over
/// several parameter samples.
fn operators_commute(a: QubitOp, b: QubitOp) -> Result<bool, TableError> {
    for pa in &ANGLE_SAMPLES {
        for pb in &ANGLE_SAMPLES {
            let ga = witness_gate(a, 1, pa)?;
            let gb = witness_gate(b, 2, pb)?;
            for basis in 0..8 {
                let mut ab = StateVector::basis(3, basis);
                ab.apply(&gb);
                ab.apply(&ga);
                let mut ba = StateVector::basis(3, basis);
                ba.apply(&ga);
                ba.apply(&gb);
                let diff: f64 = ab
                    .amplitudes()
                    .iter()
                    .zip(ba.amplitudes())
                    .map(|(x, y): (&Complex64, &Complex64)| (x - y).norm_sqr())
                    .sum();
                if diff > 1e-18 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Per-qubit record of the operations seen so far in one frontier scan.
#[derive(Debug, Clone)]
pub struct QubitOpFlags {
    flags: Vec<Vec<QubitOp>>,
}

impl QubitOpFlags {
    pub fn new(num_qubits: usize) -> Self {
        QubitOpFlags {
            flags: vec![Vec::new(); num_qubits],
        }
    }

    pub fn reset(&mut self) {
        for f in &mut self.flags {
            f.clear();
        }
    }

    fn ensure(&mut self, q: usize) {
        if q >= self.flags.len() {
            self.flags.resize(q + 1, Vec::new());
        }
    }

    /// True iff `gate` commutes with every operation recorded on its qubits.
    pub fn admits(&self, table: &CommutationTable, gate: &Gate) -> bool {
        gate.qubits.iter().enumerate().all(|(pos, &q)| {
            let op = QubitOp::new(gate.kind, role_of(gate.kind, pos));
            self.flags
                .get(q)
                .is_none_or(|seen| seen.iter().all(|&s| table.allows(s, op)))
        })
    }

    pub fn record(&mut self, gate: &Gate) {
        for (pos, &q) in gate.qubits.iter().enumerate() {
            self.ensure(q);
            let op = QubitOp::new(gate.kind, role_of(gate.kind, pos));
            if !self.flags[q].contains(&op) {
                self.flags[q].push(op);
            }
        }
    }
}

/// Indices of the gates that commute with every earlier gate in `gates`.
pub fn cf_front(table: &CommutationTable, gates: &[Gate]) -> Vec<usize> {
    cf_front_window(table, gates, None)
}

/// [`cf_front`] restricted to the first `window` gates.
pub fn cf_front_window(
    table: &CommutationTable,
    gates: &[Gate],
    window: Option<usize>,
) -> Vec<usize> {
    let mut flags = QubitOpFlags::new(0);
    cf_front_with(table, gates.iter(), window, &mut flags)
}

pub(crate) fn cf_front_with<'a>(
    table: &CommutationTable,
    gates: impl Iterator<Item = &'a Gate>,
    window: Option<usize>,
    flags: &mut QubitOpFlags,
) -> Vec<usize> {
    flags.reset();
    let mut front = Vec::new();
    for (i, g) in gates.take(window.unwrap_or(usize::MAX)).enumerate() {
        if flags.admits(table, g) {
            front.push(i);
        }
        flags.record(g);
    }
    front
}

/// Indices of the gates sharing no qubit with any earlier gate.
pub fn no_predecessor_front(gates: &[Gate]) -> Vec<usize> {
    no_predecessor_front_with(gates.iter(), None)
}

pub(crate) fn no_predecessor_front_with<'a>(
    gates: impl Iterator<Item = &'a Gate>,
    window: Option<usize>,
) -> Vec<usize> {
    let mut touched: Vec<usize> = Vec::new();
    let mut front = Vec::new();
    for (i, g) in gates.take(window.unwrap_or(usize::MAX)).enumerate() {
        if g.qubits.iter().all(|q| !touched.contains(q)) {
            front.push(i);
        }
        touched.extend_from_slice(&g.qubits);
    }
    front
}

#[cfg(test)]
mod tests {
    use super::*;
    use GateKind::*;

    fn t(q: usize) -> Gate {
        Gate::one(T, q)
    }

    #[test]
    fn cx_sharing_target_commute() {
        assert!(commutes(&Gate::cx(1, 3), &Gate::cx(2, 3)));
        assert!(commutes(&Gate::cx(0, 2), &Gate::cx(0, 3)));
        assert!(!commutes(&Gate::cx(0, 1), &Gate::cx(1, 2)));
    }

    #[test]
    fn diagonal_on_target_does_not_commute() {
        assert!(!commutes(&t(2), &Gate::cx(0, 2)));
        assert!(commutes(&t(0), &Gate::cx(0, 2)));
        assert!(commutes(&Gate::one(H, 0), &t(5)));
        assert!(!commutes(&Gate::one(H, 0), &Gate::cx(0, 1)));
    }

    #[test]
    fn measure_and_barrier_block() {
        let m = Gate::one(Measure, 0);
        assert!(!commutes(&m, &Gate::one(Z, 0)));
        assert!(!commutes(&m, &m));
        let b = Gate::new(Barrier, vec![0, 1], vec![]);
        assert!(!commutes(&b, &t(1)));
        assert!(!commutes(&t(1), &b));
        assert!(commutes(&b, &t(2)));
    }

    #[test]
    fn cf_front_examples() {
        let table = CommutationTable::baseline();
        assert_eq!(
            cf_front(&table, &[Gate::cx(1, 3), Gate::cx(2, 3)]),
            vec![0, 1]
        );
        assert_eq!(
            no_predecessor_front(&[Gate::cx(1, 3), Gate::cx(2, 3)]),
            vec![0]
        );
        assert!(cf_front(&table, &[]).is_empty());
        assert_eq!(
            cf_front(&table, &[t(1), Gate::cx(0, 2), Gate::cx(0, 3)]),
            vec![0, 1, 2]
        );
        assert_eq!(
            cf_front(&table, &[Gate::one(H, 0), Gate::cx(0, 1)]),
            vec![0]
        );
    }

    #[test]
    fn cf_window_caps_scan() {
        let table = CommutationTable::baseline();
        let gates = [t(0), t(1), t(2)];
        assert_eq!(cf_front_window(&table, &gates, Some(2)), vec![0, 1]);
    }

    #[test]
    fn baseline_entries_are_sound() {
        for (a, b) in CommutationTable::baseline().entries() {
            assert_eq!(operators_commute(a, b), Ok(true), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn extra_entries_are_checked() {
        let mut table = CommutationTable::baseline();
        let ok = ExtraEntry(Z, Role::Single, Z, Role::Single);
        assert!(table.insert_checked(ok).is_ok());
        let y = ExtraEntry(Y, Role::Single, Cx, Role::CxTarget);
        assert_eq!(table.insert_checked(y), Err(TableError::NotCommuting(y)));
        let bad = ExtraEntry(Cx, Role::Single, Z, Role::Single);
        assert_eq!(
            table.insert_checked(bad),
            Err(TableError::InvalidOp(Cx, Role::Single))
        );
        let m = ExtraEntry(Measure, Role::Single, Z, Role::Single);
        assert!(matches!(
            table.insert_checked(m),
            Err(TableError::InvalidOp(Measure, _))
        ));
    }
}
