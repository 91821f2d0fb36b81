//! Gate and circuit IR shared by every stage of the router.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// The gate kinds understood by the frontend and the router.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    Cx,
    Swap,
    Measure,
    Barrier,
}

impl GateKind {
    pub const ALL: [GateKind; 18] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U1,
        GateKind::U2,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Swap,
        GateKind::Measure,
        GateKind::Barrier,
    ];

    /// Lowercase OpenQASM mnemonic.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    /// Number of qubit operands, `None` for the variadic barrier.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::Cx | GateKind::Swap => Some(2),
            GateKind::Barrier => None,
            _ => Some(1),
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn is_two_qubit(self) -> bool {
        self.arity() == Some(2)
    }

    /// True for gates with a unitary action (everything but measure and barrier).
    pub fn is_unitary(self) -> bool {
        !matches!(self, GateKind::Measure | GateKind::Barrier)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Returned when a string names no known gate kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownKind(pub String);

impl fmt::Display for UnknownKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown gate kind `{}`", self.0)
    }
}

impl core::error::Error for UnknownKind {}

impl FromStr for GateKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == lower)
            // `cnot` shows up in some hand-written configs.
            .or_else(|| (lower == "cnot").then_some(GateKind::Cx))
            .ok_or_else(|| UnknownKind(String::from(s)))
    }
}

/// A gate applied to qubit indices. The indices are logical in a source
/// circuit and physical in a routed one.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
    /// 1-based source line, 0 for synthesized gates.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing))]
    pub source_line: usize,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Self {
        Gate {
            kind,
            qubits,
            params,
            source_line: 0,
        }
    }

    pub fn one(kind: GateKind, q: usize) -> Self {
        Gate::new(kind, alloc::vec![q], Vec::new())
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cx, alloc::vec![control, target], Vec::new())
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, alloc::vec![a, b], Vec::new())
    }

    pub fn with_line(mut self, line: usize) -> Self {
        self.source_line = line;
        self
    }

    /// Same gate with every operand passed through `f`.
    pub fn remapped(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
            params: self.params.clone(),
            source_line: self.source_line,
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubits.contains(&q)
    }

    pub fn shares_qubit(&self, other: &Gate) -> bool {
        self.qubits.iter().any(|q| other.touches(*q))
    }
}

/// Structural equality: kind, operands and parameters. Source lines are ignored.
impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.qubits == other.qubits && self.params == other.params
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if !self.params.is_empty() {
            f.write_str("(")?;
            for (i, p) in self.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        for (i, q) in self.qubits.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { "," })?;
            write!(f, "q{q}")?;
        }
        Ok(())
    }
}

/// An ordered gate list over one quantum register.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub register_name: String,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            register_name: String::from("q"),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            gates,
            ..Circuit::new(num_qubits)
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gates in reverse program order, used by the reverse-pass initial mapping.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().cloned().collect(),
            register_name: self.register_name.clone(),
        }
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_two_qubit()).count()
    }
}
