//! Dense statevector simulation for small registers.
//!
//! Qubit `q` is bit `q` of the basis-state index.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::gate::{Gate, GateKind};

pub type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The 2x2 matrix of a single-qubit unitary kind, `None` otherwise.
pub fn single_qubit_matrix(kind: GateKind, params: &[f64]) -> Option<Mat2> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let p = |i: usize| params.get(i).copied().unwrap_or(0.0);
    let u3 = |theta: f64, phi: f64, lambda: f64| -> Mat2 {
        let (s, co) = (libm::sin(theta / 2.0), libm::cos(theta / 2.0));
        [
            [c(co, 0.0), -Complex64::cis(lambda) * s],
            [Complex64::cis(phi) * s, Complex64::cis(phi + lambda) * co],
        ]
    };
    let m = match kind {
        GateKind::H => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z => [[one, zero], [zero, -one]],
        GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, zero], [zero, c(0.0, -1.0)]],
        GateKind::T => [
            [one, zero],
            [zero, Complex64::cis(core::f64::consts::FRAC_PI_4)],
        ],
        GateKind::Tdg => [
            [one, zero],
            [zero, Complex64::cis(-core::f64::consts::FRAC_PI_4)],
        ],
        GateKind::Rx => {
            let (s, co) = (libm::sin(p(0) / 2.0), libm::cos(p(0) / 2.0));
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry => {
            let (s, co) = (libm::sin(p(0) / 2.0), libm::cos(p(0) / 2.0));
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz => [
            [Complex64::cis(-p(0) / 2.0), zero],
            [zero, Complex64::cis(p(0) / 2.0)],
        ],
        GateKind::U1 => [[one, zero], [zero, Complex64::cis(p(0))]],
        GateKind::U2 => u3(core::f64::consts::FRAC_PI_2, p(0), p(1)),
        GateKind::U3 => u3(p(0), p(1), p(2)),
        GateKind::Cx | GateKind::Swap | GateKind::Measure | GateKind::Barrier => return None,
    };
    Some(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1usize << num_qubits];
        amps[0] = c(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1usize << num_qubits];
        amps[index] = c(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn apply_single(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ab) | bb);
            }
        }
    }

    /// Applies a unitary gate. Barriers are no-ops; measurements are not
    /// supported and return `false`.
    pub fn apply(&mut self, gate: &Gate) -> bool {
        match gate.kind {
            GateKind::Cx => self.apply_cx(gate.qubits[0], gate.qubits[1]),
            GateKind::Swap => self.apply_swap(gate.qubits[0], gate.qubits[1]),
            GateKind::Barrier => {}
            GateKind::Measure => return false,
            kind => {
                let m = single_qubit_matrix(kind, &gate.params).expect("single-qubit kind");
                self.apply_single(gate.qubits[0], &m);
            }
        }
        true
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}
