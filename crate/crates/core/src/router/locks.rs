use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gate::Gate;

/// Per-physical-qubit release time. A qubit is free at `t` iff its lock is `<= t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLocks {
    t_end: Vec<u64>,
}

/// A launch was attempted on a qubit that is still busy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LockViolation {
    pub qubit: usize,
    pub busy_until: u64,
    pub at: u64,
}

impl fmt::Display for LockViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "qubit {} is busy until cycle {} but a gate was launched at cycle {}",
            self.qubit, self.busy_until, self.at
        )
    }
}

impl core::error::Error for LockViolation {}

impl QubitLocks {
    pub fn new(num_physical: usize) -> Self {
        QubitLocks {
            t_end: vec![0; num_physical],
        }
    }

    #[inline]
    pub fn is_free(&self, q: usize, t: u64) -> bool {
        self.t_end[q] <= t
    }

    pub fn all_free(&self, qubits: &[usize], t: u64) -> bool {
        qubits.iter().all(|&q| self.is_free(q, t))
    }

    pub fn t_end(&self, q: usize) -> u64 {
        self.t_end[q]
    }

    /// Earliest cycle `>= t` at which every qubit in `qubits` is free.
    pub fn earliest_free(&self, qubits: &[usize], t: u64) -> u64 {
        qubits.iter().map(|&q| self.t_end[q]).fold(t, u64::max)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.t_end
    }

    /// Occupies every qubit of `gate` over `[start, start + duration)`.
    pub fn acquire(&mut self, gate: &Gate, start: u64, duration: u64) -> Result<(), LockViolation> {
        if let Some(&q) = gate.qubits.iter().find(|&&q| !self.is_free(q, start)) {
            return Err(LockViolation {
                qubit: q,
                busy_until: self.t_end[q],
                at: start,
            });
        }
        for &q in &gate.qubits {
            self.t_end[q] = start + duration;
        }
        Ok(())
    }
}
