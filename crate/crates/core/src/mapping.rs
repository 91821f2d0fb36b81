use alloc::vec::Vec;
use core::fmt;

/// Injective placement of logical qubits onto physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mapping {
    forward: Vec<usize>,
    inverse: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MappingError {
    TooManyQubits { logical: usize, physical: usize },
    OutOfRange(usize),
    NotInjective(usize),
}

impl fmt::Display for MappingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingError::TooManyQubits { logical, physical } => write!(
                f,
                "{logical} logical qubits do not fit on {physical} physical qubits"
            ),
            MappingError::OutOfRange(p) => write!(f, "physical qubit {p} out of range"),
            MappingError::NotInjective(p) => write!(f, "physical qubit {p} assigned twice"),
        }
    }
}

impl core::error::Error for MappingError {}

impl Mapping {
    /// Logical `i` on physical `i`.
    pub fn identity(logical: usize, physical: usize) -> Result<Self, MappingError> {
        Mapping::from_forward((0..logical).collect(), physical)
    }

    pub fn from_forward(forward: Vec<usize>, physical: usize) -> Result<Self, MappingError> {
        if forward.len() > physical {
            return Err(MappingError::TooManyQubits {
                logical: forward.len(),
                physical,
            });
        }
        let mut inverse = alloc::vec![None; physical];
        for (l, &p) in forward.iter().enumerate() {
            match inverse.get_mut(p) {
                None => return Err(MappingError::OutOfRange(p)),
                Some(Some(_)) => return Err(MappingError::NotInjective(p)),
                Some(slot) => *slot = Some(l),
            }
        }
        Ok(Mapping { forward, inverse })
    }

    pub fn num_logical(&self) -> usize {
        self.forward.len()
    }

    pub fn num_physical(&self) -> usize {
        self.inverse.len()
    }

    #[inline]
    pub fn physical(&self, logical: usize) -> usize {
        self.forward[logical]
    }

    #[inline]
    pub fn logical(&self, physical: usize) -> Option<usize> {
        self.inverse[physical]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    /// Exchanges the occupants of two physical qubits; either may be empty.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.inverse[a], self.inverse[b]);
        self.inverse[a] = lb;
        self.inverse[b] = la;
        if let Some(l) = la {
            self.forward[l] = b;
        }
        if let Some(l) = lb {
            self.forward[l] = a;
        }
    }
}
