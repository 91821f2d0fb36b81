//! Qubit routing with per-qubit time locks and commutation-aware gate fronts.
//!
//! The router inserts SWAPs so every two-qubit gate of a circuit lands on a
//! coupled pair of physical qubits, while tracking when each qubit becomes
//! free so that routing overlaps with short gates still in flight. Gates that
//! commute with everything before them are exposed to the SWAP search early.
//!
//! ```
//! use codar_core::prelude::*;
//!
//! let arch = grid_architecture(2, 2, DurationMap::default()).unwrap();
//! let circuit = parse_program("OPENQASM 2.0; qreg q[4]; t q[1]; cx q[0],q[3];").unwrap();
//! let init = Mapping::identity(4, 4).unwrap();
//! let routed = route(&circuit, &arch, &init, &RouterConfig::default()).unwrap();
//! assert_eq!(routed.schedule.swap_count, 1);
//! ```
#![no_std]

extern crate alloc;

pub mod commute;
pub mod gate;
pub mod mapping;
pub mod qam;
pub mod qasm;
pub mod router;
pub mod sim;
pub mod verify;

pub mod prelude {
    pub use crate::commute::{cf_front, commutes, no_predecessor_front, CommutationTable};
    pub use crate::gate::{Circuit, Gate, GateKind};
    pub use crate::mapping::Mapping;
    pub use crate::qam::{
        all_pairs_distances, grid_architecture, load_architecture, Architecture,
        ArchitectureConfig, DurationMap,
    };
    pub use crate::qasm::{emit_program, parse_program, validate};
    pub use crate::router::{
        initial_mapping, route, route_with_policy, InitialMappingPolicy, RouterConfig, Schedule,
    };
    pub use crate::verify::{
        dependency_equivalence, statevector_oracle, verify, EquivalenceReport,
    };
}
