//! Simulators: a fast classical engine over basis states and a small dense statevector
//! engine for checking phases and measurement corrections.

mod basis;
mod statevector;
mod verify;

pub use basis::{run_basis, BasisAssignment, BasisRun};
pub use statevector::{run_statevector, Branch, BranchPolicy, StateVector, WireInit, MAX_WIRES};
pub use verify::{verify_equivalence, Engine, Mismatch, Probe, VerificationReport};
