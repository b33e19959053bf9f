//! Finite-depth fermionic circuits and their synthesis from classified automata.

mod fdfc;
mod gate;

pub use fdfc::{Fdfc, Layer};
pub use gate::{embed_unitary, Gate, UNITARY_TOL};
mod margolus;
pub use margolus::*;
mod ancilla;
pub use ancilla::{ancilla_removal_schedule, AncillaSchedule, EnlargedScheme, HOSTS, INTERIOR};
mod equivalence;
pub use equivalence::{equivalence_witness, Equivalence};
