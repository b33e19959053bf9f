//! Operator algebra, index theory, classification and circuit synthesis for
//! Fermionic cellular automata on a one-dimensional chain.

pub mod error;
pub mod graded;
pub mod fca;
pub mod support;
pub mod classify;
pub mod circuits;
pub mod cli;
