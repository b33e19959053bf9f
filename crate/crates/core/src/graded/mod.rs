//! Z2-graded Majorana operator algebra of a one-dimensional chain with one
//! Fermionic mode per cell.

mod jordan_wigner;
mod monomial;
mod operator;

pub use jordan_wigner::{
    from_jw_matrix, jw_matrix, operator_norm, window_strings, CellWindow, MAX_ORACLE_CELLS,
};
pub use monomial::{cell_of, Cell, MajoranaString, Mode, Parity};
pub use operator::{GradedOperator, ZERO_TOL, Z_FROM_YX};
