//! Support algebras, their classification, and the index of an automaton.

mod algebra;
mod dense;
mod index;

pub use algebra::{
    algebra_closure, classify_algebra, left_factors, support_algebra, AlgebraBasis, AlgebraClass,
    SPAN_TOL,
};
pub use index::{
    check_multiplicativity, compute_index, compute_index_at, index_from_images, IndexProvenance, IndexValue,
    IndexWitness,
};
