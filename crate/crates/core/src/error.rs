use thiserror::Error;

use crate::graded::Cell;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("operator is not parity-homogeneous")]
    Inhomogeneous,
    #[error("support cell {cell} lies outside window [{lo}, {hi}]")]
    OutsideWindow { cell: Cell, lo: Cell, hi: Cell },
    #[error("invalid window [{lo}, {hi}]")]
    BadWindow { lo: Cell, hi: Cell },
    #[error("window of {cells} cells exceeds the oracle limit of {max}")]
    WindowTooLarge { cells: usize, max: usize },
    #[error("matrix of size {0} is not a power-of-two square")]
    BadMatrix(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FcaError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("window [{lo}, {hi}] too small: needs cells [{need_lo}, {need_hi}]")]
    WindowTooSmall {
        lo: Cell,
        hi: Cell,
        need_lo: Cell,
        need_hi: Cell,
    },
    #[error("inversion of custom rules is not supported")]
    CustomInverse,
    #[error("invalid local rule: {0}")]
    InvalidRule(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SupportError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fca(#[from] FcaError),
    #[error("operator has support outside the declared bipartition: cell {0}")]
    OutsideBipartition(Cell),
    #[error("algebra dimension {0} is neither a square nor twice a square")]
    BadDimension(usize),
    #[error("left and right index expressions disagree: dim L = {dim_l}, dim R = {dim_r}, block = {block}")]
    InconsistentIndex {
        dim_l: usize,
        dim_r: usize,
        block: usize,
    },
    #[error("degenerate decomposition: {0}")]
    Degenerate(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Fca(#[from] FcaError),
    #[error("rule is not nearest-neighbour: support {0:?}")]
    NotNearestNeighbour(Vec<Cell>),
    #[error("unclassifiable edge-support pattern: {0}")]
    Unclassifiable(String),
    #[error("phase consistency violated: {0}")]
    PhaseInconsistent(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fca(#[from] FcaError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error("gate is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("gate matrix has dimension {got}, expected {expected}")]
    GateShape { got: usize, expected: usize },
    #[error("gates in one layer overlap on cell {0}")]
    Overlap(Cell),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("index is not one: 2^({log2_num}/2)")]
    NonUnitIndex { log2_num: i64 },
    #[error("verification failed: {0}")]
    Verification(String),
}
