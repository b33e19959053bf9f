use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CircuitError;
use crate::graded::{from_jw_matrix, jw_matrix, Cell, CellWindow, GradedOperator, MajoranaString, Parity};

/// Coefficients below this are dropped after applying a gate.
const PRUNE_TOL: f64 = 1e-15;

/// Tolerance for gate unitarity.
pub const UNITARY_TOL: f64 = 1e-10;

/// A parity-homogeneous unitary acting on a finite block of cells.
///
/// The gate acts on operators as the block-local automorphism
/// `A ⊠ B ↦ (g A g†) ⊠ B`, where `A` lives on the block and `B` outside it.
/// For even `g` this is ordinary conjugation by `g`; for odd `g` it is the
/// automorphism `Ad_g` of the block algebra extended trivially.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    unitary: GradedOperator,
    cells: Vec<Cell>,
}

impl Gate {
    /// `cells` lists the block in slot order; the unitary must live inside it.
    pub fn new(unitary: GradedOperator, cells: Vec<Cell>) -> Result<Self, CircuitError> {
        let set: BTreeSet<Cell> = cells.iter().copied().collect();
        if set.len() != cells.len() {
            let dup = cells
                .iter()
                .find(|c| cells.iter().filter(|d| d == c).count() > 1)
                .copied()
                .unwrap_or_default();
            return Err(CircuitError::Overlap(dup));
        }
        if let Some(c) = unitary.support().into_iter().find(|c| !set.contains(c)) {
            return Err(CircuitError::WindowTooSmall(format!(
                "gate unitary touches cell {c} outside its block {cells:?}"
            )));
        }
        if unitary.parity().is_none() {
            return Err(CircuitError::Algebra(crate::error::AlgebraError::Inhomogeneous));
        }
        let dev = (&unitary * &unitary.adjoint() - GradedOperator::identity())
            .terms()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        if dev > UNITARY_TOL {
            return Err(CircuitError::NotUnitary(dev));
        }
        Ok(Gate { unitary, cells })
    }

    /// Builds a gate from its Jordan-Wigner matrix on the slots `0..k`,
    /// slot `i` being placed on `cells[i]`.
    pub fn from_matrix(m: &DMatrix<Complex64>, cells: Vec<Cell>) -> Result<Self, CircuitError> {
        let k = cells.len();
        if m.nrows() != 1 << k || m.ncols() != 1 << k {
            return Err(CircuitError::GateShape {
                got: m.nrows(),
                expected: 1 << k,
            });
        }
        let w = CellWindow::new(0, k as Cell - 1)?;
        let local = from_jw_matrix(m, &w)?;
        let placed = local.relabel(|slot| cells[slot as usize]);
        Gate::new(placed, cells)
    }

    /// Jordan-Wigner matrix in slot order.
    pub fn matrix(&self) -> Result<DMatrix<Complex64>, CircuitError> {
        let index: BTreeMap<Cell, Cell> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i as Cell))
            .collect();
        let local = self.unitary.relabel(|c| index[&c]);
        let w = CellWindow::new(0, self.cells.len() as Cell - 1)?;
        Ok(jw_matrix(&local, &w)?)
    }

    pub fn unitary(&self) -> &GradedOperator {
        &self.unitary
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn parity(&self) -> Parity {
        self.unitary.parity().expect("homogeneous")
    }

    pub fn translate(&self, d: i64) -> Gate {
        Gate {
            unitary: self.unitary.translate(d),
            cells: self.cells.iter().map(|c| c + d).collect(),
        }
    }

    /// Moves the gate cell by cell; `map` must be injective on the block.
    pub fn relabel<F: Fn(Cell) -> Cell>(&self, map: F) -> Gate {
        Gate {
            unitary: self.unitary.relabel(&map),
            cells: self.cells.iter().map(|c| map(*c)).collect(),
        }
    }

    pub fn touches(&self, support: &BTreeSet<Cell>) -> bool {
        self.cells.iter().any(|c| support.contains(c))
    }

    /// Image of `op` under the gate's block-local automorphism.
    pub fn apply(&self, op: &GradedOperator) -> GradedOperator {
        let block: BTreeSet<Cell> = self.cells.iter().copied().collect();
        let adj = self.unitary.adjoint();
        let mut cache: BTreeMap<MajoranaString, GradedOperator> = BTreeMap::new();
        let mut out = GradedOperator::zero();
        for (s, c) in op.terms() {
            let (neg, inside, outside) = s.split(|cell| block.contains(&cell));
            let image = cache.entry(inside.clone()).or_insert_with(|| {
                let a = GradedOperator::monomial(inside, Complex64::new(1.0, 0.0));
                &(&self.unitary * &a) * &adj
            });
            let rest = GradedOperator::monomial(outside, if neg { -*c } else { *c });
            out += &(&*image * &rest);
        }
        // only round-off is dropped here; deeper circuits compound truncation
        out.pruned(PRUNE_TOL)
    }
}

/// `g` as an element of a larger block, with the same block-local action.
///
/// An odd `g` anticommutes with odd operators on the extra cells, so it is
/// multiplied by their parity `∏ Z_c` to leave them fixed.
pub fn embed_unitary(g: &GradedOperator, own: &[Cell], block: &[Cell]) -> GradedOperator {
    if g.parity() != Some(Parity::Odd) {
        return g.clone();
    }
    let mut out = g.clone();
    for c in block.iter().filter(|c| !own.contains(c)) {
        out = &out * &GradedOperator::z(*c);
    }
    out
}
