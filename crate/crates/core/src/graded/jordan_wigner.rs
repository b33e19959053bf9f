//! Dense Jordan-Wigner matrices on a finite window, used as an independent
//! check of the symbolic calculus.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::monomial::{cell_of, Cell, MajoranaString};
use super::operator::GradedOperator;
use crate::error::AlgebraError;

/// Largest window the dense oracle will build (2^10 x 2^10 matrices).
pub const MAX_ORACLE_CELLS: usize = 10;

/// Contiguous interval of cells `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellWindow {
    pub lo: Cell,
    pub hi: Cell,
}

impl CellWindow {
    pub fn new(lo: Cell, hi: Cell) -> Result<Self, AlgebraError> {
        if lo > hi {
            return Err(AlgebraError::BadWindow { lo, hi });
        }
        Ok(CellWindow { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.lo <= cell && cell <= self.hi
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> {
        self.lo..=self.hi
    }

    /// Errors with the first support cell outside the window.
    pub fn check(&self, op: &GradedOperator) -> Result<(), AlgebraError> {
        match op.support().into_iter().find(|c| !self.contains(*c)) {
            Some(cell) => Err(AlgebraError::OutsideWindow {
                cell,
                lo: self.lo,
                hi: self.hi,
            }),
            None => Ok(()),
        }
    }
}

type M2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ID2: M2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
const SX: M2 = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
const SY: M2 = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
const SZ: M2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Per-cell 2x2 factors of a Majorana string under Jordan-Wigner.
fn string_factors(s: &MajoranaString, w: &CellWindow) -> Vec<M2> {
    let mut acc = vec![ID2; w.len()];
    for &m in s.modes() {
        let x = (cell_of(m) - w.lo) as usize;
        for f in acc.iter_mut().take(x) {
            *f = mul2(f, &SZ);
        }
        let local = if m.rem_euclid(2) == 0 { &SX } else { &SY };
        acc[x] = mul2(&acc[x], local);
    }
    acc
}

/// Adds `coeff * (f_0 ⊗ f_1 ⊗ ...)` into `out`; cell `lo` is the most significant bit.
fn accumulate_kron(out: &mut DMatrix<Complex64>, factors: &[M2], coeff: Complex64) {
    let n = factors.len();
    let dim = 1usize << n;
    for r in 0..dim {
        // Each factor is a phase times a Pauli matrix, but stay generic.
        let mut partial: Vec<(usize, Complex64)> = vec![(0, coeff)];
        for (k, f) in factors.iter().enumerate() {
            let rb = (r >> (n - 1 - k)) & 1;
            let mut next = Vec::with_capacity(partial.len() * 2);
            for &(col, v) in &partial {
                for cb in 0..2 {
                    let e = f[rb][cb];
                    if e != c(0.0, 0.0) {
                        next.push(((col << 1) | cb, v * e));
                    }
                }
            }
            partial = next;
        }
        for (col, v) in partial {
            out[(r, col)] += v;
        }
    }
}

fn check_size(w: &CellWindow) -> Result<(), AlgebraError> {
    if w.len() > MAX_ORACLE_CELLS {
        return Err(AlgebraError::WindowTooLarge {
            cells: w.len(),
            max: MAX_ORACLE_CELLS,
        });
    }
    Ok(())
}

/// Dense matrix of `op` on the window, of size `2^(hi-lo+1)`.
pub fn jw_matrix(op: &GradedOperator, w: &CellWindow) -> Result<DMatrix<Complex64>, AlgebraError> {
    w.check(op)?;
    check_size(w)?;
    let dim = 1usize << w.len();
    let mut out = DMatrix::zeros(dim, dim);
    for (s, coeff) in op.terms() {
        accumulate_kron(&mut out, &string_factors(s, w), *coeff);
    }
    Ok(out)
}

/// All canonical strings supported on the window, identity first.
pub fn window_strings(w: &CellWindow) -> Vec<MajoranaString> {
    let modes: Vec<i64> = (2 * w.lo..=2 * w.hi + 1).collect();
    let count = 1usize << modes.len();
    (0..count)
        .map(|mask| {
            let chosen = modes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, m)| *m)
                .collect();
            MajoranaString::from_sorted(chosen).expect("increasing")
        })
        .collect()
}

/// Inverse of [`jw_matrix`]: expands a dense matrix in the string basis using
/// `c_s = tr(jw(s)† M) / 2^n`.
pub fn from_jw_matrix(m: &DMatrix<Complex64>, w: &CellWindow) -> Result<GradedOperator, AlgebraError> {
    check_size(w)?;
    let dim = 1usize << w.len();
    if m.nrows() != dim || m.ncols() != dim {
        return Err(AlgebraError::BadMatrix(m.nrows()));
    }
    let mut terms = Vec::new();
    for s in window_strings(w) {
        let basis = jw_matrix(&GradedOperator::monomial(s.clone(), c(1.0, 0.0)), w)?;
        let mut tr = c(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                tr += basis[(i, j)].conj() * m[(i, j)];
            }
        }
        terms.push((s, tr / dim as f64));
    }
    Ok(GradedOperator::from_terms(terms).pruned(super::operator::ZERO_TOL))
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: Cell, hi: Cell) -> CellWindow {
        CellWindow::new(lo, hi).unwrap()
    }

    #[test]
    fn x0_is_pauli_x() {
        let m = jw_matrix(&GradedOperator::x(0), &w(0, 0)).unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert_eq!(m[(1, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn z_is_diag_one_minus_one() {
        let m = jw_matrix(&GradedOperator::z(0), &w(0, 0)).unwrap();
        assert!((m[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn identity_maps_to_identity() {
        let m = jw_matrix(&GradedOperator::identity(), &w(-1, 1)).unwrap();
        assert_eq!(m, DMatrix::identity(8, 8));
    }

    #[test]
    fn string_on_later_cell_carries_parity_string() {
        // X_1 on [0,1] = σz ⊗ σx
        let m = jw_matrix(&GradedOperator::x(1), &w(0, 1)).unwrap();
        assert_eq!(m[(0, 1)], c(1.0, 0.0));
        assert_eq!(m[(2, 3)], c(-1.0, 0.0));
    }

    #[test]
    fn outside_window_rejected() {
        assert!(jw_matrix(&GradedOperator::x(2), &w(0, 1)).is_err());
    }

    #[test]
    fn decode_round_trip() {
        let op = &GradedOperator::x(0) * &GradedOperator::y(1)
            + GradedOperator::z(1).scale(c(0.0, 0.5));
        let win = w(0, 1);
        let back = from_jw_matrix(&jw_matrix(&op, &win).unwrap(), &win).unwrap();
        assert!(back.approx_eq(&op, 1e-14));
    }
}
