//! Dense coefficient vectors over all Majorana strings of a small carrier.
//!
//! Local mode `k` is the k-th mode of the carrier in increasing global order,
//! so bitmask products reproduce the global canonical signs.

use num_complex::Complex64;

use crate::graded::{cell_of, Cell, GradedOperator, MajoranaString};

pub(crate) struct Carrier {
    cells: Vec<Cell>,
}

pub(crate) type DenseVec = Vec<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Carrier {
    pub fn new<I: IntoIterator<Item = Cell>>(cells: I) -> Self {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_unstable();
        cells.dedup();
        assert!(cells.len() <= 12, "carrier too large for dense support computations");
        Carrier { cells }
    }

    pub fn num_modes(&self) -> usize {
        2 * self.cells.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.num_modes()
    }

    fn local_mode(&self, mode: i64) -> Option<usize> {
        let pos = self.cells.binary_search(&cell_of(mode)).ok()?;
        Some(2 * pos + mode.rem_euclid(2) as usize)
    }

    pub fn mask_of(&self, s: &MajoranaString) -> Option<usize> {
        let mut mask = 0usize;
        for &m in s.modes() {
            mask |= 1 << self.local_mode(m)?;
        }
        Some(mask)
    }

    pub fn string_of(&self, mask: usize) -> MajoranaString {
        let modes = (0..self.num_modes())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| 2 * self.cells[k / 2] + (k % 2) as i64)
            .collect();
        MajoranaString::from_sorted(modes).expect("increasing")
    }

    /// `None` if the operator reaches outside the carrier.
    pub fn to_dense(&self, op: &GradedOperator) -> Option<DenseVec> {
        let mut v = vec![ZERO; self.dim()];
        for (s, c) in op.terms() {
            v[self.mask_of(s)?] += c;
        }
        Some(v)
    }

    pub fn to_operator(&self, v: &[Complex64], tol: f64) -> GradedOperator {
        GradedOperator::from_terms(
            v.iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(mask, c)| (self.string_of(mask), *c)),
        )
    }
}

/// Sign flag of the canonical product of two masks.
#[inline]
pub(crate) fn mask_product_negative(a: usize, b: usize) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

pub(crate) fn dense_mul(a: &[Complex64], b: &[Complex64]) -> DenseVec {
    let mut out = vec![ZERO; a.len()];
    let nb: Vec<(usize, Complex64)> = b
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(m, c)| (m, *c))
        .collect();
    for (ma, ca) in a.iter().enumerate() {
        if *ca == ZERO {
            continue;
        }
        for &(mb, cb) in &nb {
            let v = ca * cb;
            if mask_product_negative(ma, mb) {
                out[ma ^ mb] -= v;
            } else {
                out[ma ^ mb] += v;
            }
        }
    }
    out
}

pub(crate) fn dense_adjoint(a: &[Complex64]) -> DenseVec {
    a.iter()
        .enumerate()
        .map(|(m, c)| {
            let k = m.count_ones() as usize;
            if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                -c.conj()
            } else {
                c.conj()
            }
        })
        .collect()
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Even and odd parts.
pub(crate) fn parity_split(a: &[Complex64]) -> (DenseVec, DenseVec) {
    let mut even = vec![ZERO; a.len()];
    let mut odd = vec![ZERO; a.len()];
    for (m, c) in a.iter().enumerate() {
        if m.count_ones() % 2 == 0 {
            even[m] = *c;
        } else {
            odd[m] = *c;
        }
    }
    (even, odd)
}

pub(crate) fn is_odd_vec(a: &[Complex64]) -> bool {
    a.iter()
        .enumerate()
        .any(|(m, c)| *c != ZERO && m.count_ones() % 2 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_product_matches_symbolic() {
        let carrier = Carrier::new([-1, 0, 2]);
        let a = &GradedOperator::x(-1) * &GradedOperator::z(2)
            + GradedOperator::y(0).scale(Complex64::new(0.0, 2.0));
        let b = &GradedOperator::y(2) * &GradedOperator::x(0) + GradedOperator::identity();
        let da = carrier.to_dense(&a).unwrap();
        let db = carrier.to_dense(&b).unwrap();
        let prod = carrier.to_operator(&dense_mul(&da, &db), 0.0);
        assert_eq!(prod, &a * &b);
        let adj = carrier.to_operator(&dense_adjoint(&da), 0.0);
        assert_eq!(adj, a.adjoint());
    }

    #[test]
    fn outside_carrier_detected() {
        let carrier = Carrier::new([0]);
        assert!(carrier.to_dense(&GradedOperator::x(1)).is_none());
    }
}
