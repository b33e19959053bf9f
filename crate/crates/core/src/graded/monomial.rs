use std::collections::BTreeSet;
use std::fmt;

/// Index of a single Majorana mode. Modes `2c` and `2c + 1` belong to cell `c`.
pub type Mode = i64;

/// Index of a lattice cell carrying one Fermionic mode.
pub type Cell = i64;

/// Cell that owns a Majorana mode.
#[inline]
pub fn cell_of(mode: Mode) -> Cell {
    mode.div_euclid(2)
}

/// Z2 grade of a homogeneous operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_len(len: usize) -> Self {
        if len % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sum modulo 2.
    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Canonical product of Majorana modes: strictly increasing, no repeats.
///
/// The empty string is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MajoranaString(Vec<Mode>);

impl MajoranaString {
    pub fn identity() -> Self {
        MajoranaString(Vec::new())
    }

    pub fn single(mode: Mode) -> Self {
        MajoranaString(vec![mode])
    }

    /// Canonicalizes an arbitrary ordered product `ξ_{m0} ξ_{m1} ...`.
    ///
    /// Returns `(negative, string)` where `negative` is the sign picked up
    /// by anticommuting the factors into increasing order.
    pub fn from_product<I: IntoIterator<Item = Mode>>(modes: I) -> (bool, Self) {
        let mut acc = MajoranaString::identity();
        let mut negative = false;
        for m in modes {
            let (neg, next) = acc.mul(&MajoranaString::single(m));
            negative ^= neg;
            acc = next;
        }
        (negative, acc)
    }

    /// Builds a string from modes that are already strictly increasing.
    pub fn from_sorted(modes: Vec<Mode>) -> Option<Self> {
        if modes.windows(2).all(|w| w[0] < w[1]) {
            Some(MajoranaString(modes))
        } else {
            None
        }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_len(self.0.len())
    }

    pub fn cells(&self) -> BTreeSet<Cell> {
        self.0.iter().map(|&m| cell_of(m)).collect()
    }

    /// Product `self · other`. Returns the sign flag and the canonical string.
    ///
    /// Every mode of `other` moves left past the larger modes of `self`;
    /// equal modes meet and square to the identity.
    pub fn mul(&self, other: &MajoranaString) -> (bool, MajoranaString) {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    swaps += a.len() - i;
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    swaps += a.len() - i - 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        (swaps % 2 == 1, MajoranaString(out))
    }

    /// Sign of the adjoint: `(ξ_1 ... ξ_k)† = ξ_k ... ξ_1 = (-1)^{k(k-1)/2} ξ_1 ... ξ_k`.
    pub fn adjoint_is_negative(&self) -> bool {
        let k = self.0.len();
        (k * k.saturating_sub(1) / 2) % 2 == 1
    }

    /// Shifts every mode by two per cell.
    pub fn translate(&self, cells: i64) -> MajoranaString {
        MajoranaString(self.0.iter().map(|m| m + 2 * cells).collect())
    }

    /// Splits into `(negative, inside, outside)` with `self = ± inside · outside`.
    pub fn split<F: Fn(Cell) -> bool>(&self, inside: F) -> (bool, MajoranaString, MajoranaString) {
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        let mut swaps = 0usize;
        for &m in &self.0 {
            if inside(cell_of(m)) {
                swaps += outs.len();
                ins.push(m);
            } else {
                outs.push(m);
            }
        }
        (swaps % 2 == 1, MajoranaString(ins), MajoranaString(outs))
    }

    /// Relabels cells through `map`, which must be injective on the cells of
    /// this string. Each mode keeps its position (X or Y) inside the cell.
    pub fn relabel<F: Fn(Cell) -> Cell>(&self, map: F) -> (bool, MajoranaString) {
        MajoranaString::from_product(
            self.0
                .iter()
                .map(|&m| 2 * map(cell_of(m)) + m.rem_euclid(2)),
        )
    }
}

impl fmt::Display for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (k, &m) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let name = if m.rem_euclid(2) == 0 { 'X' } else { 'Y' };
            write!(f, "{}({})", name, cell_of(m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_identity() {
        let x = MajoranaString::single(0);
        let (neg, p) = x.mul(&x);
        assert!(!neg);
        assert!(p.is_identity());
    }

    #[test]
    fn distinct_modes_anticommute() {
        let (neg, p) = MajoranaString::single(1).mul(&MajoranaString::single(0));
        assert!(neg);
        assert_eq!(p.modes(), &[0, 1]);
    }

    #[test]
    fn product_with_cancellation() {
        // (ξ0 ξ1)(ξ0 ξ1) = -ξ0 ξ0 ξ1 ξ1 = -I
        let a = MajoranaString::from_sorted(vec![0, 1]).unwrap();
        let (neg, p) = a.mul(&a);
        assert!(neg);
        assert!(p.is_identity());
    }

    #[test]
    fn from_product_counts_inversions() {
        let (neg, s) = MajoranaString::from_product([3, 1, 2]);
        // ξ3 ξ1 ξ2 -> two transpositions -> +ξ1 ξ2 ξ3
        assert!(!neg);
        assert_eq!(s.modes(), &[1, 2, 3]);
        let (neg, s) = MajoranaString::from_product([2, 5, 2]);
        assert!(neg);
        assert_eq!(s.modes(), &[5]);
    }

    #[test]
    fn negative_cells() {
        assert_eq!(cell_of(-1), -1);
        assert_eq!(cell_of(-2), -1);
        assert_eq!(cell_of(-3), -2);
    }

    #[test]
    fn split_sign() {
        // ξ0 ξ2 ξ3 with inside = cell 1 -> ξ2 ξ3 · ξ0 needs two swaps
        let s = MajoranaString::from_sorted(vec![0, 2, 3]).unwrap();
        let (neg, ins, outs) = s.split(|c| c == 1);
        assert!(!neg);
        assert_eq!(ins.modes(), &[2, 3]);
        assert_eq!(outs.modes(), &[0]);
        let s = MajoranaString::from_sorted(vec![0, 2]).unwrap();
        let (neg, _, _) = s.split(|c| c == 1);
        assert!(neg);
    }

    #[test]
    fn adjoint_sign() {
        let s = |v: Vec<Mode>| MajoranaString::from_sorted(v).unwrap();
        assert!(!s(vec![]).adjoint_is_negative());
        assert!(!s(vec![0]).adjoint_is_negative());
        assert!(s(vec![0, 1]).adjoint_is_negative());
        assert!(s(vec![0, 1, 2]).adjoint_is_negative());
        assert!(!s(vec![0, 1, 2, 3]).adjoint_is_negative());
    }
}
