use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use super::monomial::{Cell, MajoranaString, Mode, Parity};
use crate::error::AlgebraError;

/// Coefficients below this magnitude are dropped from results of numeric pipelines.
pub const ZERO_TOL: f64 = 1e-12;

/// Scalar `c` in `Z_x = c · Y_x X_x`, fixed against the Jordan-Wigner matrices
/// (`Z_0 = diag(1, -1)`).
pub const Z_FROM_YX: Complex64 = Complex64::new(0.0, 1.0);

/// Finite complex combination of canonical Majorana strings.
///
/// Terms are kept in a sorted map so equal operators have identical
/// representations. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GradedOperator {
    terms: BTreeMap<MajoranaString, Complex64>,
}

impl GradedOperator {
    pub fn zero() -> Self {
        GradedOperator::default()
    }

    pub fn identity() -> Self {
        GradedOperator::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        GradedOperator::monomial(MajoranaString::identity(), c)
    }

    pub fn monomial(s: MajoranaString, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(s, c);
        }
        GradedOperator { terms }
    }

    pub fn majorana(mode: Mode) -> Self {
        GradedOperator::monomial(MajoranaString::single(mode), Complex64::new(1.0, 0.0))
    }

    /// `X_c = ξ_{2c}`.
    pub fn x(cell: Cell) -> Self {
        GradedOperator::majorana(2 * cell)
    }

    /// `Y_c = ξ_{2c+1}`.
    pub fn y(cell: Cell) -> Self {
        GradedOperator::majorana(2 * cell + 1)
    }

    /// `Z_c = i Y_c X_c`, the local parity.
    pub fn z(cell: Cell) -> Self {
        (&GradedOperator::y(cell) * &GradedOperator::x(cell)).scale(Z_FROM_YX)
    }

    /// Sums `(string, coefficient)` pairs, merging repeated strings.
    pub fn from_terms<I: IntoIterator<Item = (MajoranaString, Complex64)>>(terms: I) -> Self {
        let mut out = GradedOperator::zero();
        for (s, c) in terms {
            out.add_term(s, c);
        }
        out
    }

    /// Product of the modes in the given order, times `c`.
    pub fn from_product(modes: &[Mode], c: Complex64) -> Self {
        let (neg, s) = MajoranaString::from_product(modes.iter().copied());
        GradedOperator::monomial(s, if neg { -c } else { c })
    }

    pub fn add_term(&mut self, s: MajoranaString, c: Complex64) {
        let entry = self.terms.entry(s.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MajoranaString, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, s: &MajoranaString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops coefficients with magnitude below `tol`.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.norm() >= tol);
        self
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return GradedOperator::zero();
        }
        GradedOperator {
            terms: self.terms.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    pub fn scale_real(&self, r: f64) -> Self {
        self.scale(Complex64::new(r, 0.0))
    }

    /// `None` for operators mixing even and odd strings. The zero operator is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|s| s.parity());
        let first = match it.next() {
            Some(p) => p,
            None => return Some(Parity::Even),
        };
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity().is_some()
    }

    /// Even and odd parts.
    pub fn parity_parts(&self) -> (GradedOperator, GradedOperator) {
        let mut even = GradedOperator::zero();
        let mut odd = GradedOperator::zero();
        for (s, c) in &self.terms {
            let target = if s.parity().is_odd() { &mut odd } else { &mut even };
            target.terms.insert(s.clone(), *c);
        }
        (even, odd)
    }

    /// Cells touched by any term.
    pub fn support(&self) -> BTreeSet<Cell> {
        self.terms.keys().flat_map(|s| s.cells()).collect()
    }

    pub fn adjoint(&self) -> Self {
        GradedOperator {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| {
                    let c = c.conj();
                    (s.clone(), if s.adjoint_is_negative() { -c } else { c })
                })
                .collect(),
        }
    }

    pub fn translate(&self, cells: i64) -> Self {
        GradedOperator {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.translate(cells), *c))
                .collect(),
        }
    }

    /// Moves cell `c` to `map(c)`; `map` must be injective on the support.
    pub fn relabel<F: Fn(Cell) -> Cell>(&self, map: F) -> Self {
        GradedOperator::from_terms(self.terms.iter().map(|(s, c)| {
            let (neg, t) = s.relabel(&map);
            (t, if neg { -*c } else { *c })
        }))
    }

    /// Normalized trace inner product `tr(a† b) / 2^n`. Distinct canonical
    /// strings are orthonormal, so this is a coefficient dot product.
    pub fn hs_inner(&self, other: &GradedOperator) -> Complex64 {
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, c) in &small.terms {
            if let Some(d) = large.terms.get(s) {
                acc += if flip { d.conj() * c } else { c.conj() * d };
            }
        }
        acc
    }

    /// Hilbert-Schmidt norm `sqrt(<a, a>)`.
    pub fn hs_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Upper bound on the operator norm (each string is unitary).
    pub fn norm_bound(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &GradedOperator) -> f64 {
        let keys: BTreeSet<&MajoranaString> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &GradedOperator, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Graded commutator: anticommutator when both are odd, commutator otherwise.
    pub fn graded_commutator(&self, other: &GradedOperator) -> Result<GradedOperator, AlgebraError> {
        let pa = self.parity().ok_or(AlgebraError::Inhomogeneous)?;
        let pb = other.parity().ok_or(AlgebraError::Inhomogeneous)?;
        let ab = self * other;
        let ba = other * self;
        Ok(if pa.is_odd() && pb.is_odd() {
            &ab + &ba
        } else {
            &ab - &ba
        })
    }

    /// Plain commutator `ab - ba`, regardless of grading.
    pub fn commutator(&self, other: &GradedOperator) -> GradedOperator {
        &(self * other) - &(other * self)
    }
}

impl Mul for &GradedOperator {
    type Output = GradedOperator;

    fn mul(self, rhs: &GradedOperator) -> GradedOperator {
        let mut out: BTreeMap<MajoranaString, Complex64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let (neg, s) = a.mul(b);
                let c = ca * cb;
                *out.entry(s).or_insert(Complex64::new(0.0, 0.0)) += if neg { -c } else { c };
            }
        }
        out.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        GradedOperator { terms: out }
    }
}

impl Add for &GradedOperator {
    type Output = GradedOperator;

    fn add(self, rhs: &GradedOperator) -> GradedOperator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&GradedOperator> for GradedOperator {
    fn add_assign(&mut self, rhs: &GradedOperator) {
        for (s, c) in &rhs.terms {
            *self.terms.entry(s.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        self.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }
}

impl Sub for &GradedOperator {
    type Output = GradedOperator;

    fn sub(self, rhs: &GradedOperator) -> GradedOperator {
        self + &(-rhs)
    }
}

impl Neg for &GradedOperator {
    type Output = GradedOperator;

    fn neg(self) -> GradedOperator {
        GradedOperator {
            terms: self.terms.iter().map(|(s, c)| (s.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GradedOperator {
            type Output = GradedOperator;
            fn $m(self, rhs: GradedOperator) -> GradedOperator {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GradedOperator> for GradedOperator {
            type Output = GradedOperator;
            fn $m(self, rhs: &GradedOperator) -> GradedOperator {
                (&self).$m(rhs)
            }
        }
        impl $tr<GradedOperator> for &GradedOperator {
            type Output = GradedOperator;
            fn $m(self, rhs: GradedOperator) -> GradedOperator {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Mul, mul);
forward_owned!(Add, add);
forward_owned!(Sub, sub);

impl Neg for GradedOperator {
    type Output = GradedOperator;
    fn neg(self) -> GradedOperator {
        -&self
    }
}

fn fmt_coeff(c: Complex64) -> String {
    // adding 0.0 turns -0.0 into 0.0
    format!("({}{:+}i)", c.re + 0.0, c.im + 0.0)
}

impl fmt::Display for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{} {}", fmt_coeff(*c), s)?;
        }
        Ok(())
    }
}
