use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dense::{
    dense_adjoint, dense_mul, dot, is_odd_vec, norm, parity_split, Carrier, DenseVec,
};
use crate::error::SupportError;
use crate::graded::{Cell, GradedOperator, MajoranaString, Parity};

/// Tolerance for linear independence in span computations.
pub const SPAN_TOL: f64 = 1e-10;

/// Orthonormal, parity-homogeneous basis of a unital product-closed span.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    elements: Vec<GradedOperator>,
    generators: Vec<GradedOperator>,
    carrier: BTreeSet<Cell>,
}

/// Isomorphism class of a simple graded algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraClass {
    /// `M(p|q)`, dimension `(p+q)^2`. `p >= q` is recovered from the
    /// even/odd dimensions.
    FullMatrix { p: usize, q: usize },
    /// `Cl_1(p|q)`, dimension `2 (p+q)^2`; only `p + q` is determined.
    Clifford { p_plus_q: usize },
}

impl AlgebraClass {
    pub fn p_plus_q(&self) -> usize {
        match self {
            AlgebraClass::FullMatrix { p, q } => p + q,
            AlgebraClass::Clifford { p_plus_q } => *p_plus_q,
        }
    }

    /// 1 for full-matrix algebras, 2 for Clifford ones.
    pub fn m(&self) -> usize {
        match self {
            AlgebraClass::FullMatrix { .. } => 1,
            AlgebraClass::Clifford { .. } => 2,
        }
    }

    pub fn dimension(&self) -> usize {
        self.m() * self.p_plus_q() * self.p_plus_q()
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraClass::FullMatrix { p, q } => write!(f, "M({p}|{q})"),
            AlgebraClass::Clifford { p_plus_q } => write!(f, "Cl1(p|q), p+q = {p_plus_q}"),
        }
    }
}

/// Relative round-off assumed for the coefficients of input operators;
/// `NOISE_GUARD * INPUT_NOISE` equals [`SPAN_TOL`].
const INPUT_NOISE: f64 = 1e-12;

/// A residual counts as a new direction only if it exceeds its estimated
/// round-off by this factor.
const NOISE_GUARD: f64 = 100.0;

/// Incremental orthonormal basis in dense coordinates. Each basis vector
/// carries an estimate of its relative round-off, so that directions which
/// are only known to low precision do not spawn spurious ones.
struct SpanBuilder {
    basis: Vec<DenseVec>,
    noise: Vec<f64>,
}

impl SpanBuilder {
    fn new() -> Self {
        SpanBuilder {
            basis: Vec::new(),
            noise: Vec::new(),
        }
    }

    /// Component of `v` orthogonal to the span, and the round-off picked up
    /// from projecting onto imprecise basis vectors.
    fn residual(&self, v: &[Complex64]) -> (DenseVec, f64) {
        let mut r = v.to_vec();
        let mut picked = 0.0;
        // two passes of Gram-Schmidt keep the basis orthonormal to round-off
        for _ in 0..2 {
            for (b, nb) in self.basis.iter().zip(&self.noise) {
                let c = dot(b, &r);
                if c != Complex64::new(0.0, 0.0) {
                    picked += c.norm() * nb;
                    for (x, y) in r.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
        }
        (r, picked)
    }

    /// Adds the parity components of `v` that are not yet in the span;
    /// `noise` is the absolute round-off of `v`. Returns the new unit
    /// vectors with their relative round-off.
    fn add(&mut self, v: &[Complex64], noise: f64) -> Vec<(DenseVec, f64)> {
        let mut added = Vec::new();
        let (even, odd) = parity_split(v);
        for part in [even, odd] {
            let n = norm(&part);
            if n <= SPAN_TOL {
                continue;
            }
            let scaled: DenseVec = part.iter().map(|c| c / n).collect();
            let (r, picked) = self.residual(&scaled);
            let rel = noise / n + picked + f64::EPSILON;
            let rn = norm(&r);
            if rn > SPAN_TOL.max(NOISE_GUARD * rel) {
                let unit: DenseVec = r.iter().map(|c| c / rn).collect();
                self.basis.push(unit.clone());
                self.noise.push(rel / rn);
                added.push((unit, rel / rn));
            }
        }
        added
    }
}

/// Unital closure in dense coordinates. Generators come with their absolute
/// round-off and are closed under adjoint first.
fn dense_closure(gens: &[(DenseVec, f64)], dim: usize) -> Vec<DenseVec> {
    let mut all_gens: Vec<(DenseVec, f64)> = Vec::new();
    for (g, noise) in gens {
        let (even, odd) = parity_split(g);
        for part in [even, odd] {
            let n = norm(&part);
            if n > SPAN_TOL {
                let unit: DenseVec = part.iter().map(|c| c / n).collect();
                let rel = noise / n + f64::EPSILON;
                all_gens.push((dense_adjoint(&unit), rel));
                all_gens.push((unit, rel));
            }
        }
    }
    let mut span = SpanBuilder::new();
    let mut identity = vec![Complex64::new(0.0, 0.0); dim];
    identity[0] = Complex64::new(1.0, 0.0);
    let mut queue = span.add(&identity, 0.0);
    while let Some((e, re)) = queue.pop() {
        for (g, rg) in &all_gens {
            queue.extend(span.add(&dense_mul(&e, g), re + rg));
        }
    }
    span.basis
}

impl AlgebraBasis {
    /// Smallest unital product- and adjoint-closed span containing the generators.
    pub fn closure(generators: &[GradedOperator]) -> AlgebraBasis {
        let carrier: BTreeSet<Cell> = generators.iter().flat_map(|g| g.support()).collect();
        let noise: Vec<f64> = generators.iter().map(|g| INPUT_NOISE * g.hs_norm()).collect();
        AlgebraBasis::closure_on(generators, &noise, carrier)
    }

    fn closure_on(generators: &[GradedOperator], noise: &[f64], carrier: BTreeSet<Cell>) -> AlgebraBasis {
        let local = Carrier::new(carrier.iter().copied());
        let gens: Vec<(DenseVec, f64)> = generators
            .iter()
            .zip(noise)
            .map(|(g, n)| (local.to_dense(g).expect("generator inside carrier"), *n))
            .collect();
        let basis = dense_closure(&gens, local.dim());
        AlgebraBasis {
            elements: basis.iter().map(|v| local.to_operator(v, 1e-14)).collect(),
            generators: generators.to_vec(),
            carrier,
        }
    }

    pub fn elements(&self) -> &[GradedOperator] {
        &self.elements
    }

    pub fn generators(&self) -> &[GradedOperator] {
        &self.generators
    }

    pub fn carrier(&self) -> &BTreeSet<Cell> {
        &self.carrier
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Dimensions of the even and odd parts.
    pub fn graded_dimensions(&self) -> (usize, usize) {
        let odd = self
            .elements
            .iter()
            .filter(|e| e.parity() == Some(Parity::Odd))
            .count();
        (self.elements.len() - odd, odd)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Whether `op` lies in the span, to within [`SPAN_TOL`] relative.
    pub fn contains(&self, op: &GradedOperator) -> bool {
        let n = op.hs_norm();
        if n <= SPAN_TOL {
            return true;
        }
        let mut r = op.scale_real(1.0 / n);
        for _ in 0..2 {
            for b in &self.elements {
                let c = b.hs_inner(&r);
                r = &r - &b.scale(c);
            }
        }
        r.hs_norm() <= SPAN_TOL
    }

    /// Checks that all pairwise products stay in the span.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&(a * b))))
    }
}

/// Smallest unital closed span containing `generators`.
pub fn algebra_closure(generators: &[GradedOperator]) -> AlgebraBasis {
    AlgebraBasis::closure(generators)
}

/// Left factors of each operator with respect to the bipartition
/// `cells | complement`: grouping strings by their complement part gives
/// `op = Σ_R L_R · R` with distinct, hence independent, strings `R`.
pub fn left_factors(ops: &[GradedOperator], cells: &BTreeSet<Cell>) -> Vec<GradedOperator> {
    left_factors_by_source(ops, cells).into_iter().map(|(f, _)| f).collect()
}

/// Left factors paired with the index of the operator they came from.
fn left_factors_by_source(ops: &[GradedOperator], cells: &BTreeSet<Cell>) -> Vec<(GradedOperator, usize)> {
    let mut out = Vec::new();
    for (k, op) in ops.iter().enumerate() {
        let mut groups: BTreeMap<MajoranaString, GradedOperator> = BTreeMap::new();
        for (s, c) in op.terms() {
            let (neg, inside, outside) = s.split(|cell| cells.contains(&cell));
            groups
                .entry(outside)
                .or_default()
                .add_term(inside, if neg { -*c } else { *c });
        }
        out.extend(groups.into_values().filter(|g| !g.is_zero()).map(|g| (g, k)));
    }
    out
}

/// Support algebra of `ops` on `cells`: the smallest graded subalgebra `S` of
/// the algebra of `cells` with every op in `S ⊠ (complement algebra)`.
pub fn support_algebra(
    ops: &[GradedOperator],
    cells: &BTreeSet<Cell>,
) -> Result<AlgebraBasis, SupportError> {
    if cells.is_empty() {
        return Err(SupportError::Degenerate("empty cell set".into()));
    }
    // a factor inherits the round-off of its whole source operator, which
    // may be large relative to the factor itself
    let (factors, noise): (Vec<GradedOperator>, Vec<f64>) = left_factors_by_source(ops, cells)
        .into_iter()
        .map(|(f, k)| (f, INPUT_NOISE * ops[k].hs_norm()))
        .unzip();
    Ok(AlgebraBasis::closure_on(&factors, &noise, cells.clone()))
}

fn integer_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Nullity of a dense matrix, counting singular values at or below `tol`.
fn nullity(m: DMatrix<Complex64>, tol: f64) -> usize {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return cols;
    }
    let rank = m.singular_values().iter().filter(|s| **s > tol).count();
    cols - rank
}

/// Dimension of the odd part of the (ungraded) centre: odd elements that
/// commute with every generator.
fn odd_central_dimension(basis: &AlgebraBasis) -> usize {
    let local = Carrier::new(basis.carrier.iter().copied());
    let odd: Vec<DenseVec> = basis
        .elements
        .iter()
        .map(|e| local.to_dense(e).expect("inside carrier"))
        .filter(|v| is_odd_vec(v))
        .collect();
    if odd.is_empty() {
        return 0;
    }
    let probes: Vec<DenseVec> = if basis.generators.is_empty() {
        basis
            .elements
            .iter()
            .map(|e| local.to_dense(e).expect("inside carrier"))
            .collect()
    } else {
        basis
            .generators
            .iter()
            .map(|g| local.to_dense(g).expect("inside carrier"))
            .flat_map(|g| {
                let adj = dense_adjoint(&g);
                [g, adj]
            })
            .collect()
    };
    let dim = local.dim();
    let mut m = DMatrix::<Complex64>::zeros(probes.len() * dim, odd.len());
    for (j, o) in odd.iter().enumerate() {
        for (k, g) in probes.iter().enumerate() {
            let og = dense_mul(o, g);
            let go = dense_mul(g, o);
            for i in 0..dim {
                m[(k * dim + i, j)] = og[i] - go[i];
            }
        }
    }
    nullity(m, SPAN_TOL)
}

/// Identifies the algebra as `M(p|q)` or `Cl_1(p|q)`.
///
/// A Clifford algebra has an odd central element `γ` (it commutes with the
/// whole algebra, e.g. `X_0` in `span{I, X_0}`); full-matrix algebras have
/// none. The dimension must match: `(p+q)^2` or `2(p+q)^2`.
pub fn classify_algebra(basis: &AlgebraBasis) -> Result<AlgebraClass, SupportError> {
    let dim = basis.dimension();
    let clifford = odd_central_dimension(basis) > 0;
    if clifford {
        if dim % 2 != 0 {
            return Err(SupportError::BadDimension(dim));
        }
        let s = integer_sqrt(dim / 2).ok_or(SupportError::BadDimension(dim))?;
        Ok(AlgebraClass::Clifford { p_plus_q: s })
    } else {
        let s = integer_sqrt(dim).ok_or(SupportError::BadDimension(dim))?;
        let (even, odd) = basis.graded_dimensions();
        // p^2 + q^2 = even, 2pq = odd
        let diff = integer_sqrt(even.saturating_sub(odd)).ok_or(SupportError::BadDimension(dim))?;
        if (s + diff) % 2 != 0 || diff > s {
            return Err(SupportError::BadDimension(dim));
        }
        Ok(AlgebraClass::FullMatrix {
            p: (s + diff) / 2,
            q: (s - diff) / 2,
        })
    }
}
