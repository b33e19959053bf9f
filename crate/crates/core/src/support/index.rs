use std::collections::BTreeSet;
use std::fmt;

use super::algebra::{classify_algebra, support_algebra, AlgebraBasis, AlgebraClass};
use crate::error::SupportError;
use crate::fca::Automaton;
use crate::graded::{Cell, GradedOperator};

/// Exact index `2^{log2_num / 2}`, together with the data of `√m (p+q) / d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexValue {
    pub log2_num: i64,
    pub provenance: Option<IndexProvenance>,
}

/// `m`, `p + q` and `d` of the left support algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexProvenance {
    pub m: usize,
    pub p_plus_q: usize,
    pub d: usize,
}

impl IndexValue {
    /// Denominator of the base-2 logarithm; the index is `2^{log2_num / LOG2_DEN}`.
    pub const LOG2_DEN: i64 = 2;

    pub fn from_log2_num(log2_num: i64) -> Self {
        IndexValue {
            log2_num,
            provenance: None,
        }
    }

    pub fn one() -> Self {
        IndexValue::from_log2_num(0)
    }

    pub fn is_one(&self) -> bool {
        self.log2_num == 0
    }

    pub fn value(&self) -> f64 {
        2f64.powf(self.log2_num as f64 / Self::LOG2_DEN as f64)
    }

    /// Product of indices (exact).
    pub fn times(&self, other: &IndexValue) -> IndexValue {
        IndexValue::from_log2_num(self.log2_num + other.log2_num)
    }

    /// Ratio `self / other` (exact).
    pub fn ratio(&self, other: &IndexValue) -> IndexValue {
        IndexValue::from_log2_num(self.log2_num - other.log2_num)
    }

    pub fn inverse(&self) -> IndexValue {
        IndexValue::from_log2_num(-self.log2_num)
    }

    /// Same exact value, ignoring provenance.
    pub fn same_value(&self, other: &IndexValue) -> bool {
        self.log2_num == other.log2_num
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_num % 2 == 0 {
            write!(f, "2^({})", self.log2_num / 2)
        } else {
            write!(f, "2^({}/2)", self.log2_num)
        }
    }
}

/// Both support algebras of the index computation.
#[derive(Clone, Debug)]
pub struct IndexWitness {
    pub block: i64,
    pub left: AlgebraBasis,
    pub right: AlgebraBasis,
    pub left_class: AlgebraClass,
    pub index: IndexValue,
}

fn log2_exact(n: usize) -> Option<i64> {
    n.is_power_of_two().then(|| n.trailing_zeros() as i64)
}

fn range(lo: Cell, hi: Cell) -> BTreeSet<Cell> {
    (lo..hi).collect()
}

/// Index of an automaton given by `evolve`, with blocks of `block` cells
/// starting at `origin`: `A_{2x}` is `[o, o+b)`, `A_{2x+1}` is `[o+b, o+2b)`,
/// the left algebra lives on `[o-b, o+b)` and the right one on `[o+b, o+3b)`.
///
/// `block` must be at least the interaction radius and a multiple of the
/// translation period of the automaton.
pub fn index_from_images<F: Fn(&GradedOperator) -> GradedOperator>(
    evolve: F,
    origin: Cell,
    block: i64,
) -> Result<IndexWitness, SupportError> {
    let b = block.max(1);
    let images: Vec<GradedOperator> = (origin..origin + 2 * b)
        .flat_map(|c| [evolve(&GradedOperator::x(c)), evolve(&GradedOperator::y(c))])
        .collect();
    let reach = range(origin - b, origin + 3 * b);
    if let Some(c) = images.iter().flat_map(|i| i.support()).find(|c| !reach.contains(c)) {
        return Err(SupportError::OutsideBipartition(c));
    }
    let left = support_algebra(&images, &range(origin - b, origin + b))?;
    let right = support_algebra(&images, &range(origin + b, origin + 3 * b))?;

    let (dl, dr) = (left.dimension(), right.dimension());
    let inconsistent = || SupportError::InconsistentIndex {
        dim_l: dl,
        dim_r: dr,
        block: b as usize,
    };
    let log_l = log2_exact(dl).ok_or_else(inconsistent)?;
    let log_r = log2_exact(dr).ok_or_else(inconsistent)?;
    // dim A_{2x} = 4^b; left gives log2 ind = (log_l - 2b)/2, right gives (2b - log_r)/2
    let from_left = log_l - 2 * b;
    let from_right = 2 * b - log_r;
    if from_left != from_right || log_l + log_r != 4 * b {
        return Err(inconsistent());
    }
    let left_class = classify_algebra(&left)?;
    let index = IndexValue {
        log2_num: from_left,
        provenance: Some(IndexProvenance {
            m: left_class.m(),
            p_plus_q: left_class.p_plus_q(),
            d: 1 << b,
        }),
    };
    Ok(IndexWitness {
        block: b,
        left,
        right,
        left_class,
        index,
    })
}

/// Index of `aut` computed with blocks starting at `origin`.
pub fn compute_index_at(aut: &Automaton, origin: Cell) -> Result<IndexWitness, SupportError> {
    let rule = aut.local_rule();
    let (lo, hi) = rule.reach();
    let radius = lo.abs().max(hi.abs());
    index_from_images(|op| rule.evolve(op), origin, radius.max(1))
}

/// `ind[T] = sqrt(dim L_{2x} / dim A_{2x})`, evaluated at the origin.
pub fn compute_index(aut: &Automaton) -> Result<IndexValue, SupportError> {
    Ok(compute_index_at(aut, 0)?.index)
}

/// Whether `ind[a ∘ b] = ind[a] · ind[b]` exactly.
pub fn check_multiplicativity(a: &Automaton, b: &Automaton) -> Result<bool, SupportError> {
    let ia = compute_index(a)?;
    let ib = compute_index(b)?;
    let iab = compute_index(&Automaton::compose(a.clone(), b.clone()))?;
    Ok(iab.same_value(&ia.times(&ib)))
}
