//! Classification of nearest-neighbour automata over one Fermionic mode per
//! cell, with parameter extraction.

mod extract;

use std::collections::BTreeSet;
use std::fmt;

pub use extract::{block_commutation_residual, EXTRACT_TOL};

use crate::error::{ClassifyError, FcaError};
use crate::fca::{validate_local_rule, Automaton, Direction, LocalRule, LocalUnitary, VALIDITY_TOL};
use crate::graded::{Cell, GradedOperator, Parity};
use crate::support::{compute_index, support_algebra, AlgebraBasis, IndexValue};

/// Support algebras of `T(A_0)` on cells -1, 0 and 1.
#[derive(Clone, Debug)]
pub struct EdgeSupports {
    pub e_l: AlgebraBasis,
    pub e_c: AlgebraBasis,
    pub e_r: AlgebraBasis,
}

/// Normal form of a nearest-neighbour automaton.
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    LocalConjugation(LocalUnitary),
    ControlledPhase { phi: f64, unitary: LocalUnitary },
    /// `Forking(unitary) ∘ Conjugation(pre)`.
    Forking { unitary: LocalUnitary, pre: LocalUnitary },
    /// `τ_{±1} ∘ inner`.
    ShiftComposed { direction: Direction, inner: Box<Classification> },
    /// `σ_± ∘ inner`.
    MajoranaShiftComposed { direction: Direction, inner: Box<Classification> },
}

impl Classification {
    pub fn family(&self) -> &'static str {
        match self {
            Classification::LocalConjugation(_) => "local-conjugation",
            Classification::ControlledPhase { .. } => "controlled-phase",
            Classification::Forking { .. } => "forking",
            Classification::ShiftComposed { .. } => "shift-composed",
            Classification::MajoranaShiftComposed { .. } => "majorana-shift-composed",
        }
    }

    /// Innermost unit-index factor.
    pub fn unit_part(&self) -> &Classification {
        match self {
            Classification::ShiftComposed { inner, .. }
            | Classification::MajoranaShiftComposed { inner, .. } => inner.unit_part(),
            other => other,
        }
    }

    /// Automaton in normal form.
    pub fn to_automaton(&self) -> Automaton {
        match self {
            Classification::LocalConjugation(u) => {
                if u.n == 0 && u.theta == 0.0 {
                    Automaton::identity()
                } else {
                    Automaton::Conjugation(*u)
                }
            }
            Classification::ControlledPhase { phi, unitary } => Automaton::ControlledPhase {
                phi: *phi,
                unitary: *unitary,
            },
            Classification::Forking { unitary, pre } => extract::reconstruct_forking(*unitary, *pre),
            Classification::ShiftComposed { direction, inner } => {
                Automaton::compose(Automaton::shift(direction.sign()), inner.to_automaton())
            }
            Classification::MajoranaShiftComposed { direction, inner } => Automaton::compose(
                Automaton::majorana_shift(*direction),
                inner.to_automaton(),
            ),
        }
    }

    /// Index implied by the family.
    pub fn index(&self) -> IndexValue {
        match self {
            // τ_{+1} has index 2^{-1}, σ_+ has 2^{-1/2} with the formula's convention
            Classification::ShiftComposed { direction, inner } => {
                IndexValue::from_log2_num(-2 * direction.sign()).times(&inner.index())
            }
            Classification::MajoranaShiftComposed { direction, inner } => {
                IndexValue::from_log2_num(-direction.sign()).times(&inner.index())
            }
            _ => IndexValue::one(),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::LocalConjugation(u) => {
                write!(f, "local-conjugation(θ={}, n={})", u.theta, u.n)
            }
            Classification::ControlledPhase { phi, unitary } => write!(
                f,
                "controlled-phase(φ={}, θ={}, n={})",
                phi, unitary.theta, unitary.n
            ),
            Classification::Forking { unitary, pre } => {
                write!(f, "forking(θ={}, n={})", unitary.theta, unitary.n)?;
                if pre.n != 0 || pre.theta != 0.0 {
                    write!(f, " ∘ conjugation(θ={}, n={})", pre.theta, pre.n)?;
                }
                Ok(())
            }
            Classification::ShiftComposed { direction, inner } => {
                write!(f, "shift({direction}) ∘ {inner}")
            }
            Classification::MajoranaShiftComposed { direction, inner } => {
                write!(f, "majorana-shift({direction}) ∘ {inner}")
            }
        }
    }
}

fn images(rule: &LocalRule) -> [GradedOperator; 2] {
    [rule.image_x.clone(), rule.image_y.clone()]
}

fn single(cell: Cell) -> BTreeSet<Cell> {
    [cell].into()
}

fn check_nearest_neighbour(rule: &LocalRule) -> Result<(), ClassifyError> {
    let mut support = rule.image_x.support();
    support.extend(rule.image_y.support());
    if support.iter().any(|c| c.abs() > 1) {
        return Err(ClassifyError::NotNearestNeighbour(support.into_iter().collect()));
    }
    Ok(())
}

fn check_valid(rule: &LocalRule) -> Result<(), ClassifyError> {
    let report = validate_local_rule(rule, VALIDITY_TOL);
    if let Some(v) = report.violations.first() {
        return Err(FcaError::InvalidRule(v.to_string()).into());
    }
    Ok(())
}

/// Support algebras of the image of the cell-0 algebra on cells -1, 0, 1.
pub fn compute_edge_supports(rule: &LocalRule) -> Result<EdgeSupports, ClassifyError> {
    check_valid(rule)?;
    check_nearest_neighbour(rule)?;
    let ims = images(rule);
    Ok(EdgeSupports {
        e_l: support_algebra(&ims, &single(-1))?,
        e_c: support_algebra(&ims, &single(0))?,
        e_r: support_algebra(&ims, &single(1))?,
    })
}

fn parity_content(a: &AlgebraBasis) -> (usize, usize) {
    a.graded_dimensions()
}

fn has_odd(a: &AlgebraBasis) -> bool {
    a.elements().iter().any(|e| e.parity() == Some(Parity::Odd))
}

fn classify_unit(rule: &LocalRule) -> Result<Classification, ClassifyError> {
    let edges = compute_edge_supports(rule)?;
    let (l, r) = (&edges.e_l, &edges.e_r);
    if parity_content(l) != parity_content(r) {
        return Err(ClassifyError::Unclassifiable(format!(
            "unbalanced edge supports: dim E_L = {}, dim E_R = {}",
            l.dimension(),
            r.dimension()
        )));
    }
    let classification = if l.is_trivial() {
        let u = extract::unitary_from_images(&rule.image_x, &rule.image_y)?;
        Classification::LocalConjugation(u)
    } else if !has_odd(l) {
        let (phi, unitary) = extract::extract_controlled_phase(rule)?;
        if phi == 0.0 {
            Classification::LocalConjugation(unitary)
        } else {
            Classification::ControlledPhase { phi, unitary }
        }
    } else if l.dimension() == 2 {
        let (unitary, pre) = extract::extract_forking(rule)?;
        Classification::Forking { unitary, pre }
    } else {
        return Err(ClassifyError::Unclassifiable(format!(
            "edge support of dimension {} with odd elements",
            l.dimension()
        )));
    };
    let rebuilt = classification.to_automaton().local_rule();
    if !extract::same_rule(&rebuilt, rule) {
        return Err(ClassifyError::Unclassifiable(format!(
            "rule does not match its {} normal form",
            classification.family()
        )));
    }
    Ok(classification)
}

fn peel(rule: &LocalRule, outer: &Automaton) -> Result<LocalRule, ClassifyError> {
    let inv = outer.invert()?;
    Ok(LocalRule::new(inv.evolve(&rule.image_x), inv.evolve(&rule.image_y)))
}

/// Classifies a valid nearest-neighbour rule.
///
/// Index `2^{∓1}` peels a shift `τ_{±1}`, index `2^{∓1/2}` a Majorana shift
/// `σ_±`; the remaining unit-index factor is a local conjugation, a
/// controlled phase or a forking automaton.
pub fn classify(rule: &LocalRule) -> Result<Classification, ClassifyError> {
    check_valid(rule)?;
    let index = compute_index(&Automaton::Custom(rule.clone()))?;
    let outer = match index.log2_num {
        0 => {
            check_nearest_neighbour(rule)?;
            return classify_unit(rule);
        }
        -2 => (Direction::Plus, true),
        2 => (Direction::Minus, true),
        -1 => (Direction::Plus, false),
        1 => (Direction::Minus, false),
        other => {
            return Err(ClassifyError::Unclassifiable(format!(
                "index 2^({other}/2) is outside the one-mode family"
            )))
        }
    };
    let (direction, is_shift) = outer;
    let outer_aut = if is_shift {
        Automaton::shift(direction.sign())
    } else {
        Automaton::majorana_shift(direction)
    };
    let inner_rule = peel(rule, &outer_aut)?;
    check_nearest_neighbour(&inner_rule)?;
    let inner = Box::new(classify_unit(&inner_rule)?);
    Ok(if is_shift {
        Classification::ShiftComposed { direction, inner }
    } else {
        Classification::MajoranaShiftComposed { direction, inner }
    })
}

/// Classifies the local rule of any automaton.
pub fn classify_automaton(aut: &Automaton) -> Result<Classification, ClassifyError> {
    classify(&aut.local_rule())
}

#[cfg(test)]
mod tests;
