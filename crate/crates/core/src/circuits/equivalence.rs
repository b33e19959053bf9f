use super::fdfc::Fdfc;
use super::margolus::synthesize;
use crate::classify::classify_automaton;
use crate::error::CircuitError;
use crate::fca::Automaton;
use crate::graded::{CellWindow, GradedOperator};
use crate::support::{compute_index, IndexValue};

/// Outcome of comparing two automata up to finite-depth circuits.
#[derive(Clone, Debug)]
pub enum Equivalence {
    /// `t = F ∘ s` for the circuit `F`.
    Witness(Fdfc),
    /// Indices differ; carries `ind(t) / ind(s)`.
    NotEquivalent(IndexValue),
}

/// Inverse of `s`; rules without a closed form are inverted through their
/// classified normal form, which agrees with them on every operator.
fn invert(s: &Automaton) -> Result<Automaton, CircuitError> {
    match s.invert() {
        Ok(inv) => Ok(inv),
        Err(_) => Ok(classify_automaton(s)?.to_automaton().invert()?),
    }
}

/// Circuit `F` with `t = F ∘ s`, or the index ratio that rules it out.
///
/// The circuit is checked on the generators of cells 0 and 1.
pub fn equivalence_witness(t: &Automaton, s: &Automaton) -> Result<Equivalence, CircuitError> {
    let it = compute_index(t)?;
    let is = compute_index(s)?;
    if !it.same_value(&is) {
        return Ok(Equivalence::NotEquivalent(it.ratio(&is)));
    }
    let quotient = Automaton::compose(t.clone(), invert(s)?);
    let circuit = synthesize(&classify_automaton(&quotient)?)?;
    let reach = s.local_rule().reach();
    let spread = reach.0.abs().max(reach.1.abs()) + circuit.light_cone_radius() + 2;
    let w = CellWindow::new(-spread, 1 + spread)?;
    for c in [0, 1] {
        for g in [GradedOperator::x(c), GradedOperator::y(c)] {
            let lhs = circuit.conjugate(&s.apply(&g, &w)?, &w)?;
            let rhs = t.apply(&g, &w)?;
            let dev = lhs.max_abs_diff(&rhs);
            if dev > 1e-10 {
                return Err(CircuitError::Verification(format!(
                    "circuit misses t on {g} by {dev:e}"
                )));
            }
        }
    }
    Ok(Equivalence::Witness(circuit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fca::Direction;

    #[test]
    fn forking_is_circuit_equivalent_to_identity() {
        let r = equivalence_witness(&Automaton::forking(0.0, 0).unwrap(), &Automaton::identity()).unwrap();
        match r {
            Equivalence::Witness(f) => assert_eq!(f.depth(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rule_given_automata_are_inverted_through_their_normal_form() {
        let s = Automaton::Custom(Automaton::forking(0.4, 1).unwrap().local_rule());
        let t = Automaton::compose(Automaton::conjugation(0.2, 0).unwrap(), s.clone());
        assert!(matches!(equivalence_witness(&t, &s).unwrap(), Equivalence::Witness(_)));
    }

    #[test]
    fn shift_and_majorana_shift_differ_by_root_two() {
        let r = equivalence_witness(&Automaton::shift(1), &Automaton::majorana_shift(Direction::Plus)).unwrap();
        match r {
            Equivalence::NotEquivalent(ratio) => {
                assert_eq!(ratio.log2_num, -1);
                assert!((ratio.value() - 2f64.powf(-0.5)).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_equivalence_is_empty() {
        let t = Automaton::controlled_phase(0.8, 0.1, 1).unwrap();
        match equivalence_witness(&t, &t).unwrap() {
            Equivalence::Witness(f) => assert_eq!(f.depth(), 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equal_index_pairs_get_witnesses() {
        let s = Automaton::majorana_shift(Direction::Plus);
        let t = Automaton::compose(Automaton::forking(0.3, 1).unwrap(), s.clone());
        assert!(matches!(equivalence_witness(&t, &s).unwrap(), Equivalence::Witness(_)));
        let t = Automaton::compose(Automaton::controlled_phase(2.0, 0.1, 0).unwrap(), Automaton::shift(-1));
        assert!(matches!(equivalence_witness(&t, &Automaton::shift(-1)).unwrap(), Equivalence::Witness(_)));
    }
}
