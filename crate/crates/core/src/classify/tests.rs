use std::f64::consts::PI;

use super::*;
use crate::fca::angle_distance;

fn unit(theta: f64, n: u8) -> LocalUnitary {
    LocalUnitary::new(theta, n).unwrap()
}

#[test]
fn edge_supports_of_forking() {
    let rule = Automaton::forking(0.0, 0).unwrap().local_rule();
    let e = compute_edge_supports(&rule).unwrap();
    assert_eq!(e.e_l.dimension(), 2);
    assert!(e.e_l.contains(&GradedOperator::y(-1)));
    assert_eq!(e.e_r.dimension(), 2);
    assert!(e.e_r.contains(&GradedOperator::x(1)));
    assert!(e.e_c.is_trivial());
}

#[test]
fn edge_supports_of_identity_and_controlled_phase() {
    let e = compute_edge_supports(&LocalRule::identity()).unwrap();
    assert!(e.e_l.is_trivial() && e.e_r.is_trivial());
    assert_eq!(e.e_c.dimension(), 4);
    let rule = Automaton::controlled_phase(1.0, 0.0, 0).unwrap().local_rule();
    let e = compute_edge_supports(&rule).unwrap();
    for side in [&e.e_l, &e.e_r] {
        assert_eq!(side.dimension(), 2);
    }
    assert!(e.e_l.contains(&GradedOperator::z(-1)));
    assert!(e.e_r.contains(&GradedOperator::z(1)));
}

#[test]
fn identity_is_trivial_conjugation() {
    let c = classify(&LocalRule::identity()).unwrap();
    assert_eq!(c, Classification::LocalConjugation(LocalUnitary::identity()));
}

#[test]
fn conjugation_round_trip() {
    let c = classify_automaton(&Automaton::conjugation(PI / 3.0, 1).unwrap()).unwrap();
    match c {
        Classification::LocalConjugation(u) => assert!(u.same_action(&unit(PI / 3.0, 1), 1e-12)),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn forking_round_trip() {
    let c = classify_automaton(&Automaton::forking(0.7, 1).unwrap()).unwrap();
    match c {
        Classification::Forking { unitary, pre } => {
            assert!(unitary.same_action(&unit(0.7, 1), 1e-12), "{unitary:?}");
            assert!(pre.same_action(&LocalUnitary::identity(), 1e-12), "{pre:?}");
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn forking_with_pre_conjugation() {
    let a = Automaton::compose(
        Automaton::forking(1.2, 0).unwrap(),
        Automaton::conjugation(0.4, 1).unwrap(),
    );
    let c = classify_automaton(&a).unwrap();
    assert_eq!(c.family(), "forking");
    let rebuilt = c.to_automaton().local_rule();
    let rule = a.local_rule();
    assert!(rebuilt.image_x.approx_eq(&rule.image_x, 1e-10));
    assert!(rebuilt.image_y.approx_eq(&rule.image_y, 1e-10));
}

#[test]
fn controlled_phase_round_trip() {
    for &phi in &[PI / 2.0, 1.0, PI] {
        for &(theta, n) in &[(0.0, 0u8), (0.3, 0), (PI / 3.0, 1)] {
            let rule = Automaton::controlled_phase(phi, theta, n).unwrap().local_rule();
            match classify(&rule).unwrap() {
                Classification::ControlledPhase { phi: p, unitary } => {
                    assert!(angle_distance(p, phi, 2.0 * PI) < 1e-9, "{p} vs {phi}");
                    assert!(unitary.same_action(&unit(theta, n), 1e-9));
                }
                other => panic!("unexpected {other}"),
            }
            assert!(block_commutation_residual(&rule) < 1e-10);
        }
    }
}

#[test]
fn zero_phase_degenerates_to_conjugation() {
    let rule = Automaton::controlled_phase(0.0, 0.3, 0).unwrap().local_rule();
    assert_eq!(classify(&rule).unwrap().family(), "local-conjugation");
}

#[test]
fn majorana_shift_peels() {
    let c = classify_automaton(&Automaton::majorana_shift(Direction::Plus)).unwrap();
    assert_eq!(
        c,
        Classification::MajoranaShiftComposed {
            direction: Direction::Plus,
            inner: Box::new(Classification::LocalConjugation(LocalUnitary::identity())),
        }
    );
    assert_eq!(c.index().log2_num, -1);
}

#[test]
fn shifted_families_peel() {
    let a = Automaton::compose(Automaton::shift(-1), Automaton::controlled_phase(1.0, 0.2, 1).unwrap());
    let c = classify_automaton(&a).unwrap();
    assert_eq!(c.family(), "shift-composed");
    assert_eq!(c.unit_part().family(), "controlled-phase");
    assert_eq!(c.index().log2_num, 2);

    let a = Automaton::compose(
        Automaton::majorana_shift(Direction::Minus),
        Automaton::forking(0.5, 0).unwrap(),
    );
    let c = classify_automaton(&a).unwrap();
    assert_eq!(c.family(), "majorana-shift-composed");
    assert_eq!(c.unit_part().family(), "forking");
}

#[test]
fn invalid_rule_rejected() {
    let rule = LocalRule::new(GradedOperator::x(0), GradedOperator::x(1));
    assert!(classify(&rule).is_err());
}

#[test]
fn majorana_conjugated_forking_is_outside_the_normal_forms() {
    // σ₊ ∘ Forking ∘ σ₊⁻¹ keeps odd edge supports but gains a central part
    let s = Automaton::majorana_shift(Direction::Plus);
    let a = Automaton::compose(
        Automaton::compose(s.clone(), Automaton::forking(0.3, 0).unwrap()),
        s.invert().unwrap(),
    );
    let rule = a.local_rule();
    assert!(crate::fca::validate_local_rule(&rule, 1e-10).is_valid());
    assert_eq!(rule.reach(), (-1, 1));
    assert!(rule.image_x.support().contains(&0) && rule.image_x.support().contains(&1));
    assert!(matches!(classify(&rule), Err(ClassifyError::Unclassifiable(_))));
    // at θ = 0 the conjugate is a single-cell map
    let a = Automaton::compose(
        Automaton::compose(s.clone(), Automaton::forking(0.0, 0).unwrap()),
        s.invert().unwrap(),
    );
    assert_eq!(classify_automaton(&a).unwrap().family(), "local-conjugation");
}
