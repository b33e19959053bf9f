//! Fermionic cellular automata: local rules, built-in families, validity
//! checks and Heisenberg-picture evolution.

mod automaton;
mod rule;
mod unitary;
mod validate;

pub use automaton::{controlled_phase_gate, forking_outer, Automaton, Direction};
pub use rule::LocalRule;
pub use unitary::{angle_distance, wrap_angle, LocalUnitary};
pub use validate::{validate_local_rule, Generator, ValidityReport, Violation, VALIDITY_TOL};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{jw_matrix, CellWindow, GradedOperator};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn builtins() -> Vec<Automaton> {
        vec![
            Automaton::identity(),
            Automaton::shift(1),
            Automaton::shift(-1),
            Automaton::majorana_shift(Direction::Plus),
            Automaton::majorana_shift(Direction::Minus),
            Automaton::conjugation(0.4, 0).unwrap(),
            Automaton::conjugation(PI / 3.0, 1).unwrap(),
            Automaton::controlled_phase(1.0, 0.3, 0).unwrap(),
            Automaton::controlled_phase(PI, PI / 3.0, 1).unwrap(),
            Automaton::forking(0.0, 0).unwrap(),
            Automaton::forking(0.7, 1).unwrap(),
            Automaton::forking(1.9, 0).unwrap(),
        ]
    }

    fn generators(cells: std::ops::RangeInclusive<i64>) -> Vec<GradedOperator> {
        cells
            .flat_map(|c| [GradedOperator::x(c), GradedOperator::y(c)])
            .collect()
    }

    #[test]
    fn builtins_are_valid() {
        for a in builtins() {
            let report = a.validate(VALIDITY_TOL);
            assert!(report.is_valid(), "{a}: {:?}", report.violations);
            let inv = a.invert().unwrap();
            assert!(inv.validate(VALIDITY_TOL).is_valid(), "inverse of {a}");
        }
    }

    #[test]
    fn overlap_violation_detected() {
        let rule = LocalRule::new(GradedOperator::x(0), GradedOperator::x(1));
        let report = validate_local_rule(&rule, VALIDITY_TOL);
        assert!(!report.is_valid());
        // {X_1, τ_1 X_0} = {X_1, X_1} = 2I
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Overlap { shift: 1, left: Generator::Y, right: Generator::X, residual }
                if (*residual - 2.0).abs() < 1e-12
        )));
    }

    #[test]
    fn shift_and_majorana_shift_images() {
        let w = CellWindow::new(-2, 2).unwrap();
        let x0 = GradedOperator::x(0);
        let y0 = GradedOperator::y(0);
        assert_eq!(Automaton::shift(1).apply(&x0, &w).unwrap(), GradedOperator::x(1));
        let sp = Automaton::majorana_shift(Direction::Plus);
        assert_eq!(sp.apply(&x0, &w).unwrap(), y0);
        assert_eq!(sp.apply(&y0, &w).unwrap(), GradedOperator::x(1));
        let spi = sp.invert().unwrap();
        assert_eq!(spi.apply(&x0, &w).unwrap(), GradedOperator::y(-1));
        assert_eq!(spi.apply(&y0, &w).unwrap(), x0);
    }

    #[test]
    fn window_too_small_rejected() {
        let w = CellWindow::new(0, 0).unwrap();
        assert!(Automaton::shift(1).apply(&GradedOperator::x(0), &w).is_err());
    }

    #[test]
    fn forking_on_parity() {
        let f = Automaton::forking(0.0, 0).unwrap();
        let z = f.evolve(&GradedOperator::z(0));
        let expected =
            (&GradedOperator::x(1) * &GradedOperator::y(-1)).scale(Complex64::new(0.0, 1.0));
        assert_eq!(z, expected);
        // homomorphism against the dense matrices of the images
        let w = CellWindow::new(-1, 1).unwrap();
        let mx = jw_matrix(&f.evolve(&GradedOperator::x(0)), &w).unwrap();
        let my = jw_matrix(&f.evolve(&GradedOperator::y(0)), &w).unwrap();
        let oracle = (&my * &mx) * Complex64::new(0.0, 1.0);
        assert!((jw_matrix(&z, &w).unwrap() - oracle).norm() < 1e-13);
    }

    #[test]
    fn majorana_shift_squares_to_shift() {
        for d in [Direction::Plus, Direction::Minus] {
            let s = Automaton::majorana_shift(d);
            let sq = Automaton::compose(s.clone(), s);
            assert_eq!(sq.local_rule(), Automaton::shift(d.sign()).local_rule());
        }
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        for a in builtins() {
            let id = Automaton::compose(a.invert().unwrap(), a.clone());
            for g in generators(-1..=1) {
                assert!(id.evolve(&g).approx_eq(&g, 1e-12), "{a} on {g}");
            }
            let id = Automaton::compose(a.clone(), a.invert().unwrap());
            for g in generators(-1..=1) {
                assert!(id.evolve(&g).approx_eq(&g, 1e-12), "{a} on {g}");
            }
        }
    }

    #[test]
    fn conjugation_inverse_checked_against_matrices() {
        let u = LocalUnitary::new(0.8, 0).unwrap();
        let w = CellWindow::new(0, 0).unwrap();
        let mu = jw_matrix(&u.operator_at(0), &w).unwrap();
        let inv = Automaton::conjugation(0.8, 0).unwrap().invert().unwrap();
        assert_eq!(inv, Automaton::conjugation(-0.8, 0).unwrap());
        for g in generators(0..=0) {
            let img = jw_matrix(&inv.evolve(&g), &w).unwrap();
            let oracle = &mu * jw_matrix(&g, &w).unwrap() * mu.adjoint();
            assert!((img - oracle).norm() < 1e-13);
        }
    }

    #[test]
    fn forking_factorizes_through_outer_conjugation() {
        for &(theta, n) in &[(0.0, 0u8), (0.7, 1), (1.9, 0), (2.5, 1)] {
            let u = LocalUnitary::new(theta, n).unwrap();
            let direct = Automaton::Forking(u).local_rule();
            let split = Automaton::compose(
                Automaton::Conjugation(forking_outer(&u)),
                Automaton::forking(0.0, 0).unwrap(),
            )
            .local_rule();
            assert!(direct.image_x.approx_eq(&split.image_x, 1e-13));
            assert!(direct.image_y.approx_eq(&split.image_y, 1e-13));
        }
    }

    #[test]
    fn untwisted_forking_is_an_involution() {
        let f = Automaton::forking(0.0, 0).unwrap();
        let ff = Automaton::compose(f.clone(), f);
        for g in generators(-1..=1) {
            assert_eq!(ff.evolve(&g), g);
        }
    }

    #[test]
    fn controlled_phase_with_zero_phase_is_conjugation() {
        let cp = Automaton::controlled_phase(0.0, 0.3, 1).unwrap().local_rule();
        let cj = Automaton::conjugation(0.3, 1).unwrap().local_rule();
        assert!(cp.image_x.approx_eq(&cj.image_x, 1e-14));
        assert!(cp.image_y.approx_eq(&cj.image_y, 1e-14));
    }

    #[test]
    fn custom_inverse_unsupported() {
        let a = Automaton::Custom(LocalRule::identity());
        assert!(a.invert().is_err());
    }

    #[test]
    fn composition_neighbourhood_is_sumset() {
        let a = Automaton::compose(Automaton::shift(1), Automaton::forking(0.0, 0).unwrap());
        assert_eq!(a.neighbourhood(), [0, 2].into());
    }
}
