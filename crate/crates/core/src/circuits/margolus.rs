use std::f64::consts::FRAC_1_SQRT_2;

use super::fdfc::{Fdfc, Layer};
use super::gate::{embed_unitary, Gate};
use crate::classify::Classification;
use crate::error::CircuitError;
use crate::fca::{controlled_phase_gate, LocalUnitary};
use crate::graded::{Cell, GradedOperator};

/// `e^{-(π/4) Y_a X_b} = (I - Y_a X_b) / √2`.
pub fn forking_rotation(a: Cell, b: Cell) -> GradedOperator {
    (GradedOperator::identity() - &GradedOperator::y(a) * &GradedOperator::x(b))
        .scale_real(FRAC_1_SQRT_2)
}

/// `M = (X_a Z_b) e^{-(π/4) Y_a X_b}`; without the fix-up only the rotation.
pub fn forking_gate(a: Cell, b: Cell, fix_up: bool) -> GradedOperator {
    let rot = forking_rotation(a, b);
    if fix_up {
        &(&GradedOperator::x(a) * &GradedOperator::z(b)) * &rot
    } else {
        rot
    }
}

/// Gate on `{a, b}` acting as `ξ ↦ U† ξ U` on each of the two cells.
pub fn pair_conjugation(u: &LocalUnitary, a: Cell, b: Cell) -> GradedOperator {
    let block = [a, b];
    let ga = embed_unitary(&u.operator_at(a).adjoint(), &[a], &block);
    let gb = embed_unitary(&u.operator_at(b).adjoint(), &[b], &block);
    &ga * &gb
}

/// Depth-2 circuit of nearest-neighbour gates. `first` sits on
/// `{2x + p, 2x + p + 1}` with `p = first_parity`, `second` on the other
/// pairing; `first` acts first, so the automaton is `𝓜₂ ∘ 𝓜₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct MargolusScheme {
    pub first: Gate,
    pub second: Gate,
    pub first_parity: i64,
}

impl MargolusScheme {
    /// Templates are given on cells `{0, 1}`.
    pub fn new(first: GradedOperator, second: GradedOperator, first_parity: i64) -> Result<Self, CircuitError> {
        Ok(MargolusScheme {
            first: Gate::new(first, vec![0, 1])?,
            second: Gate::new(second, vec![0, 1])?,
            first_parity: first_parity.rem_euclid(2),
        })
    }

    pub fn second_parity(&self) -> i64 {
        1 - self.first_parity
    }

    /// First-layer gate on `{c, c+1}`; `c` must have the first-layer parity.
    pub fn first_at(&self, c: Cell) -> Gate {
        self.first.translate(c)
    }

    pub fn second_at(&self, c: Cell) -> Gate {
        self.second.translate(c)
    }

    pub fn to_fdfc(&self) -> Fdfc {
        let l1 = Layer::periodic(self.first.clone(), self.first_parity, 2).expect("pair template");
        let l2 = Layer::periodic(self.second.clone(), self.second_parity(), 2).expect("pair template");
        Fdfc::new(vec![l1, l2])
    }
}

/// Margolus scheme of `Forking(θ, n)`: first layer `M` on `{2x+1, 2x+2}`,
/// second layer `(U ⊠ U) M` on `{2x, 2x+1}`.
pub fn synthesize_forking_ms(theta: f64, n: u8) -> Result<MargolusScheme, CircuitError> {
    forking_scheme(&LocalUnitary::new(theta, n)?, &LocalUnitary::identity(), true)
}

/// As [`synthesize_forking_ms`] but with the bare rotation in place of `M`.
pub fn synthesize_forking_ms_without_fix_up(theta: f64, n: u8) -> Result<MargolusScheme, CircuitError> {
    forking_scheme(&LocalUnitary::new(theta, n)?, &LocalUnitary::identity(), false)
}

fn forking_scheme(u: &LocalUnitary, pre: &LocalUnitary, fix_up: bool) -> Result<MargolusScheme, CircuitError> {
    let m = forking_gate(0, 1, fix_up);
    let first = &m * &pair_conjugation(pre, 0, 1);
    let uu = &u.operator_at(0) * &u.operator_at(1);
    let second = &uu * &m;
    MargolusScheme::new(first, second, 1)
}

/// Controlled-phase automaton as a single-cell layer of `U†` followed by
/// staggered layers of `C_φ†`.
pub fn synthesize_controlled_phase(phi: f64, theta: f64, n: u8) -> Result<Fdfc, CircuitError> {
    let u = LocalUnitary::new(theta, n)?;
    let single = Gate::new(u.operator_at(0).adjoint(), vec![0])?;
    let c = Gate::new(controlled_phase_gate(phi, 0, 1).adjoint(), vec![0, 1])?;
    Ok(Fdfc::new(vec![
        Layer::periodic(single, 0, 1)?,
        Layer::periodic(c.clone(), 0, 2)?,
        Layer::periodic(c, 1, 2)?,
    ]))
}

/// Margolus scheme of a unit-index classification.
pub fn synthesize_margolus(c: &Classification) -> Result<MargolusScheme, CircuitError> {
    match c {
        Classification::LocalConjugation(u) => {
            MargolusScheme::new(pair_conjugation(u, 0, 1), GradedOperator::identity(), 0)
        }
        Classification::ControlledPhase { phi, unitary } => {
            let cd = controlled_phase_gate(*phi, 0, 1).adjoint();
            MargolusScheme::new(&cd * &pair_conjugation(unitary, 0, 1), cd, 0)
        }
        Classification::Forking { unitary, pre } => forking_scheme(unitary, pre, true),
        other => Err(CircuitError::NonUnitIndex {
            log2_num: other.index().log2_num,
        }),
    }
}

/// Circuit for a unit-index classification; the empty circuit for the identity.
pub fn synthesize(c: &Classification) -> Result<Fdfc, CircuitError> {
    match c {
        Classification::LocalConjugation(u) if u.n == 0 && u.theta == 0.0 => Ok(Fdfc::empty()),
        Classification::LocalConjugation(u) => {
            let g = Gate::new(u.operator_at(0).adjoint(), vec![0])?;
            Ok(Fdfc::new(vec![Layer::periodic(g, 0, 1)?]))
        }
        Classification::ControlledPhase { phi, unitary } => {
            synthesize_controlled_phase(*phi, unitary.theta, unitary.n)
        }
        other => Ok(synthesize_margolus(other)?.to_fdfc()),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::classify::{classify, classify_automaton};
    use crate::fca::{angle_distance, Automaton};
    use crate::graded::{jw_matrix, CellWindow, Parity};

    fn generators(cells: &[Cell]) -> Vec<GradedOperator> {
        cells
            .iter()
            .flat_map(|c| [GradedOperator::x(*c), GradedOperator::y(*c)])
            .collect()
    }

    fn agrees(f: &Fdfc, a: &Automaton, cells: &[Cell]) -> bool {
        let w = CellWindow::new(0, 7).unwrap();
        generators(cells).iter().all(|g| {
            let lhs = f.conjugate(g, &w).unwrap();
            lhs.approx_eq(&a.apply(g, &w).unwrap(), 1e-12)
        })
    }

    #[test]
    fn forking_scheme_matches_automaton() {
        for &(theta, n) in &[(0.0, 0u8), (0.4, 0), (1.1, 1), (PI / 2.0, 1)] {
            let f = synthesize_forking_ms(theta, n).unwrap().to_fdfc();
            assert!(agrees(&f, &Automaton::forking(theta, n).unwrap(), &[3, 4]), "({theta}, {n})");
        }
    }

    #[test]
    fn missing_fix_up_flips_only_the_x_branch() {
        let f = synthesize_forking_ms_without_fix_up(0.0, 0).unwrap().to_fdfc();
        let w = CellWindow::new(0, 7).unwrap();
        for c in [3, 4] {
            let x = f.conjugate(&GradedOperator::x(c), &w).unwrap();
            assert!(x.approx_eq(&-GradedOperator::y(c - 1), 1e-12));
            let y = f.conjugate(&GradedOperator::y(c), &w).unwrap();
            assert!(y.approx_eq(&GradedOperator::x(c + 1), 1e-12));
        }
    }

    #[test]
    fn first_layer_moves_odd_y_onto_next_x() {
        let ms = synthesize_forking_ms(0.0, 0).unwrap();
        for i in [1, 2] {
            let g = ms.first_at(2 * i - 1);
            assert!(g.apply(&GradedOperator::y(2 * i - 1)).approx_eq(&GradedOperator::x(2 * i), 1e-12));
        }
    }

    #[test]
    fn forking_gate_is_unitary_and_odd() {
        let w = CellWindow::new(0, 1).unwrap();
        let m = forking_gate(0, 1, true);
        assert_eq!(m.parity(), Some(Parity::Odd));
        let mat = jw_matrix(&m, &w).unwrap();
        let dev = (&mat * mat.adjoint() - nalgebra::DMatrix::identity(4, 4)).norm();
        assert!(dev < 1e-12);
        assert_eq!(forking_rotation(0, 1).parity(), Some(Parity::Even));
    }

    #[test]
    fn controlled_phase_round_trip() {
        let f = synthesize_controlled_phase(1.0, 0.3, 0).unwrap();
        let rule = f.induced_rule().unwrap();
        match classify(&rule).unwrap() {
            Classification::ControlledPhase { phi, unitary } => {
                assert!(angle_distance(phi, 1.0, 2.0 * PI) < 1e-9);
                assert!(unitary.same_action(&LocalUnitary::new(0.3, 0).unwrap(), 1e-9));
            }
            other => panic!("unexpected {other}"),
        }
        assert!(agrees(&f, &Automaton::controlled_phase(1.0, 0.3, 0).unwrap(), &[3, 4]));
    }

    #[test]
    fn zero_phase_is_conjugation() {
        let f = synthesize_controlled_phase(0.0, 0.7, 1).unwrap();
        assert!(agrees(&f, &Automaton::conjugation(0.7, 1).unwrap(), &[2, 3, 4]));
    }

    #[test]
    fn every_unit_class_has_a_margolus_scheme() {
        let autos = [
            Automaton::identity(),
            Automaton::conjugation(0.9, 1).unwrap(),
            Automaton::controlled_phase(PI, 0.2, 1).unwrap(),
            Automaton::forking(0.3, 1).unwrap(),
            Automaton::compose(Automaton::forking(1.0, 0).unwrap(), Automaton::conjugation(0.5, 1).unwrap()),
        ];
        for a in autos {
            let c = classify_automaton(&a).unwrap();
            let ms = synthesize_margolus(&c).unwrap();
            assert!(agrees(&ms.to_fdfc(), &a, &[3, 4]), "{a}");
            assert!(agrees(&synthesize(&c).unwrap(), &a, &[3, 4]), "{a}");
            assert!(ms.to_fdfc().index_is_one().unwrap());
        }
    }

    #[test]
    fn shifted_classes_are_rejected() {
        let c = classify_automaton(&Automaton::shift(1)).unwrap();
        assert!(matches!(synthesize(&c), Err(CircuitError::NonUnitIndex { log2_num: -2 })));
    }
}
