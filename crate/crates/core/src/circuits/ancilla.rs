use std::f64::consts::FRAC_1_SQRT_2;

use super::fdfc::{Fdfc, Layer};
use super::gate::{embed_unitary, Gate};
use super::margolus::MargolusScheme;
use crate::error::CircuitError;
use crate::fca::LocalRule;
use crate::graded::{Cell, CellWindow, GradedOperator};

/// Slots of an enlarged two-cell gate: physical and ancilla of the left
/// cell, then physical and ancilla of the right cell.
const SLOTS: [Cell; 4] = [0, 1, 2, 3];

/// Margolus scheme on cells that carry one physical and one ancilla mode
/// pair each. Gates act on four slots `(P_a, A_a, P_b, A_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnlargedScheme {
    pub first: GradedOperator,
    pub second: GradedOperator,
    pub first_parity: i64,
}

/// `(ξ_p - ξ_a) / √2`, exchanging the two Majorana modes up to sign.
fn reflection(p: GradedOperator, a: GradedOperator) -> GradedOperator {
    (p - a).scale_real(FRAC_1_SQRT_2)
}

/// Even unitary swapping `P ↔ A` on both enlarged cells of a gate.
fn slot_swap() -> GradedOperator {
    let mut s = GradedOperator::identity();
    for p in [0, 2] {
        let vx = reflection(GradedOperator::x(p), GradedOperator::x(p + 1));
        let vy = reflection(GradedOperator::y(p), GradedOperator::y(p + 1));
        s = &(&s * &vx) * &vy;
    }
    s
}

fn on_slots(g: &GradedOperator, left: Cell, right: Cell) -> GradedOperator {
    let moved = g.relabel(|c| if c == 0 { left } else { right });
    embed_unitary(&moved, &[left, right], &SLOTS)
}

impl EnlargedScheme {
    /// The scheme's gates on the physical slots; ancillas stay idle.
    pub fn idle_lift(ms: &MargolusScheme) -> Self {
        EnlargedScheme {
            first: on_slots(ms.first.unitary(), 0, 2),
            second: on_slots(ms.second.unitary(), 0, 2),
            first_parity: ms.first_parity,
        }
    }

    /// Swaps each physical mode pair into its ancilla, runs the scheme there
    /// and swaps back in the second layer, so the ancillas carry the data
    /// between the two layers.
    pub fn swap_lift(ms: &MargolusScheme) -> Self {
        let s = slot_swap();
        EnlargedScheme {
            first: &on_slots(ms.first.unitary(), 1, 3) * &s,
            second: &s.adjoint() * &on_slots(ms.second.unitary(), 1, 3),
            first_parity: ms.first_parity,
        }
    }

    /// The gates placed on explicit cells `[P_a, A_a, P_b, A_b]`.
    pub fn first_on(&self, cells: [Cell; 4]) -> Result<Gate, CircuitError> {
        Gate::new(self.first.relabel(|s| cells[s as usize]), cells.to_vec())
    }

    pub fn second_on(&self, cells: [Cell; 4]) -> Result<Gate, CircuitError> {
        Gate::new(self.second.relabel(|s| cells[s as usize]), cells.to_vec())
    }

    /// The enlarged scheme with `P_x` on cell `2x` and `A_x` on cell `2x + 1`.
    pub fn interleaved(&self) -> Result<Fdfc, CircuitError> {
        let p = self.first_parity;
        let place = |x: Cell| [2 * x, 2 * x + 1, 2 * x + 2, 2 * x + 3];
        Ok(Fdfc::new(vec![
            Layer::periodic(self.first_on(place(p))?, 0, 4)?,
            Layer::periodic(self.second_on(place(1 - p))?, 0, 4)?,
        ]))
    }
}

/// Local cell hosting the ancilla of each local cell `0..12` of the tile.
///
/// Every host is either already fully updated or untouched until the
/// ancilla it carries has been released.
pub const HOSTS: [Cell; 12] = [11, 6, 10, 0, 1, 8, 9, 11, 5, 3, 7, 0];

/// Gate steps of the tile, as `(first_layer, left_cell)` pairs per layer.
const STEPS: [&[(bool, Cell)]; 8] = [
    &[(true, 2), (true, 4), (true, 6)],
    &[(false, 3), (false, 5)],
    &[(true, 8)],
    &[(false, 7)],
    &[(true, 0)],
    &[(false, 1)],
    &[(true, 10)],
    &[(false, 9)],
];

/// Cells of the tile whose generators the schedule evolves exactly as the
/// scheme does.
pub const INTERIOR: std::ops::RangeInclusive<Cell> = 2..=9;

/// Scheme gates rearranged on a 12-cell tile so that the ancilla of each
/// cell is carried by another physical cell of the tile.
#[derive(Clone, Debug)]
pub struct AncillaSchedule {
    pub circuit: Fdfc,
    /// First cell of the tile.
    pub anchor: Cell,
    /// `(cell, host, opened_at, closed_at)` with layer indices.
    pub hosts: Vec<(Cell, Cell, usize, Option<usize>)>,
}

/// Ancilla-free schedule for an enlarged scheme on the first 12-cell tile
/// of `w` whose anchor has the first-layer parity.
pub fn ancilla_removal_schedule(es: &EnlargedScheme, w: &CellWindow) -> Result<AncillaSchedule, CircuitError> {
    let anchor = if (w.lo - es.first_parity).rem_euclid(2) == 0 {
        w.lo
    } else {
        w.lo + 1
    };
    if anchor + 11 > w.hi {
        return Err(CircuitError::WindowTooSmall(format!(
            "ancilla removal needs 12 cells starting at parity {}, got [{}, {}]",
            es.first_parity, w.lo, w.hi
        )));
    }
    let mut layers = Vec::with_capacity(STEPS.len());
    let mut opened = [None; 12];
    let mut closed = [None; 12];
    for (t, step) in STEPS.iter().enumerate() {
        let mut gates = Vec::new();
        for &(first, a) in step.iter() {
            let b = a + 1;
            let cells = [a, HOSTS[a as usize], b, HOSTS[b as usize]].map(|c| c + anchor);
            if first {
                opened[a as usize] = Some(t);
                opened[b as usize] = Some(t);
                gates.push(es.first_on(cells)?);
            } else {
                closed[a as usize] = Some(t);
                closed[b as usize] = Some(t);
                gates.push(es.second_on(cells)?);
            }
        }
        layers.push(Layer::finite(gates)?);
    }
    let hosts = (0..12)
        .map(|c| {
            let open = opened[c].expect("every cell is opened");
            (c as Cell + anchor, HOSTS[c] + anchor, open, closed[c])
        })
        .collect();
    Ok(AncillaSchedule {
        circuit: Fdfc::new(layers),
        anchor,
        hosts,
    })
}

impl AncillaSchedule {
    pub fn window(&self) -> CellWindow {
        CellWindow::new(self.anchor, self.anchor + 11).expect("12 cells")
    }

    /// Largest deviation from `rule` on the generators of the interior cells.
    pub fn interior_residual(&self, rule: &LocalRule) -> Result<f64, CircuitError> {
        let w = self.window();
        let mut worst = 0.0f64;
        for c in INTERIOR.map(|c| c + self.anchor) {
            for g in [GradedOperator::x(c), GradedOperator::y(c)] {
                let got = self.circuit.conjugate(&g, &w)?;
                worst = worst.max(got.max_abs_diff(&rule.evolve(&g)));
            }
        }
        Ok(worst)
    }

    /// Largest change of a host's generators over the span in which it
    /// carries a released ancilla.
    pub fn host_residual(&self) -> Result<f64, CircuitError> {
        let w = self.window();
        let mut worst = 0.0f64;
        for &(_, host, open, close) in &self.hosts {
            let Some(close) = close else { continue };
            let span = Fdfc::new(self.circuit.layers()[open..=close].to_vec());
            for g in [GradedOperator::x(host), GradedOperator::y(host)] {
                worst = worst.max(span.conjugate(&g, &w)?.max_abs_diff(&g));
            }
        }
        Ok(worst)
    }

    pub fn num_gates(&self) -> usize {
        self.circuit
            .layers()
            .iter()
            .map(|l| match l {
                Layer::Finite(g) => g.len(),
                Layer::Periodic { .. } => 0,
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::margolus::synthesize_forking_ms;
    use crate::fca::Automaton;

    fn forking_lifts() -> [EnlargedScheme; 2] {
        let ms = synthesize_forking_ms(0.6, 1).unwrap();
        [EnlargedScheme::idle_lift(&ms), EnlargedScheme::swap_lift(&ms)]
    }

    #[test]
    fn swap_exchanges_slots() {
        let s = Gate::new(slot_swap(), SLOTS.to_vec()).unwrap();
        assert!(s.apply(&GradedOperator::x(0)).approx_eq(&GradedOperator::x(1), 1e-12));
        assert!(s.apply(&GradedOperator::y(3)).approx_eq(&GradedOperator::y(2), 1e-12));
    }

    #[test]
    fn lifts_act_as_scheme_on_physical_and_trivially_on_ancillas() {
        let rule = Automaton::forking(0.6, 1).unwrap().local_rule();
        // physical x sits on 2x, so the scheme's image is stretched by two
        let stretch = |op: &GradedOperator| op.relabel(|c| 2 * c);
        let w = CellWindow::new(0, 15).unwrap();
        for es in forking_lifts() {
            let f = es.interleaved().unwrap();
            for x in [3, 4] {
                for g in [GradedOperator::x(x), GradedOperator::y(x)] {
                    let got = f.conjugate(&stretch(&g), &w).unwrap();
                    assert!(got.approx_eq(&stretch(&rule.evolve(&g)), 1e-12));
                }
                for g in [GradedOperator::x(2 * x + 1), GradedOperator::y(2 * x + 1)] {
                    assert!(f.conjugate(&g, &w).unwrap().approx_eq(&g, 1e-12));
                }
            }
        }
    }

    #[test]
    fn schedule_reproduces_forking_on_interior() {
        let rule = Automaton::forking(0.6, 1).unwrap().local_rule();
        for es in forking_lifts() {
            let sched = ancilla_removal_schedule(&es, &CellWindow::new(-3, 9).unwrap()).unwrap();
            assert_eq!(sched.anchor, -3);
            assert!(sched.interior_residual(&rule).unwrap() < 1e-10);
            assert!(sched.host_residual().unwrap() < 1e-10);
            assert_eq!(sched.circuit.depth(), 8);
            assert_eq!(sched.num_gates(), 11);
        }
    }

    #[test]
    fn identity_scheme_gives_identity_schedule() {
        let ms = MargolusScheme::new(GradedOperator::identity(), GradedOperator::identity(), 0).unwrap();
        let sched = ancilla_removal_schedule(&EnlargedScheme::idle_lift(&ms), &CellWindow::new(0, 11).unwrap()).unwrap();
        assert!(sched.interior_residual(&LocalRule::identity()).unwrap() < 1e-14);
    }

    #[test]
    fn short_window_rejected() {
        let [es, _] = forking_lifts();
        // the first-layer parity is odd, so [0, 11] has only 11 usable cells
        assert!(ancilla_removal_schedule(&es, &CellWindow::new(0, 11).unwrap()).is_err());
    }
}
