use std::collections::BTreeSet;

use super::gate::Gate;
use crate::error::CircuitError;
use crate::fca::LocalRule;
use crate::graded::{Cell, CellWindow, GradedOperator};
use crate::support::{index_from_images, IndexValue};

/// One layer of pairwise disjoint gates.
#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    /// Translates of `template` by `offset + k * period` for every integer `k`.
    Periodic { template: Gate, offset: i64, period: i64 },
    /// An explicit finite list of gates.
    Finite(Vec<Gate>),
}

impl Layer {
    pub fn periodic(template: Gate, offset: i64, period: i64) -> Result<Self, CircuitError> {
        if period <= 0 {
            return Err(CircuitError::WindowTooSmall(format!(
                "period must be positive, got {period}"
            )));
        }
        let cells = template.cells();
        for a in cells {
            for b in cells {
                let d = a - b;
                if d != 0 && d % period == 0 {
                    return Err(CircuitError::Overlap(*a));
                }
            }
        }
        Ok(Layer::Periodic {
            template,
            offset,
            period,
        })
    }

    pub fn finite(gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut seen = BTreeSet::new();
        for g in &gates {
            for c in g.cells() {
                if !seen.insert(*c) {
                    return Err(CircuitError::Overlap(*c));
                }
            }
        }
        Ok(Layer::Finite(gates))
    }

    /// Gates that intersect `support`, in increasing position.
    pub fn gates_touching(&self, support: &BTreeSet<Cell>) -> Vec<Gate> {
        match self {
            Layer::Finite(gates) => gates.iter().filter(|g| g.touches(support)).cloned().collect(),
            Layer::Periodic {
                template,
                offset,
                period,
            } => {
                let mut ks = BTreeSet::new();
                for c in support {
                    for t in template.cells() {
                        let d = c - offset - t;
                        if d.rem_euclid(*period) == 0 {
                            ks.insert(d.div_euclid(*period));
                        }
                    }
                }
                ks.into_iter()
                    .map(|k| template.translate(offset + k * period))
                    .collect()
            }
        }
    }

    /// Gates with at least one cell in the window.
    pub fn gates_in_window(&self, w: &CellWindow) -> Vec<Gate> {
        self.gates_touching(&w.cells().collect())
    }

    /// Largest block diameter.
    pub fn diameter(&self) -> i64 {
        let diam = |g: &Gate| {
            let cells = g.cells();
            cells.iter().max().unwrap_or(&0) - cells.iter().min().unwrap_or(&0)
        };
        match self {
            Layer::Periodic { template, .. } => diam(template),
            Layer::Finite(gates) => gates.iter().map(diam).max().unwrap_or(0),
        }
    }

    pub fn period(&self) -> i64 {
        match self {
            Layer::Periodic { period, .. } => *period,
            Layer::Finite(_) => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Layer::Finite(g) if g.is_empty())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Finite-depth circuit. Layers act on operators first-to-last: the first
/// layer is the innermost conjugation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Fdfc {
    layers: Vec<Layer>,
}

impl Fdfc {
    pub fn new(layers: Vec<Layer>) -> Self {
        Fdfc { layers }
    }

    pub fn empty() -> Self {
        Fdfc::default()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn num_gates_in(&self, w: &CellWindow) -> usize {
        self.layers.iter().map(|l| l.gates_in_window(w).len()).sum()
    }

    /// Bound on how far support can spread.
    pub fn light_cone_radius(&self) -> i64 {
        self.layers.iter().map(|l| l.diameter()).sum()
    }

    /// Common period of all layers.
    pub fn period(&self) -> i64 {
        self.layers
            .iter()
            .map(|l| l.period())
            .fold(1, |acc, p| acc / gcd(acc, p) * p)
    }

    /// Layer-by-layer image of `op`; every gate that acts must lie in `w`.
    pub fn conjugate(&self, op: &GradedOperator, w: &CellWindow) -> Result<GradedOperator, CircuitError> {
        w.check(op)?;
        let mut out = op.clone();
        for layer in &self.layers {
            for gate in layer.gates_touching(&out.support()) {
                if let Some(c) = gate.cells().iter().find(|c| !w.contains(**c)) {
                    return Err(CircuitError::WindowTooSmall(format!(
                        "gate on {:?} reaches cell {c} outside [{}, {}]",
                        gate.cells(),
                        w.lo,
                        w.hi
                    )));
                }
                out = gate.apply(&out);
            }
        }
        Ok(out)
    }

    /// Image of `op` without window bookkeeping.
    pub fn evolve(&self, op: &GradedOperator) -> GradedOperator {
        let mut out = op.clone();
        for layer in &self.layers {
            for gate in layer.gates_touching(&out.support()) {
                out = gate.apply(&out);
            }
        }
        out
    }

    /// Local rule of the induced automaton, if the circuit acts translation
    /// invariantly on cells 0 and 1.
    pub fn induced_rule(&self) -> Result<LocalRule, CircuitError> {
        let x0 = self.evolve(&GradedOperator::x(0));
        let y0 = self.evolve(&GradedOperator::y(0));
        let x1 = self.evolve(&GradedOperator::x(1));
        let y1 = self.evolve(&GradedOperator::y(1));
        if !x1.approx_eq(&x0.translate(1), 1e-10) || !y1.approx_eq(&y0.translate(1), 1e-10) {
            return Err(CircuitError::Verification(
                "circuit is not invariant under unit translations".into(),
            ));
        }
        Ok(LocalRule::new(x0, y0))
    }

    /// Index of the induced automaton, using blocks that are a multiple of
    /// the circuit period.
    pub fn index(&self) -> Result<IndexValue, CircuitError> {
        let p = self.period();
        let r = self.light_cone_radius().max(1);
        let b = p * ((r + p - 1) / p);
        Ok(index_from_images(|op| self.evolve(op), 0, b)?.index)
    }

    pub fn index_is_one(&self) -> Result<bool, CircuitError> {
        Ok(self.index()?.is_one())
    }
}
