use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use num_complex::Complex64;

use super::rule::LocalRule;
use super::unitary::{wrap_angle, LocalUnitary};
use super::validate::{validate_local_rule, ValidityReport};
use crate::error::FcaError;
use crate::graded::{CellWindow, GradedOperator, ZERO_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Plus => "+",
            Direction::Minus => "-",
        })
    }
}

/// A Fermionic cellular automaton, either from an explicit rule or one of the
/// built-in families.
#[derive(Clone, Debug, PartialEq)]
pub enum Automaton {
    Custom(LocalRule),
    /// `X_x ↦ X_{x+d}`, `Y_x ↦ Y_{x+d}`.
    Shift(i64),
    /// `σ±: (X_x, Y_x) ↦ (Y_x, X_{x±1})`; with `inverted`,
    /// `σ±⁻¹: (X_x, Y_x) ↦ (Y_{x∓1}, X_x)`.
    MajoranaShift { direction: Direction, inverted: bool },
    /// `ξ ↦ U† ξ U` on every cell.
    Conjugation(LocalUnitary),
    /// `T_0(ξ) = G†(U† ξ U)G` with `G = C_{-1,0} C_{0,1}` and
    /// `C_{a,b} = I + (e^{iφ} - 1) n_a n_b`.
    ControlledPhase { phi: f64, unitary: LocalUnitary },
    /// `X_0 ↦ W(Y_{-1})`, `Y_0 ↦ W(X_1)` with `W(O) = (-1)^{n g(O)} U O U†`.
    Forking(LocalUnitary),
    /// `factors[0] ∘ factors[1] ∘ ...`: the last factor acts first.
    Composition(Vec<Automaton>),
}

fn occupation(cell: i64) -> GradedOperator {
    // n = (I - Z) / 2
    (GradedOperator::identity() - GradedOperator::z(cell)).scale_real(0.5)
}

/// `C_{a,b}(φ) = I + (e^{iφ} - 1) n_a n_b`.
pub fn controlled_phase_gate(phi: f64, a: i64, b: i64) -> GradedOperator {
    let k = Complex64::from_polar(1.0, phi) - 1.0;
    GradedOperator::identity() + (&occupation(a) * &occupation(b)).scale(k)
}

impl Automaton {
    pub fn identity() -> Self {
        Automaton::Composition(Vec::new())
    }

    pub fn shift(d: i64) -> Self {
        Automaton::Shift(d)
    }

    pub fn majorana_shift(direction: Direction) -> Self {
        Automaton::MajoranaShift {
            direction,
            inverted: false,
        }
    }

    pub fn conjugation(theta: f64, n: u8) -> Result<Self, FcaError> {
        Ok(Automaton::Conjugation(LocalUnitary::new(theta, n)?))
    }

    pub fn controlled_phase(phi: f64, theta: f64, n: u8) -> Result<Self, FcaError> {
        if !phi.is_finite() {
            return Err(FcaError::Parameter(format!("phi must be finite, got {phi}")));
        }
        Ok(Automaton::ControlledPhase {
            phi: wrap_angle(phi, TAU),
            unitary: LocalUnitary::new(theta, n)?,
        })
    }

    pub fn forking(theta: f64, n: u8) -> Result<Self, FcaError> {
        Ok(Automaton::Forking(LocalUnitary::new(theta, n)?))
    }

    /// `a ∘ b`: `b` acts first. Nested compositions are flattened.
    pub fn compose(a: Automaton, b: Automaton) -> Automaton {
        let mut factors = Vec::new();
        for part in [a, b] {
            match part {
                Automaton::Composition(inner) => factors.extend(inner),
                other => factors.push(other),
            }
        }
        Automaton::Composition(factors)
    }

    /// Images of `X_0` and `Y_0`.
    pub fn local_rule(&self) -> LocalRule {
        let (x, y) = match self {
            Automaton::Custom(rule) => return rule.clone(),
            Automaton::Shift(d) => (GradedOperator::x(*d), GradedOperator::y(*d)),
            Automaton::MajoranaShift {
                direction,
                inverted,
            } => {
                let s = direction.sign();
                if *inverted {
                    (GradedOperator::y(-s), GradedOperator::x(0))
                } else {
                    (GradedOperator::y(0), GradedOperator::x(s))
                }
            }
            Automaton::Conjugation(u) => (
                u.conjugate(&GradedOperator::x(0)),
                u.conjugate(&GradedOperator::y(0)),
            ),
            Automaton::ControlledPhase { phi, unitary } => {
                let g = &controlled_phase_gate(*phi, -1, 0) * &controlled_phase_gate(*phi, 0, 1);
                let gd = g.adjoint();
                let conj = |xi: GradedOperator| {
                    (&(&gd * &unitary.conjugate(&xi)) * &g).pruned(ZERO_TOL)
                };
                (conj(GradedOperator::x(0)), conj(GradedOperator::y(0)))
            }
            Automaton::Forking(u) => {
                let w = |op: GradedOperator, cell: i64| {
                    let uc = u.operator_at(cell);
                    let out = &(&uc * &op) * &uc.adjoint();
                    let out = if u.n == 1 { -out } else { out };
                    out.pruned(ZERO_TOL)
                };
                (w(GradedOperator::y(-1), -1), w(GradedOperator::x(1), 1))
            }
            Automaton::Composition(factors) => {
                let mut x = GradedOperator::x(0);
                let mut y = GradedOperator::y(0);
                for f in factors.iter().rev() {
                    let rule = f.local_rule();
                    x = rule.evolve(&x);
                    y = rule.evolve(&y);
                }
                (x, y)
            }
        };
        LocalRule::new(x, y)
    }

    /// Offsets that images may reach. Compositions use the sumset.
    pub fn neighbourhood(&self) -> BTreeSet<i64> {
        match self {
            Automaton::Custom(rule) => rule.neighbourhood.clone(),
            Automaton::Shift(d) => [*d].into(),
            Automaton::MajoranaShift {
                direction,
                inverted,
            } => {
                let s = direction.sign();
                if *inverted {
                    [-s, 0].into()
                } else {
                    [0, s].into()
                }
            }
            Automaton::Conjugation(_) => [0].into(),
            Automaton::ControlledPhase { .. } => [-1, 0, 1].into(),
            Automaton::Forking(_) => [-1, 1].into(),
            Automaton::Composition(factors) => {
                let mut acc: BTreeSet<i64> = [0].into();
                for f in factors {
                    let n = f.neighbourhood();
                    acc = acc.iter().flat_map(|a| n.iter().map(move |b| a + b)).collect();
                }
                acc
            }
        }
    }

    /// Cells `[lo, hi]` needed to evolve `op` without leaving the window.
    pub fn required_window(&self, op: &GradedOperator) -> Option<(i64, i64)> {
        let support = op.support();
        let (slo, shi) = (*support.iter().next()?, *support.iter().next_back()?);
        let n = self.neighbourhood();
        Some((slo + n.iter().next()?, shi + n.iter().next_back()?))
    }

    /// Heisenberg-picture image of `op`, with a locality check against `w`.
    pub fn apply(&self, op: &GradedOperator, w: &CellWindow) -> Result<GradedOperator, FcaError> {
        w.check(op)?;
        if let Some((lo, hi)) = self.required_window(op) {
            if lo < w.lo || hi > w.hi {
                return Err(FcaError::WindowTooSmall {
                    lo: w.lo,
                    hi: w.hi,
                    need_lo: lo.min(w.lo),
                    need_hi: hi.max(w.hi),
                });
            }
        }
        Ok(self.evolve(op))
    }

    /// Image of `op` with no window bookkeeping.
    pub fn evolve(&self, op: &GradedOperator) -> GradedOperator {
        match self {
            Automaton::Composition(factors) => {
                let mut out = op.clone();
                for f in factors.iter().rev() {
                    out = f.evolve(&out);
                }
                out
            }
            other => other.local_rule().evolve(op),
        }
    }

    /// Inverse automaton. Custom rules are not invertible here.
    pub fn invert(&self) -> Result<Automaton, FcaError> {
        Ok(match self {
            Automaton::Custom(_) => return Err(FcaError::CustomInverse),
            Automaton::Shift(d) => Automaton::Shift(-d),
            Automaton::MajoranaShift {
                direction,
                inverted,
            } => Automaton::MajoranaShift {
                direction: *direction,
                inverted: !inverted,
            },
            Automaton::Conjugation(u) => Automaton::Conjugation(u.inverse()),
            Automaton::ControlledPhase { phi, unitary } => Automaton::Composition(vec![
                Automaton::Conjugation(unitary.inverse()),
                Automaton::ControlledPhase {
                    phi: wrap_angle(-phi, TAU),
                    unitary: LocalUnitary::identity(),
                },
            ]),
            Automaton::Forking(u) => Automaton::Composition(vec![
                Automaton::Forking(LocalUnitary::identity()),
                Automaton::Conjugation(forking_outer(u).inverse()),
            ]),
            Automaton::Composition(factors) => Automaton::Composition(
                factors
                    .iter()
                    .rev()
                    .map(|f| f.invert())
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    pub fn validate(&self, tol: f64) -> ValidityReport {
        validate_local_rule(&self.local_rule(), tol)
    }
}

/// The single-cell conjugation `V` with `Forking(U) = 𝒱 ∘ Forking(identity)`.
///
/// `U O U† = V† O V` for `V = U(-θ, 0)` when `n = 0`; the extra sign for odd
/// `O` when `n = 1` is absorbed by `V = U(θ + π/2, 1)`.
pub fn forking_outer(u: &LocalUnitary) -> LocalUnitary {
    if u.n == 0 {
        LocalUnitary {
            theta: wrap_angle(-u.theta, TAU),
            n: 0,
        }
    } else {
        LocalUnitary {
            theta: wrap_angle(u.theta + FRAC_PI_2, TAU),
            n: 1,
        }
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Automaton::Custom(_) => f.write_str("custom"),
            Automaton::Shift(d) => write!(f, "shift({d})"),
            Automaton::MajoranaShift {
                direction,
                inverted,
            } => write!(
                f,
                "majorana-shift({direction}){}",
                if *inverted { "^-1" } else { "" }
            ),
            Automaton::Conjugation(u) => write!(f, "conjugation({}, {})", u.theta, u.n),
            Automaton::ControlledPhase { phi, unitary } => write!(
                f,
                "controlled-phase({}, {}, {})",
                phi, unitary.theta, unitary.n
            ),
            Automaton::Forking(u) => write!(f, "forking({}, {})", u.theta, u.n),
            Automaton::Composition(factors) if factors.is_empty() => f.write_str("identity"),
            Automaton::Composition(factors) => {
                let parts: Vec<String> = factors.iter().map(|a| a.to_string()).collect();
                write!(f, "{}", parts.join(" ∘ "))
            }
        }
    }
}
