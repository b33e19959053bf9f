use std::fmt;

use super::rule::LocalRule;
use crate::graded::{GradedOperator, Parity};

/// Default coefficient tolerance for validity checks.
pub const VALIDITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X => f.write_str("X"),
            Generator::Y => f.write_str("Y"),
        }
    }
}

/// One failed condition together with its witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Image is not parity-homogeneous or is even.
    NotOdd { generator: Generator },
    NotSelfAdjoint { generator: Generator, residual: f64 },
    /// `T(ξ)^2 != I`.
    SquareNotIdentity { generator: Generator, residual: f64 },
    /// `{T(X), T(Y)} != 0`.
    ImagesDoNotAnticommute { residual: f64 },
    /// `⟦T(a)⟧{τ_x T(b) τ_{-x}} != 0`.
    Overlap {
        shift: i64,
        left: Generator,
        right: Generator,
        residual: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotOdd { generator } => {
                write!(f, "parity: image of {generator}(0) is not odd")
            }
            Violation::NotSelfAdjoint {
                generator,
                residual,
            } => write!(
                f,
                "adjoint: image of {generator}(0) is not self-adjoint (residual {residual:.3e})"
            ),
            Violation::SquareNotIdentity {
                generator,
                residual,
            } => write!(
                f,
                "car: image of {generator}(0) does not square to I (residual {residual:.3e})"
            ),
            Violation::ImagesDoNotAnticommute { residual } => write!(
                f,
                "car: images of X(0) and Y(0) do not anticommute (residual {residual:.3e})"
            ),
            Violation::Overlap {
                shift,
                left,
                right,
                residual,
            } => write!(
                f,
                "overlap: graded commutator of T({left}(0)) and T({right}({shift})) is nonzero (residual {residual:.3e})"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn residual(op: &GradedOperator) -> f64 {
    op.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)
}

/// Checks parity, self-adjointness, the CAR relations and graded commutation
/// of overlapping translates.
pub fn validate_local_rule(rule: &LocalRule, tol: f64) -> ValidityReport {
    let mut violations = Vec::new();
    let images = [(Generator::X, &rule.image_x), (Generator::Y, &rule.image_y)];
    let identity = GradedOperator::identity();

    let mut all_odd = true;
    for (g, img) in images {
        if img.parity() != Some(Parity::Odd) || img.is_zero() {
            violations.push(Violation::NotOdd { generator: g });
            all_odd = false;
        }
    }
    for (g, img) in images {
        let r = residual(&(img - &img.adjoint()));
        if r > tol {
            violations.push(Violation::NotSelfAdjoint {
                generator: g,
                residual: r,
            });
        }
        let r = residual(&(img * img - &identity));
        if r > tol {
            violations.push(Violation::SquareNotIdentity {
                generator: g,
                residual: r,
            });
        }
    }
    let anti = &(&rule.image_x * &rule.image_y) + &(&rule.image_y * &rule.image_x);
    let r = residual(&anti);
    if r > tol {
        violations.push(Violation::ImagesDoNotAnticommute { residual: r });
    }

    if all_odd {
        let (lo, hi) = rule.reach();
        for shift in (lo - hi)..=(hi - lo) {
            if shift == 0 {
                continue;
            }
            let overlaps = rule
                .neighbourhood
                .iter()
                .any(|c| rule.neighbourhood.contains(&(c - shift)));
            if !overlaps {
                continue;
            }
            for (lg, limg) in images {
                for (rg, rimg) in images {
                    let moved = rimg.translate(shift);
                    let gc = limg
                        .graded_commutator(&moved)
                        .expect("homogeneous images");
                    let r = residual(&gc);
                    if r > tol {
                        violations.push(Violation::Overlap {
                            shift,
                            left: lg,
                            right: rg,
                            residual: r,
                        });
                    }
                }
            }
        }
    }
    ValidityReport { violations }
}
