use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::FcaError;
use crate::graded::{Cell, GradedOperator};

/// Single-cell unitary `U(θ, n) = e^{iθZ} X^n`.
///
/// Only `θ mod π` affects the induced conjugation, since `U(θ + π, n) = -U(θ, n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalUnitary {
    pub theta: f64,
    pub n: u8,
}

/// Reduces an angle to `[0, period)`.
pub fn wrap_angle(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if (period - r).abs() < 1e-13 {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on a circle of the given period.
pub fn angle_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = wrap_angle(a - b, period);
    d.min(period - d)
}

impl LocalUnitary {
    pub fn new(theta: f64, n: u8) -> Result<Self, FcaError> {
        if n > 1 {
            return Err(FcaError::Parameter(format!("n must be 0 or 1, got {n}")));
        }
        if !theta.is_finite() {
            return Err(FcaError::Parameter(format!("theta must be finite, got {theta}")));
        }
        Ok(LocalUnitary {
            theta: wrap_angle(theta, TAU),
            n,
        })
    }

    pub fn identity() -> Self {
        LocalUnitary { theta: 0.0, n: 0 }
    }

    /// `θ` reduced to `[0, π)`, the part visible to conjugation.
    pub fn canonical_theta(&self) -> f64 {
        wrap_angle(self.theta, PI)
    }

    /// Same conjugation action, within `tol` on the angle.
    pub fn same_action(&self, other: &LocalUnitary, tol: f64) -> bool {
        self.n == other.n && angle_distance(self.theta, other.theta, PI) <= tol
    }

    /// The unitary as an operator on `cell`.
    pub fn operator_at(&self, cell: Cell) -> GradedOperator {
        let rot = GradedOperator::identity().scale_real(self.theta.cos())
            + GradedOperator::z(cell).scale(Complex64::new(0.0, self.theta.sin()));
        if self.n == 1 {
            &rot * &GradedOperator::x(cell)
        } else {
            rot
        }
    }

    /// Matrix in the occupation basis.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let p = Complex64::from_polar(1.0, self.theta);
        let m = Complex64::from_polar(1.0, -self.theta);
        let z = Complex64::new(0.0, 0.0);
        if self.n == 0 {
            [[p, z], [z, m]]
        } else {
            [[z, p], [m, z]]
        }
    }

    /// `U† O U` for an operator supported on cell 0.
    pub fn conjugate(&self, op: &GradedOperator) -> GradedOperator {
        let u = self.operator_at(0);
        (&(&u.adjoint() * op) * &u).pruned(crate::graded::ZERO_TOL)
    }

    /// Unitary whose conjugation undoes this one.
    pub fn inverse(&self) -> LocalUnitary {
        if self.n == 0 {
            LocalUnitary {
                theta: wrap_angle(-self.theta, TAU),
                n: 0,
            }
        } else {
            *self
        }
    }

    /// `U(θ,n)` followed by `U(θ',n')` as a single conjugation: the unitary
    /// `V` with `V† O V = U'†(U† O U)U'`, i.e. `V = U U'` up to phase.
    pub fn then(&self, next: &LocalUnitary) -> LocalUnitary {
        // e^{iaZ} X^n e^{ibZ} X^m = e^{i(a + (-1)^n b)Z} X^{n+m}
        let sign = if self.n == 1 { -1.0 } else { 1.0 };
        let theta = self.theta + sign * next.theta;
        LocalUnitary {
            theta: wrap_angle(theta, TAU),
            n: (self.n + next.n) % 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{jw_matrix, CellWindow};

    #[test]
    fn operator_matches_matrix() {
        let w = CellWindow::new(0, 0).unwrap();
        for &(theta, n) in &[(0.0, 0u8), (0.4, 0), (1.3, 1), (PI / 3.0, 1)] {
            let u = LocalUnitary::new(theta, n).unwrap();
            let m = jw_matrix(&u.operator_at(0), &w).unwrap();
            let e = u.matrix();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((m[(i, j)] - e[i][j]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_conjugation() {
        for &(theta, n) in &[(0.4, 0u8), (1.3, 1)] {
            let u = LocalUnitary::new(theta, n).unwrap();
            for op in [GradedOperator::x(0), GradedOperator::y(0)] {
                let back = u.inverse().conjugate(&u.conjugate(&op));
                assert!(back.approx_eq(&op, 1e-14));
            }
        }
    }

    #[test]
    fn then_composes() {
        let a = LocalUnitary::new(0.3, 1).unwrap();
        let b = LocalUnitary::new(1.1, 1).unwrap();
        let ab = a.then(&b);
        for op in [GradedOperator::x(0), GradedOperator::y(0)] {
            let two = b.conjugate(&a.conjugate(&op));
            assert!(ab.conjugate(&op).approx_eq(&two, 1e-14));
        }
    }

    #[test]
    fn theta_only_matters_mod_pi() {
        let a = LocalUnitary::new(0.3, 0).unwrap();
        let b = LocalUnitary::new(0.3 + PI, 0).unwrap();
        let x = GradedOperator::x(0);
        assert!(a.conjugate(&x).approx_eq(&b.conjugate(&x), 1e-14));
        assert!(a.same_action(&b, 1e-12));
    }
}
