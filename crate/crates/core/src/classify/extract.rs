//! Parameter recovery for the unit-index families.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::ClassifyError;
use crate::fca::{angle_distance, wrap_angle, Automaton, LocalRule, LocalUnitary};
use crate::graded::{Cell, GradedOperator, MajoranaString};

/// Tolerance for phase and reconstruction checks during extraction.
pub const EXTRACT_TOL: f64 = 1e-9;

/// Real 2x2 matrix `[[a, c], [b, d]]` whose columns are the `(X, Y)`
/// coordinates of the images of `X` and `Y` on one cell.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Orthogonal2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Orthogonal2 {
    fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    fn mul(&self, o: &Orthogonal2) -> Orthogonal2 {
        Orthogonal2 {
            a: self.a * o.a + self.c * o.b,
            b: self.b * o.a + self.d * o.b,
            c: self.a * o.c + self.c * o.d,
            d: self.b * o.c + self.d * o.d,
        }
    }

    fn transpose(&self) -> Orthogonal2 {
        Orthogonal2 {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }

    /// Rotation angle of a proper rotation.
    fn angle(&self) -> f64 {
        self.b.atan2(self.a)
    }
}

/// Real coordinates of an odd operator on `cell` along `(X_cell, Y_cell)`.
fn odd_coordinates(op: &GradedOperator, cell: Cell) -> Result<(f64, f64), ClassifyError> {
    let x = MajoranaString::single(2 * cell);
    let y = MajoranaString::single(2 * cell + 1);
    let (cx, cy) = (op.coeff(&x), op.coeff(&y));
    let rest = op
        .terms()
        .filter(|(s, _)| **s != x && **s != y)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    if rest > EXTRACT_TOL || cx.im.abs() > EXTRACT_TOL || cy.im.abs() > EXTRACT_TOL {
        return Err(ClassifyError::Unclassifiable(format!(
            "expected a real combination of X({cell}) and Y({cell}), got {op}"
        )));
    }
    Ok((cx.re, cy.re))
}

pub(crate) fn orthogonal_from_images(
    tx: &GradedOperator,
    ty: &GradedOperator,
    cell: Cell,
) -> Result<Orthogonal2, ClassifyError> {
    let (a, b) = odd_coordinates(tx, cell)?;
    let (c, d) = odd_coordinates(ty, cell)?;
    let m = Orthogonal2 { a, b, c, d };
    let g = m.transpose().mul(&m);
    let dev = (g.a - 1.0).abs() + (g.d - 1.0).abs() + g.b.abs() + g.c.abs();
    if dev > EXTRACT_TOL {
        return Err(ClassifyError::Unclassifiable(format!(
            "single-cell map is not orthogonal (deviation {dev:.3e})"
        )));
    }
    Ok(m)
}

/// The `U(θ, n)` whose conjugation `ξ ↦ U† ξ U` has matrix `m`.
///
/// `n = 0` rotates `X ↦ cos 2θ X + sin 2θ Y`; `n = 1` reflects
/// `X ↦ cos 2θ X - sin 2θ Y`.
pub(crate) fn unitary_from_orthogonal(m: &Orthogonal2) -> LocalUnitary {
    let (n, two_theta) = if m.det() > 0.0 {
        (0, m.b.atan2(m.a))
    } else {
        (1, (-m.b).atan2(m.a))
    };
    LocalUnitary {
        theta: wrap_angle(two_theta / 2.0, PI),
        n,
    }
}

/// Matches single-cell images against `U(θ, n)` and verifies the fit.
pub(crate) fn unitary_from_images(
    tx: &GradedOperator,
    ty: &GradedOperator,
) -> Result<LocalUnitary, ClassifyError> {
    let u = unitary_from_orthogonal(&orthogonal_from_images(tx, ty, 0)?);
    let ok = u.conjugate(&GradedOperator::x(0)).approx_eq(tx, EXTRACT_TOL)
        && u.conjugate(&GradedOperator::y(0)).approx_eq(ty, EXTRACT_TOL);
    if !ok {
        return Err(ClassifyError::Unclassifiable(
            "single-cell images do not match any U(θ, n)".into(),
        ));
    }
    Ok(u)
}

fn projector(cell: Cell, occupied: usize) -> GradedOperator {
    let z = GradedOperator::z(cell);
    let id = GradedOperator::identity();
    if occupied == 0 {
        (&id + &z).scale_real(0.5)
    } else {
        (&id - &z).scale_real(0.5)
    }
}

/// Blocks `A_{ij}(ξ)` of `T_0(ξ) = Σ_{ij} P_i^{(-1)} A_{ij}(ξ) P_j^{(1)}`,
/// indexed `[i][j]`, each an operator on cell 0.
pub(crate) fn diagonal_blocks(image: &GradedOperator) -> [[GradedOperator; 2]; 2] {
    let block = |i: usize, j: usize| {
        let m = &(&projector(-1, i) * &projector(1, j)) * image;
        // the pure cell-0 strings of P_i P_j A carry A's coefficients times 1/4
        let only_center = GradedOperator::from_terms(
            m.terms()
                .filter(|(s, _)| s.cells().iter().all(|c| *c == 0))
                .map(|(s, c)| (s.clone(), *c)),
        );
        only_center.scale_real(4.0)
    };
    [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]]
}

/// Recovers `(φ, U)` of a controlled-phase rule and checks the phase relations
/// `ψ_01 = ψ_10` and `ψ_11 = 2 ψ_10`.
pub(crate) fn extract_controlled_phase(rule: &LocalRule) -> Result<(f64, LocalUnitary), ClassifyError> {
    let bx = diagonal_blocks(&rule.image_x);
    let by = diagonal_blocks(&rule.image_y);
    let mut r = [[None; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = Some(orthogonal_from_images(&bx[i][j], &by[i][j], 0)?);
        }
    }
    let r = r.map(|row| row.map(|m| m.expect("filled")));
    let r00_inv = r[0][0].transpose();
    // V_ij = R_ij R_00^{-1} is the rotation by -φ(i+j)
    let mut psi = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let v = r[i][j].mul(&r00_inv);
            if v.det() < 0.0 {
                return Err(ClassifyError::PhaseInconsistent(format!(
                    "block ({i},{j}) differs from block (0,0) by a reflection"
                )));
            }
            psi[i][j] = wrap_angle(-v.angle(), TAU);
        }
    }
    let phi = psi[1][0];
    if angle_distance(psi[0][1], phi, TAU) > EXTRACT_TOL {
        return Err(ClassifyError::PhaseInconsistent(format!(
            "ψ_01 = {} but ψ_10 = {}",
            psi[0][1], phi
        )));
    }
    if angle_distance(psi[1][1], 2.0 * phi, TAU) > EXTRACT_TOL {
        return Err(ClassifyError::PhaseInconsistent(format!(
            "ψ_11 = {} but 2 ψ_10 = {}",
            psi[1][1],
            2.0 * phi
        )));
    }
    let unitary = unitary_from_orthogonal(&r[0][0]);
    Ok((phi, unitary))
}

/// Residual of the block commutation constraint
/// `Σ_{ij} ⟦A_{ki}(ξ)_0 P_i^{(1)}, P_j^{(0)} A_{jl}(η)_1⟧ = 0`, maximized over
/// `k, l` and `ξ, η ∈ {X, Y}`.
pub fn block_commutation_residual(rule: &LocalRule) -> f64 {
    let blocks = [diagonal_blocks(&rule.image_x), diagonal_blocks(&rule.image_y)];
    let mut worst: f64 = 0.0;
    for xi in &blocks {
        for eta in &blocks {
            for k in 0..2 {
                for l in 0..2 {
                    let mut sum = GradedOperator::zero();
                    for i in 0..2 {
                        for j in 0..2 {
                            let left = &xi[k][i] * &projector(1, i);
                            let right = &projector(0, j) * &eta[j][l].translate(1);
                            let gc = left
                                .graded_commutator(&right)
                                .unwrap_or_else(|_| left.commutator(&right));
                            sum += &gc;
                        }
                    }
                    let r = sum.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
                    worst = worst.max(r);
                }
            }
        }
    }
    worst
}

fn part_on(op: &GradedOperator, cell: Cell) -> GradedOperator {
    // strings entirely inside `cell`; forking images have no mixed strings
    GradedOperator::from_terms(
        op.terms()
            .filter(|(s, _)| !s.is_identity() && s.cells().iter().all(|c| *c == cell))
            .map(|(s, c)| (s.clone(), *c)),
    )
}

fn normalized(op: &GradedOperator) -> Option<GradedOperator> {
    let n = op.hs_norm();
    (n > EXTRACT_TOL).then(|| op.scale_real(1.0 / n))
}

/// Recovers `(U, pre)` with `T = Forking(U) ∘ Conjugation(pre)`.
///
/// Canonical choice: the left generator `L` is the normalized cell -1 part of
/// `T(X_0)` (of `T(Y_0)` if that vanishes), and the right generator `R` the
/// normalized cell 1 part of `T(Y_0)` (of `T(X_0)` if that vanishes).
pub(crate) fn extract_forking(rule: &LocalRule) -> Result<(LocalUnitary, LocalUnitary), ClassifyError> {
    let (tx, ty) = (&rule.image_x, &rule.image_y);
    let missing = || ClassifyError::Unclassifiable("forking images lack an edge component".into());
    let l = normalized(&part_on(tx, -1))
        .or_else(|| normalized(&part_on(ty, -1)))
        .ok_or_else(missing)?;
    let r = normalized(&part_on(ty, 1))
        .or_else(|| normalized(&part_on(tx, 1)))
        .ok_or_else(missing)?;

    // W maps X ↦ R, Y ↦ L (moved to cell 0); W = 𝒱 as a conjugation.
    let v = unitary_from_images(&r.translate(-1), &l.translate(1))?;
    let unitary = if v.n == 0 {
        LocalUnitary {
            theta: wrap_angle(-v.theta, TAU),
            n: 0,
        }
    } else {
        LocalUnitary {
            theta: wrap_angle(v.theta - FRAC_PI_2, TAU),
            n: 1,
        }
    };

    // T(ξ) = a L + b R: the pre-conjugation has columns (a, b) in the (X, Y) basis
    let coords = |img: &GradedOperator| -> (f64, f64) {
        (l.hs_inner(img).re, r.hs_inner(img).re)
    };
    let (a, b) = coords(tx);
    let (c, d) = coords(ty);
    let pre = unitary_from_orthogonal(&Orthogonal2 { a, b, c, d });
    let canonical = |u: LocalUnitary| LocalUnitary {
        theta: wrap_angle(u.theta, PI),
        n: u.n,
    };
    Ok((canonical(unitary), canonical(pre)))
}

/// Compares the images of two rules to within [`EXTRACT_TOL`].
pub(crate) fn same_rule(a: &LocalRule, b: &LocalRule) -> bool {
    a.image_x.approx_eq(&b.image_x, EXTRACT_TOL) && a.image_y.approx_eq(&b.image_y, EXTRACT_TOL)
}

pub(crate) fn reconstruct_forking(unitary: LocalUnitary, pre: LocalUnitary) -> Automaton {
    if pre.n == 0 && pre.theta == 0.0 {
        Automaton::Forking(unitary)
    } else {
        Automaton::Composition(vec![Automaton::Forking(unitary), Automaton::Conjugation(pre)])
    }
}
