use std::collections::BTreeSet;

use crate::error::FcaError;
use crate::graded::{cell_of, Cell, GradedOperator, ZERO_TOL};

/// Images of the two cell-0 generators `X_0`, `Y_0`, together with the
/// neighbourhood that contains their support.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalRule {
    pub neighbourhood: BTreeSet<Cell>,
    pub image_x: GradedOperator,
    pub image_y: GradedOperator,
}

impl LocalRule {
    /// Neighbourhood taken as the joint support of the images.
    pub fn new(image_x: GradedOperator, image_y: GradedOperator) -> Self {
        let mut neighbourhood = image_x.support();
        neighbourhood.extend(image_y.support());
        if neighbourhood.is_empty() {
            neighbourhood.insert(0);
        }
        LocalRule {
            neighbourhood,
            image_x,
            image_y,
        }
    }

    /// Explicit neighbourhood; the images must be supported inside it.
    pub fn with_neighbourhood(
        neighbourhood: BTreeSet<Cell>,
        image_x: GradedOperator,
        image_y: GradedOperator,
    ) -> Result<Self, FcaError> {
        if neighbourhood.is_empty() {
            return Err(FcaError::InvalidRule("empty neighbourhood".into()));
        }
        for (name, img) in [("X", &image_x), ("Y", &image_y)] {
            if let Some(c) = img.support().into_iter().find(|c| !neighbourhood.contains(c)) {
                return Err(FcaError::InvalidRule(format!(
                    "image of {name}(0) touches cell {c} outside the neighbourhood"
                )));
            }
        }
        Ok(LocalRule {
            neighbourhood,
            image_x,
            image_y,
        })
    }

    pub fn identity() -> Self {
        LocalRule::new(GradedOperator::x(0), GradedOperator::y(0))
    }

    /// Image of `ξ_m` for any mode, by translating the cell-0 images.
    pub fn image_of_mode(&self, mode: i64) -> GradedOperator {
        let img = if mode.rem_euclid(2) == 0 {
            &self.image_x
        } else {
            &self.image_y
        };
        img.translate(cell_of(mode))
    }

    /// Substitutes generator images into every string, in mode order.
    ///
    /// No window bookkeeping; callers check locality.
    pub fn evolve(&self, op: &GradedOperator) -> GradedOperator {
        let mut out = GradedOperator::zero();
        for (s, c) in op.terms() {
            let mut acc = GradedOperator::scalar(*c);
            for &m in s.modes() {
                acc = &acc * &self.image_of_mode(m);
            }
            out += &acc;
        }
        out.pruned(ZERO_TOL)
    }

    /// Smallest and largest offsets of the neighbourhood.
    pub fn reach(&self) -> (Cell, Cell) {
        (
            *self.neighbourhood.iter().next().expect("non-empty"),
            *self.neighbourhood.iter().next_back().expect("non-empty"),
        )
    }
}
