use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fca::LocalRule;
use crate::graded::{Cell, GradedOperator};

/// One term `(coeff_re + i coeff_im) ξ_{m1} ξ_{m2} ...`; mode `2c` is `X_c`
/// and `2c + 1` is `Y_c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff_re: f64,
    #[serde(default)]
    pub coeff_im: f64,
    pub modes: Vec<i64>,
}

/// On-disk form of a local rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub neighbourhood: Vec<Cell>,
    pub image_x: Vec<Term>,
    pub image_y: Vec<Term>,
}

pub fn terms_of(op: &GradedOperator) -> Vec<Term> {
    op.terms()
        .map(|(s, c)| Term {
            coeff_re: c.re,
            coeff_im: c.im,
            modes: s.modes().to_vec(),
        })
        .collect()
}

pub fn operator_of(terms: &[Term]) -> GradedOperator {
    let mut op = GradedOperator::zero();
    for t in terms {
        op = op + GradedOperator::from_product(&t.modes, Complex64::new(t.coeff_re, t.coeff_im));
    }
    op
}

impl RuleFile {
    pub fn from_rule(rule: &LocalRule) -> Self {
        RuleFile {
            neighbourhood: rule.neighbourhood.iter().copied().collect(),
            image_x: terms_of(&rule.image_x),
            image_y: terms_of(&rule.image_y),
        }
    }

    pub fn to_rule(&self) -> Result<LocalRule, String> {
        let neighbourhood: BTreeSet<Cell> = self.neighbourhood.iter().copied().collect();
        for t in self.image_x.iter().chain(&self.image_y) {
            if !(t.coeff_re.is_finite() && t.coeff_im.is_finite()) {
                return Err("non-finite coefficient".into());
            }
        }
        LocalRule::with_neighbourhood(neighbourhood, operator_of(&self.image_x), operator_of(&self.image_y))
            .map_err(|e| e.to_string())
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed rule file: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule files serialize")
    }
}

