use serde::{Deserialize, Serialize};

use super::{PathParams, RelativeSpectrum};

/// Distances to the boundary of the admissible cone at `(c, t)`.
///
/// A point is admissible iff all three fields are strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeMargins {
    pub min_lambda: f64,
    /// `min_{i≠j} λ_iλ_j − c sec²θ̂`
    pub min_pair_product_margin: f64,
    /// `min_{i≠j} c(λ_i+λ_j) + 2t tan θ̂`
    pub min_pair_sum_margin: f64,
}

impl ConeMargins {
    pub fn is_admissible(&self) -> bool {
        self.at_least(0.0)
    }

    /// All margins strictly greater than `floor`.
    pub fn at_least(&self, floor: f64) -> bool {
        self.min_lambda > floor
            && self.min_pair_product_margin > floor
            && self.min_pair_sum_margin > floor
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &ConeMargins) -> ConeMargins {
        ConeMargins {
            min_lambda: self.min_lambda.min(other.min_lambda),
            min_pair_product_margin: self
                .min_pair_product_margin
                .min(other.min_pair_product_margin),
            min_pair_sum_margin: self.min_pair_sum_margin.min(other.min_pair_sum_margin),
        }
    }

    pub fn infinite() -> ConeMargins {
        ConeMargins {
            min_lambda: f64::INFINITY,
            min_pair_product_margin: f64::INFINITY,
            min_pair_sum_margin: f64::INFINITY,
        }
    }
}

pub fn cone_check(lambda: &RelativeSpectrum, p: &PathParams) -> ConeMargins {
    // descending order: smallest product is λ₂λ₃, smallest sum is λ₂+λ₃
    let [_, l2, l3] = lambda.values();
    ConeMargins {
        min_lambda: l3,
        min_pair_product_margin: l2 * l3 - p.c_sec2(),
        min_pair_sum_margin: p.c * (l2 + l3) + 2.0 * p.t * p.phase.tan(),
    }
}

/// `2c^{3/2}|sec θ̂| + 2t tan θ̂`: lower bound for the pair-sum expression
/// whenever the pair-product condition holds.
pub fn pair_sum_lower_bound(p: &PathParams) -> f64 {
    2.0 * p.c.powf(1.5) * p.phase.abs_sec() + 2.0 * p.t * p.phase.tan()
}
