use serde::{Deserialize, Serialize};

use super::{HermitianForm, Metric, PhaseParameter, RelativeSpectrum};
use crate::error::{Error, Result};

/// Margins of the three-fold subsolution condition
/// `Ω > 0, 3Ω² − 3 sec²θ̂ ω² > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsolutionMargins {
    pub min_lambda: f64,
    /// `min_{i≠j} λ_iλ_j − sec²θ̂`
    pub min_pair_product_margin: f64,
}

impl SubsolutionMargins {
    pub fn is_admissible(&self) -> bool {
        self.min_lambda > 0.0 && self.min_pair_product_margin > 0.0
    }
}

/// Pointwise subsolution margins from the relative spectrum of Ω. In a frame
/// diagonalising (ω, Ω) the (2,2)-form `Ω² − sec²θ̂ ω²` has coefficients
/// `λ_iλ_j − sec²θ̂`, so positivity is a statement about pair products.
pub fn subsolution_margins(
    lambda: &RelativeSpectrum,
    phase: &PhaseParameter,
) -> SubsolutionMargins {
    let [_, l2, l3] = lambda.values();
    SubsolutionMargins {
        min_lambda: l3,
        min_pair_product_margin: l2 * l3 - phase.sec2(),
    }
}

pub fn subsolution_check_n3(
    omega: &HermitianForm,
    big_omega: &HermitianForm,
    phase: &PhaseParameter,
) -> Result<(bool, SubsolutionMargins)> {
    let lambda = Metric::new(*omega)?.relative_spectrum(big_omega);
    let m = subsolution_margins(&lambda, phase);
    Ok((m.is_admissible(), m))
}

/// Which indices enter `Σ_k b_k k Ω^{k−1} ω^{n−k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SummationRange {
    /// `k = 0..n−1`; reproduces the three-fold condition `3Ω² − 3sec²θ̂ ω² > 0`.
    BelowTop,
    /// `k = 0..n`, including a top coefficient `b_n`.
    WithTop,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn sign(exponent: i64) -> f64 {
    if exponent.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficients `b_k` of the general subsolution condition
/// `Ω > 0, nΩ^{n−1} − Σ_k b_k k Ω^{k−1} ω^{n−k} > 0`.
pub fn subsolution_coefficients(
    n: u32,
    phase: &PhaseParameter,
    range: SummationRange,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!("subsolution needs n >= 2, got {n}")));
    }
    let theta = phase.theta_hat();
    let sec = 1.0 / theta.cos();
    let csc = 1.0 / theta.sin();
    let top = match range {
        SummationRange::BelowTop => n - 1,
        SummationRange::WithTop => n,
    };
    let ni = i64::from(n);
    let b = (0..=top)
        .map(|k| {
            let ki = i64::from(k);
            if n.is_multiple_of(2) {
                csc.powi((n - k) as i32)
                    * sign(ni - ki + 1)
                    * binomial(n, k)
                    * (((ni - ki - 1) as f64) * theta).sin()
            } else if k % 2 == 0 {
                let j = ki / 2;
                sec.powi((ni + 1 - 2 * j) as i32)
                    * sign((ni + 2 * j + 1) / 2)
                    * binomial(n, k)
                    * (((ni - 2 * j - 1) as f64) * theta).sin()
            } else {
                let j = (ki - 1) / 2;
                sec.powi((ni - 2 * j) as i32)
                    * sign((ni + 2 * j + 1) / 2)
                    * binomial(n, k)
                    * (((ni - 2 * j - 2) as f64) * theta).cos()
            }
        })
        .collect();
    Ok(b)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn phase() -> PhaseParameter {
        PhaseParameter::new(0.75 * PI).unwrap()
    }

    #[test]
    fn n3_examples() {
        let id = HermitianForm::identity();
        let (ok, m) =
            subsolution_check_n3(&id, &HermitianForm::scaled_identity(2.0), &phase()).unwrap();
        assert!(ok);
        assert!((m.min_lambda - 2.0).abs() < 1e-15);
        assert!((m.min_pair_product_margin - 2.0).abs() < 1e-12);

        let (ok, m) =
            subsolution_check_n3(&id, &HermitianForm::scaled_identity(1.2), &phase()).unwrap();
        assert!(!ok);
        assert!((m.min_pair_product_margin + 0.56).abs() < 1e-12);

        let (ok, _) =
            subsolution_check_n3(&id, &HermitianForm::diag([3.0, 2.0, 0.5]), &phase()).unwrap();
        assert!(!ok);
    }

    #[test]
    fn n3_coefficients() {
        let b = subsolution_coefficients(3, &phase(), SummationRange::BelowTop).unwrap();
        assert_eq!(b.len(), 3);
        assert!((b[0] + 4.0).abs() < 1e-12, "{b:?}");
        assert!((b[1] - 6.0).abs() < 1e-12);
        assert!(b[2].abs() < 1e-12);

        // b₁ = 3 sec²θ̂ for every θ̂, and b₂ vanishes.
        for theta in [1.7, 2.2, 2.9, 3.5, 4.5] {
            let ph = PhaseParameter::new(theta).unwrap();
            let b = subsolution_coefficients(3, &ph, SummationRange::WithTop).unwrap();
            assert!((b[1] - 3.0 * ph.sec2()).abs() < 1e-9 * ph.sec2());
            assert!(b[2].abs() < 1e-12 * ph.sec2());
            assert_eq!(b.len(), 4);
        }
    }

    #[test]
    fn small_n_rejected() {
        assert!(subsolution_coefficients(1, &phase(), SummationRange::BelowTop).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(5, 5), 1.0);
    }
}
