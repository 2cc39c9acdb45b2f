use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    cone_check, solve_lambda3, subsolution_margins, HermitianForm, PathParams, PhaseParameter,
    RelativeSpectrum, C64,
};
use crate::error::{Error, Result};

/// Rejection budget per sample.
pub const MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleSpec {
    pub count: usize,
    pub seed: u64,
    pub theta_range: (f64, f64),
    /// Eigenvalues are drawn as `lambda_scale · √c |sec θ̂| · e^U`, `U ~ U(−1, 3)`.
    pub lambda_scale: f64,
    pub on_level_set: bool,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            count: 10_000,
            seed: 42,
            theta_range: (FRAC_PI_2 + 0.05, PI - 0.01),
            lambda_scale: 1.0,
            on_level_set: true,
        }
    }
}

impl SampleSpec {
    /// Phases on both sides of π.
    pub fn extended_range(mut self) -> Self {
        self.theta_range = (FRAC_PI_2 + 0.05, 3.0 * FRAC_PI_2 - 0.05);
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidSampleSpec("count must be positive".into()));
        }
        let (lo, hi) = self.theta_range;
        let m = PhaseParameter::DEFAULT_MARGIN;
        if !(lo < hi && lo >= FRAC_PI_2 + m && hi <= 3.0 * FRAC_PI_2 - m) {
            return Err(Error::InvalidSampleSpec(format!(
                "theta_range ({lo}, {hi}) is not an interval inside (pi/2, 3pi/2)"
            )));
        }
        if !(self.lambda_scale > 0.0 && self.lambda_scale.is_finite()) {
            return Err(Error::InvalidSampleSpec(
                "lambda_scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// The generator for sample `index`: one ChaCha stream per index.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePoint {
    pub lambda: RelativeSpectrum,
    pub params: PathParams,
}

fn sample_phase<R: Rng>(spec: &SampleSpec, rng: &mut R) -> Result<PhaseParameter> {
    let (lo, hi) = spec.theta_range;
    PhaseParameter::new(rng.random_range(lo..hi))
}

fn log_uniform<R: Rng>(rng: &mut R, base: f64) -> f64 {
    base * rng.random_range(-1.0f64..3.0).exp()
}

/// A point strictly inside the cone; on the level set `F̃ = 1` when
/// `spec.on_level_set`, with `λ₃` solved from `(λ₁, λ₂)`.
pub fn sample_cone_point<R: Rng>(spec: &SampleSpec, rng: &mut R) -> Result<ConePoint> {
    for _ in 0..MAX_ATTEMPTS {
        let phase = sample_phase(spec, rng)?;
        let t: f64 = rng.random();
        let alpha = if phase.tan() < 0.0 {
            rng.random_range(1.0 / 3.0..1.0)
        } else {
            rng.random_range(1.0..2.0)
        };
        let c = (1.0 - t) * alpha + t;
        if !(c > 1.0 / 3.0 && c.powi(3) > t * t * phase.sin2()) {
            continue;
        }
        let params = PathParams::new(c, t, phase);
        let base = spec.lambda_scale * c.sqrt() * phase.abs_sec();
        let (a, b) = (log_uniform(rng, base), log_uniform(rng, base));
        let (l1, l2) = (a.max(b), a.min(b));
        let l3 = if spec.on_level_set {
            match solve_lambda3(l1, l2, &params) {
                Ok(l3) if l3 <= l2 => l3,
                _ => continue,
            }
        } else {
            let l3 = log_uniform(rng, base);
            if l3 > l2 {
                continue;
            }
            l3
        };
        let lambda = RelativeSpectrum::new([l1, l2, l3]);
        if cone_check(&lambda, &params).is_admissible() {
            return Ok(ConePoint { lambda, params });
        }
    }
    Err(Error::SamplerStarved {
        attempts: MAX_ATTEMPTS,
    })
}

/// Relative spectrum of a constant `Ω` in an admissible class for a random
/// phase: the class identity holds and `Ω` is a subsolution.
pub fn sample_admissible_background<R: Rng>(
    spec: &SampleSpec,
    rng: &mut R,
) -> Result<(RelativeSpectrum, PhaseParameter)> {
    for _ in 0..MAX_ATTEMPTS {
        let phase = sample_phase(spec, rng)?;
        // the class identity is the level set at c = 1, t = 1
        let unit = PathParams::new(1.0, 1.0, phase);
        let base = spec.lambda_scale * phase.abs_sec();
        let (a, b) = (log_uniform(rng, base), log_uniform(rng, base));
        let Ok(l3) = solve_lambda3(a.max(b), a.min(b), &unit) else {
            continue;
        };
        if !(l3 > 0.0) {
            continue;
        }
        let lambda = RelativeSpectrum::new([a, b, l3]);
        if !subsolution_margins(&lambda, &phase).is_admissible() {
            continue;
        }
        // the curvature phase must land on the same branch
        let theta: f64 = lambda.shifted(phase.tan()).lagrangian_phase();
        if (theta - phase.theta_hat()).abs() > 1e-8 {
            continue;
        }
        return Ok((lambda, phase));
    }
    Err(Error::SamplerStarved {
        attempts: MAX_ATTEMPTS,
    })
}

/// Random Hermitian direction with entries of size `√(λ_μ λ_ν)`.
pub fn sample_hermitian<R: Rng>(lambda: &RelativeSpectrum, rng: &mut R) -> HermitianForm {
    let l = lambda.values();
    let mut m = nalgebra::Matrix3::<C64>::zeros();
    for i in 0..3 {
        let d: f64 = rng.sample(StandardNormal);
        m[(i, i)] = C64::new(d * l[i], 0.0);
        for j in i + 1..3 {
            let s = (l[i] * l[j]).sqrt();
            let (re, im): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            m[(i, j)] = C64::new(re, im) * s;
            m[(j, i)] = C64::new(re, -im) * s;
        }
    }
    HermitianForm::hermitian_part(m)
}
