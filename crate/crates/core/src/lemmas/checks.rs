use std::collections::BTreeMap;

use crate::algebra::{
    constraint_project, convexity_quantities, convexity_rhs, euler_bound_slack, gradient_f,
    hessian_quadratic_form, pair_sum_lower_bound, ConvexityQuantities, PathParams, PhaseParameter,
    RelativeSpectrum,
};
use crate::error::Result;
use crate::exec;
use crate::path::ClassIntegrals;

use super::fd;
use super::report::{LemmaId, LemmaReport, WorstSample};
use super::sampler::{
    sample_admissible_background, sample_cone_point, sample_hermitian, sample_rng, ConePoint,
    SampleSpec,
};

pub const CT_TGRID_POINTS: usize = 101;
const AUDIT_EVERY: usize = 100;
const STAGES: i32 = 40;

const CT_TOL: f64 = 1e-12;
const CONVEXITY_TOL: f64 = 1e-9;
const HESSIAN_FD_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-10;
const G_TOL: f64 = 1e-9;
const EULER_TOL: f64 = 1e-10;
const GRADIENT_FD_TOL: f64 = 1e-6;
const EXCLUSION_TOL: f64 = 1e-12;

/// Running minimum with lowest-index tie-breaking; NaN counts as −∞.
struct Worst {
    slack: f64,
    sample: Option<WorstSample>,
}

impl Worst {
    fn new() -> Self {
        Self {
            slack: f64::INFINITY,
            sample: None,
        }
    }

    fn offer(&mut self, slack: f64, sample: impl FnOnce() -> WorstSample) {
        let slack = if slack.is_nan() {
            f64::NEG_INFINITY
        } else {
            slack
        };
        if self.sample.is_none() || slack < self.slack {
            self.slack = slack;
            self.sample = Some(sample());
        }
    }
}

fn report(
    lemma: LemmaId,
    spec: &SampleSpec,
    count: usize,
    worst: Worst,
    tolerance: f64,
    extra_pass: bool,
    diagnostics: BTreeMap<String, f64>,
) -> LemmaReport {
    LemmaReport {
        lemma,
        count,
        requested: spec.count,
        seed: spec.seed,
        pass: count == spec.count && worst.slack >= -tolerance && extra_pass,
        worst_slack: worst.slack,
        tolerance,
        worst_sample: worst.sample,
        diagnostics,
    }
}

fn level_set(spec: &SampleSpec) -> SampleSpec {
    SampleSpec {
        on_level_set: true,
        ..spec.clone()
    }
}

fn cone_points(spec: &SampleSpec) -> Result<Vec<ConePoint>> {
    exec::map_indexed(spec.count, |i| {
        sample_cone_point(spec, &mut sample_rng(spec.seed, i))
    })
    .into_iter()
    .collect()
}

/// Raw slacks of `c > 1/3`, `c ≤ 1` (only asserted for `tan θ̂ < 0`) and
/// `c³ > t² sin²θ̂`.
pub fn ct_slacks(c: f64, t: f64, phase: &PhaseParameter) -> [f64; 3] {
    let upper = if phase.tan() < 0.0 {
        1.0 - c
    } else {
        f64::INFINITY
    };
    [c - 1.0 / 3.0, upper, c.powi(3) - t * t * phase.sin2()]
}

/// Bounds on the path constant over random admissible constant backgrounds
/// and a uniform grid of t values.
pub fn check_ct_lemma(spec: &SampleSpec) -> Result<LemmaReport> {
    spec.validate()?;
    let rows = exec::map_indexed(spec.count, |i| -> Result<_> {
        let (lambda, phase) = sample_admissible_background(spec, &mut sample_rng(spec.seed, i))?;
        let integrals = ClassIntegrals::new(lambda.det(), lambda.sum(), 1.0);
        let mut mins = [f64::INFINITY; 3];
        let mut worst = (f64::INFINITY, 0.0, 0.0);
        // argmin over the grid of c_t^{3/2} / t, expected at t = 1 when tan θ̂ < 0
        let mut argmin = (f64::INFINITY, 1.0);
        for k in 0..CT_TGRID_POINTS {
            let t = k as f64 / (CT_TGRID_POINTS - 1) as f64;
            let c = integrals.ct(t, &phase);
            if k > 0 && c.powf(1.5) / t < argmin.0 {
                argmin = (c.powf(1.5) / t, t);
            }
            let s = ct_slacks(c, t, &phase);
            let scale = c.abs().max(1.0).powi(3);
            for j in 0..3 {
                mins[j] = mins[j].min(s[j]);
                let n = s[j] / scale;
                if n < worst.0 || n.is_nan() {
                    worst = (n, t, c);
                }
            }
        }
        let argmin_t = if phase.tan() < 0.0 { argmin.1 } else { 1.0 };
        Ok((lambda, phase, mins, worst, argmin_t))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut worst = Worst::new();
    let mut mins = [f64::INFINITY; 3];
    let mut min_argmin_t: f64 = 1.0;
    for (i, (lambda, phase, m, (slack, t, c), argmin_t)) in rows.iter().enumerate() {
        min_argmin_t = min_argmin_t.min(*argmin_t);
        for j in 0..3 {
            mins[j] = mins[j].min(m[j]);
        }
        worst.offer(*slack, || {
            WorstSample::new(Some(i), lambda, &PathParams::new(*c, *t, *phase), None)
        });
    }
    let diagnostics = BTreeMap::from([
        ("min_slack_lower".to_string(), mins[0]),
        ("min_slack_upper".to_string(), mins[1]),
        ("min_slack_cubic".to_string(), mins[2]),
        ("t_grid_points".to_string(), CT_TGRID_POINTS as f64),
        ("min_argmin_t".to_string(), min_argmin_t),
    ]);
    let argmin_ok = min_argmin_t == 1.0;
    Ok(report(
        LemmaId::CtBounds,
        spec,
        rows.len(),
        worst,
        CT_TOL,
        argmin_ok,
        diagnostics,
    ))
}

/// Restricted convexity on the level set along constraint-projected random
/// directions, with a finite-difference audit of the analytic Hessian on
/// every hundredth sample.
pub fn check_convexity_lemma(spec: &SampleSpec) -> Result<LemmaReport> {
    spec.validate()?;
    let spec = level_set(spec);
    let rows = exec::map_indexed(spec.count, |i| -> Result<_> {
        let mut rng = sample_rng(spec.seed, i);
        let pt = sample_cone_point(&spec, &mut rng)?;
        let b = constraint_project(
            &pt.lambda,
            &pt.params,
            &sample_hermitian(&pt.lambda, &mut rng),
        );
        let q = hessian_quadratic_form(&pt.lambda, &pt.params, &b)?;
        let rhs = convexity_rhs(&pt.lambda, &pt.params, &b)?;
        let l = pt.lambda.values();
        let scale = fd::second_directional_scale(l, &pt.params, &b);
        let slack = if scale > 0.0 {
            (q - rhs) / scale
        } else {
            q - rhs
        };
        let audit = (i % AUDIT_EVERY == 0).then(|| {
            let oracle = fd::second_directional(l, &pt.params, &b);
            (q - oracle).abs() / scale.max(f64::MIN_POSITIVE)
        });
        Ok((pt, b, slack, audit))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut worst = Worst::new();
    let mut max_fd: f64 = 0.0;
    let mut audited = 0;
    for (i, (pt, b, slack, audit)) in rows.iter().enumerate() {
        worst.offer(*slack, || {
            WorstSample::new(Some(i), &pt.lambda, &pt.params, Some(b))
        });
        if let Some(e) = audit {
            audited += 1;
            max_fd = if e.is_nan() {
                f64::INFINITY
            } else {
                max_fd.max(*e)
            };
        }
    }
    let diagnostics = BTreeMap::from([
        ("hessian_fd_audited".to_string(), audited as f64),
        ("hessian_fd_max_rel_error".to_string(), max_fd),
        ("hessian_fd_tolerance".to_string(), HESSIAN_FD_TOL),
    ]);
    let fd_ok = audited > 0 && max_fd < HESSIAN_FD_TOL;
    Ok(report(
        LemmaId::RestrictedConvexity,
        &spec,
        rows.len(),
        worst,
        CONVEXITY_TOL,
        fd_ok,
        diagnostics,
    ))
}

/// Deterministic points on the level set approaching the cone boundary.
///
/// Two families, 40 stages each with geometric factor 1/2:
/// * `λ₁` fixed and `λ₂ = λ₃`, while `c` decreases to `c*` with
///   `c*³ = t² sin²θ̂`; both the pair-product and pair-sum margins vanish.
/// * `c` fixed and `λ₁ → ∞` with `λ₂ = λ₃`; the pair-product margin vanishes.
pub fn boundary_stages(spec: &SampleSpec) -> Vec<ConePoint> {
    let (lo, hi) = spec.theta_range;
    let phases: Vec<PhaseParameter> = [0.0, 0.5, 1.0]
        .iter()
        .filter_map(|s| {
            PhaseParameter::new(lo + s * (hi - lo) - if *s == 1.0 { 1e-9 } else { 0.0 }).ok()
        })
        .collect();
    let mut out = Vec::new();
    let equal_pair = |l1: f64, p: &PathParams| -> Option<ConePoint> {
        let sec2 = p.phase.sec2();
        let disc = 4.0 * p.c * p.c * sec2 * sec2
            + 4.0 * l1 * (l1 * p.c * sec2 + 2.0 * p.t * p.phase.tan() * sec2);
        if !(disc >= 0.0) {
            return None;
        }
        let mu = (2.0 * p.c * sec2 + disc.sqrt()) / (2.0 * l1);
        (mu > 0.0 && mu <= l1).then(|| ConePoint {
            lambda: RelativeSpectrum::new([l1, mu, mu]),
            params: *p,
        })
    };
    for phase in &phases {
        if phase.tan() < 0.0 {
            for t in [0.5, 0.75, 1.0] {
                let c_star = (t * t * phase.sin2()).cbrt();
                if c_star <= 1.0 / 3.0 {
                    continue;
                }
                for l_factor in [2.0, 8.0, 32.0] {
                    for k in 1..=STAGES {
                        let c = c_star + (1.0 - c_star) * 0.5f64.powi(k);
                        let p = PathParams::new(c, t, *phase);
                        let l1 = l_factor * c.sqrt() * phase.abs_sec();
                        out.extend(equal_pair(l1, &p));
                    }
                }
            }
        }
        for t in [0.0f64, 0.5, 1.0] {
            let alpha = if phase.tan() < 0.0 { 2.0 / 3.0 } else { 1.5 };
            let c = (1.0 - t) * alpha + t;
            if !(c.powi(3) > t * t * phase.sin2()) {
                continue;
            }
            let p = PathParams::new(c, t, *phase);
            for k in 1..=STAGES {
                let l1 = 2.0 * c.sqrt() * phase.abs_sec() * 2f64.powi(k);
                out.extend(equal_pair(l1, &p));
            }
        }
    }
    out
}

fn discriminant_eval(
    pt: &ConePoint,
    quantities: fn(&RelativeSpectrum, &PathParams) -> ConvexityQuantities,
) -> (f64, f64) {
    let q = quantities(&pt.lambda, &pt.params);
    let k = pt.params.shifted_trace(&pt.lambda);
    let lhs = q.discriminant();
    let rhs = 4.0 * k * k * q.g;
    let (c, tt) = (pt.params.c, pt.params.t * pt.params.phase.tan());
    let g_scale =
        c * c * pt.lambda.sigma2() + (2.0 * c * tt * pt.lambda.sum()).abs() + 3.0 * tt * tt;
    // measured against the terms, not the (possibly cancelled) totals
    let id_scale = (q.e * q.d)
        .abs()
        .max(q.b * q.b)
        .max(4.0 * k * k * g_scale)
        .max(f64::MIN_POSITIVE);
    let id_err = (lhs - rhs).abs() / id_scale;
    (
        q.g / g_scale.max(f64::MIN_POSITIVE),
        if id_err.is_nan() {
            f64::INFINITY
        } else {
            id_err
        },
    )
}

pub fn check_discriminant(spec: &SampleSpec) -> Result<LemmaReport> {
    check_discriminant_with(spec, convexity_quantities)
}

/// The discriminant check against a caller-supplied `(E, D, B, g)`; used to
/// confirm that a corrupted formula is caught.
pub fn check_discriminant_with(
    spec: &SampleSpec,
    quantities: fn(&RelativeSpectrum, &PathParams) -> ConvexityQuantities,
) -> Result<LemmaReport> {
    spec.validate()?;
    let points = cone_points(spec)?;
    let stages = boundary_stages(spec);
    let eval = |pts: &[ConePoint]| exec::map_slice(pts, |p| discriminant_eval(p, quantities));
    let (sampled, staged) = (eval(&points), eval(&stages));

    let mut worst_g = Worst::new();
    let mut worst_id = Worst::new();
    let mut min_stage_g = f64::INFINITY;
    let tagged = points
        .iter()
        .zip(&sampled)
        .enumerate()
        .map(|(i, (p, v))| (Some(i), p, v))
        .chain(stages.iter().zip(&staged).map(|(p, v)| (None, p, v)));
    for (idx, pt, (g, id)) in tagged {
        let sample = || WorstSample::new(idx, &pt.lambda, &pt.params, None);
        worst_g.offer(*g, sample);
        worst_id.offer(-id, sample);
        if idx.is_none() {
            min_stage_g = min_stage_g.min(*g);
        }
    }
    let max_id = -worst_id.slack;
    let identity_ok = max_id <= IDENTITY_TOL;
    let diagnostics = BTreeMap::from([
        ("identity_max_rel_error".to_string(), max_id),
        ("identity_tolerance".to_string(), IDENTITY_TOL),
        ("boundary_stages".to_string(), stages.len() as f64),
        ("boundary_min_g".to_string(), min_stage_g),
    ]);
    let mut worst = worst_g;
    if !identity_ok {
        worst.sample = worst_id.sample;
    }
    Ok(report(
        LemmaId::Discriminant,
        spec,
        points.len(),
        worst,
        G_TOL,
        identity_ok,
        diagnostics,
    ))
}

/// Lower bound `∂F/∂λ_μ · λ_μ ≥ −cos²θ̂` on the level set, with a
/// finite-difference audit of the gradient.
pub fn check_euler_bound(spec: &SampleSpec) -> Result<LemmaReport> {
    spec.validate()?;
    let spec = level_set(spec);
    let points = cone_points(&spec)?;
    let stages = boundary_stages(&spec);
    let sampled = exec::map_indexed(points.len(), |i| -> Result<_> {
        let pt = &points[i];
        let slack = euler_bound_slack(&pt.lambda, &pt.params)?;
        let audit = if i % AUDIT_EVERY == 0 {
            let g = gradient_f(&pt.lambda, &pt.params)?;
            let l = pt.lambda.values();
            let oracle = fd::gradient(l, &pt.params);
            let k = pt.params.shifted_trace(&pt.lambda);
            let scale = (0..3)
                .map(|m| (pt.params.c + k / l[m]) / pt.lambda.det())
                .fold(0.0, f64::max);
            Some(
                (0..3)
                    .map(|m| (g[m] - oracle[m]).abs() / scale)
                    .fold(0.0, f64::max),
            )
        } else {
            None
        };
        Ok((slack, audit))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let staged = exec::map_slice(&stages, |p| euler_bound_slack(&p.lambda, &p.params))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut worst = Worst::new();
    let (mut max_fd, mut audited) = (0.0f64, 0);
    for (i, (pt, (slack, audit))) in points.iter().zip(&sampled).enumerate() {
        worst.offer(*slack, || {
            WorstSample::new(Some(i), &pt.lambda, &pt.params, None)
        });
        if let Some(e) = audit {
            audited += 1;
            max_fd = if e.is_nan() {
                f64::INFINITY
            } else {
                max_fd.max(*e)
            };
        }
    }
    let mut min_stage = f64::INFINITY;
    for (pt, slack) in stages.iter().zip(&staged) {
        worst.offer(*slack, || {
            WorstSample::new(None, &pt.lambda, &pt.params, None)
        });
        min_stage = min_stage.min(*slack);
    }
    let diagnostics = BTreeMap::from([
        ("gradient_fd_audited".to_string(), audited as f64),
        ("gradient_fd_max_rel_error".to_string(), max_fd),
        ("boundary_stages".to_string(), stages.len() as f64),
        ("boundary_min_slack".to_string(), min_stage),
    ]);
    let fd_ok = audited > 0 && max_fd < GRADIENT_FD_TOL;
    Ok(report(
        LemmaId::EulerBound,
        &spec,
        points.len(),
        worst,
        EULER_TOL,
        fd_ok,
        diagnostics,
    ))
}

/// Pair sums dominate `2c^{3/2}|sec θ̂| + 2t tan θ̂` whenever the pair product
/// clears `c sec²θ̂`, and that bound is itself positive.
pub fn check_boundary_exclusion(spec: &SampleSpec) -> Result<LemmaReport> {
    spec.validate()?;
    let points = cone_points(spec)?;
    let rows = exec::map_slice(&points, |pt| {
        let p = &pt.params;
        let l = pt.lambda.values();
        let bound = pair_sum_lower_bound(p);
        let tt = 2.0 * p.t * p.phase.tan();
        let bound_scale = 2.0 * p.c.powf(1.5) * p.phase.abs_sec() + tt.abs();
        let mut slack = bound / bound_scale;
        let bound_slack = slack;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if l[i] * l[j] >= p.c_sec2() {
                let pair_sum = p.c * (l[i] + l[j]) + tt;
                let scale = p.c * (l[i] + l[j]) + tt.abs();
                slack = slack.min((pair_sum - bound) / scale);
            }
        }
        // the equality case of the AM-GM step
        let m = p.c.sqrt() * p.phase.abs_sec();
        let eq = (p.c * 2.0 * m + tt - bound) / (p.c * 2.0 * m + tt.abs());
        (slack, bound_slack, eq.abs())
    });
    let mut worst = Worst::new();
    let (mut min_bound, mut max_eq) = (f64::INFINITY, 0.0f64);
    for (i, (pt, (slack, b, eq))) in points.iter().zip(&rows).enumerate() {
        worst.offer(*slack, || {
            WorstSample::new(Some(i), &pt.lambda, &pt.params, None)
        });
        min_bound = min_bound.min(*b);
        max_eq = max_eq.max(*eq);
    }
    let diagnostics = BTreeMap::from([
        ("min_normalised_bound".to_string(), min_bound),
        ("equality_case_max_rel_gap".to_string(), max_eq),
    ]);
    Ok(report(
        LemmaId::BoundaryExclusion,
        spec,
        points.len(),
        worst,
        EXCLUSION_TOL,
        min_bound > 0.0 && max_eq <= EXCLUSION_TOL,
        diagnostics,
    ))
}

pub fn run_all(spec: &SampleSpec) -> Result<Vec<LemmaReport>> {
    Ok(vec![
        check_ct_lemma(spec)?,
        check_convexity_lemma(spec)?,
        check_discriminant(spec)?,
        check_euler_bound(spec)?,
        check_boundary_exclusion(spec)?,
    ])
}
