use dhym_core::algebra::{convexity_quantities, ConvexityQuantities, PathParams, RelativeSpectrum};
use dhym_core::exec;
use dhym_core::lemmas::{
    check_boundary_exclusion, check_convexity_lemma, check_ct_lemma, check_discriminant,
    check_discriminant_with, check_euler_bound, run_all, LemmaId, SampleSpec,
};

#[test]
fn default_run_passes() {
    for r in run_all(&SampleSpec::default()).unwrap() {
        eprintln!("{}", r.to_json());
        assert!(r.pass, "{} failed", r.lemma);
        assert_eq!(r.count, 10_000);
    }
}

#[test]
fn extended_phase_range_passes() {
    let spec = SampleSpec::default()
        .extended_range()
        .with_count(2_000)
        .with_seed(7);
    for r in run_all(&spec).unwrap() {
        assert!(r.pass, "{}", r.to_json());
    }
}

#[test]
fn reports_are_bit_identical_across_modes() {
    let spec = SampleSpec::default().with_count(1_000).with_seed(9);
    let parallel = run_all(&spec).unwrap();
    exec::set_sequential(true);
    let sequential = run_all(&spec);
    exec::set_sequential(false);
    let sequential = sequential.unwrap();
    for (a, b) in parallel.iter().zip(&sequential) {
        assert_eq!(a.to_json(), b.to_json());
    }
}

fn flipped_b(lambda: &RelativeSpectrum, p: &PathParams) -> ConvexityQuantities {
    let mut q = convexity_quantities(lambda, p);
    let k = p.shifted_trace(lambda);
    q.b = 2.0 * (p.c * lambda.get(2) - p.t * p.phase.tan()) * k;
    q
}

#[test]
fn corrupted_discriminant_is_caught_with_replayable_sample() {
    let spec = SampleSpec::default().with_count(500);
    let r = check_discriminant_with(&spec, flipped_b).unwrap();
    assert!(!r.pass);
    let w = r.worst_sample.clone().unwrap();
    let p = PathParams::new(
        w.c,
        w.t,
        dhym_core::PhaseParameter::new(w.theta_hat).unwrap(),
    );
    let l = RelativeSpectrum::new(w.lambda);
    let q = flipped_b(&l, &p);
    let k = p.shifted_trace(&l);
    assert!((q.discriminant() - 4.0 * k * k * q.g).abs() > 1e-6 * q.discriminant().abs());
    let round: dhym_core::lemmas::LemmaReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(round.worst_sample, r.worst_sample);
}

#[test]
fn zero_count_is_rejected() {
    let spec = SampleSpec::default().with_count(0);
    assert!(check_ct_lemma(&spec).is_err());
    assert!(check_convexity_lemma(&spec).is_err());
    assert!(check_discriminant(&spec).is_err());
    assert!(check_euler_bound(&spec).is_err());
    assert!(check_boundary_exclusion(&spec).is_err());
}

#[test]
fn lemma_ids_are_distinct() {
    let names: std::collections::BTreeSet<_> = LemmaId::ALL.iter().map(|l| l.as_str()).collect();
    assert_eq!(names.len(), 5);
}
