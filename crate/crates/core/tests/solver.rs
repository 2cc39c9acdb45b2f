mod common;

use common::oracle::QuotientOracle;
use common::{baseline_background, cos_fixture, coupled_fixture, twisted_fixture};
use dhym_core::algebra::HermitianForm;
use dhym_core::path::compute_ct_with_tolerance;
use dhym_core::solver::{
    continue_path, evaluate, linearized_coefficients, newton_solve, verify_solution,
    LinearizedOperator, SolverConfig,
};
use dhym_core::torus::{
    class_integrals_grid, zero_mean, Axis, BackgroundData, ScalarField, TorusGrid,
};
use dhym_core::{Error, PathParams};

fn path_point(bg: &BackgroundData, t: f64) -> dhym_core::path::PathPoint {
    compute_ct_with_tolerance(
        &class_integrals_grid(bg),
        t,
        bg.phase(),
        bg.admissibility_tol(),
    )
    .unwrap()
}

fn sup_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    (a - b).sup_norm()
}

#[test]
fn constant_background_is_solved_without_iterating() {
    let grid = TorusGrid::with_axes(&[(Axis::X1, 8), (Axis::Y1, 8)]).unwrap();
    let bg = baseline_background(grid, &[]);
    for t in [0.0, 0.3, 1.0] {
        let p = path_point(&bg, t);
        let out =
            newton_solve(&bg, &ScalarField::zeros(grid), &p, &SolverConfig::default()).unwrap();
        assert!(out.iterations <= 1);
        assert!(out.residual_sup <= 1e-14);
        assert!(out.phi.sup_norm() <= 1e-14);
    }
}

#[test]
fn regression_fixture_recovers_minus_psi0() {
    let bg = cos_fixture(16);
    let (phi, trace) = continue_path(&bg, &SolverConfig::default()).unwrap();
    let expected = bg.psi0() * -1.0;
    assert!(sup_diff(&phi, &expected) < 1e-10);
    assert_eq!(trace.last().unwrap().t, 1.0);
}

#[test]
fn newton_converges_quadratically() {
    // single-mode potentials give an equation that is linear along the
    // perturbed direction, so use the coupled fixture
    for (bg, t) in [
        (coupled_fixture(16), 0.0),
        (coupled_fixture(16), 1.0),
        (twisted_fixture(12), 0.5),
    ] {
        let p = path_point(&bg, t);
        let cfg = SolverConfig {
            newton_tol: 1e-14,
            ..SolverConfig::default()
        };
        let out = newton_solve(&bg, &ScalarField::zeros(*bg.grid()), &p, &cfg).unwrap();
        let h = &out.residual_history;
        eprintln!("residual history {h:?}");
        // rates measured while the residual is above the roundoff floor
        let ratios: Vec<f64> = h
            .windows(2)
            .filter(|w| w[1] > 1e-13 && w[0] < 0.1)
            .map(|w| w[1].ln() / w[0].ln())
            .collect();
        assert!(!ratios.is_empty());
        assert!(ratios.iter().all(|r| *r >= 1.7), "ratios {ratios:?}");
    }
}

#[test]
fn far_outside_cone_is_rejected() {
    let bg = cos_fixture(16);
    let p = path_point(&bg, 0.5);
    let bad = ScalarField::from_fn(*bg.grid(), |x| 30.0 * x[0].cos());
    assert!(matches!(
        newton_solve(&bg, &bad, &p, &SolverConfig::default()),
        Err(Error::EllipticityLost { .. })
    ));
}

#[test]
fn linearization_matches_directional_difference() {
    let bg = coupled_fixture(16);
    let p = path_point(&bg, 0.6);
    let params = p.params();
    let phi = ScalarField::from_fn(*bg.grid(), |x| {
        0.2 * (x[0] - x[1]).sin() + 0.1 * (2.0 * x[1]).cos()
    });
    let u = zero_mean(
        bg.grid(),
        &ScalarField::from_fn(*bg.grid(), |x| {
            (x[0] + 2.0 * x[1]).cos() + 0.5 * (3.0 * x[0]).sin() + x[1].sin()
        }),
    );
    let op = LinearizedOperator::new(
        bg.spectral(),
        linearized_coefficients(&bg, &phi, &params).unwrap(),
    );
    let lu = op.apply(u.values());
    let h = 1e-6;
    let plus = evaluate(&bg, &phi.axpy(h, &u), &params);
    let minus = evaluate(&bg, &phi.axpy(-h, &u), &params);
    let fd: Vec<f64> = plus
        .gma
        .iter()
        .zip(&minus.gma)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect();
    let fd_mean = fd.iter().sum::<f64>() / fd.len() as f64;
    let num = lu
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - (b - fd_mean)).abs())
        .fold(0.0, f64::max);
    let den = fd.iter().map(|v| v.abs()).fold(0.0, f64::max);
    assert!(num / den < 1e-5, "relative error {}", num / den);
}

#[test]
fn solutions_are_unique_in_zero_mean_gauge() {
    let bg = coupled_fixture(16);
    let p = path_point(&bg, 0.5);
    let cfg = SolverConfig::default();
    let a = newton_solve(&bg, &ScalarField::zeros(*bg.grid()), &p, &cfg).unwrap();
    let seed = ScalarField::from_fn(*bg.grid(), |x| 0.3 * x[0].sin() * x[1].cos() + 5.0);
    let b = newton_solve(&bg, &seed, &p, &cfg).unwrap();
    assert!(sup_diff(&a.phi, &b.phi) <= 1e-9);
}

#[test]
fn t0_solve_matches_quotient_oracle() {
    let fixtures = [
        {
            let grid = TorusGrid::with_axes(&[(Axis::X1, 16)]).unwrap();
            baseline_background(
                grid,
                &[
                    common::mode(1.0, [1, 0, 0, 0, 0, 0], dhym_core::torus::TrigKind::Cos),
                    common::mode(0.3, [2, 0, 0, 0, 0, 0], dhym_core::torus::TrigKind::Sin),
                ],
            )
        },
        coupled_fixture(8),
        twisted_fixture(12),
    ];
    for bg in fixtures {
        let p = path_point(&bg, 0.0);
        let cfg = SolverConfig {
            newton_tol: 1e-13,
            ..SolverConfig::default()
        };
        let out = newton_solve(&bg, &ScalarField::zeros(*bg.grid()), &p, &cfg).unwrap();
        let oracle = QuotientOracle::new(&bg).solve(1e-13);
        let oracle = ScalarField::new(*bg.grid(), oracle).unwrap();
        let d = sup_diff(&out.phi, &oracle);
        eprintln!("oracle distance {d:e}, |phi| {}", out.phi.sup_norm());
        assert!(d <= 1e-10);
        assert!(out.phi.sup_norm() > 1e-3);
    }
}

#[test]
fn twisted_background_reaches_t1_and_verifies() {
    let bg = twisted_fixture(12);
    let (phi, trace) = continue_path(&bg, &SolverConfig::default()).unwrap();
    assert_eq!(trace.last().unwrap().t, 1.0);
    let report = verify_solution(&bg, &phi, bg.phase()).unwrap();
    assert!(report.residual_sup <= 1e-10, "{report:?}");
    assert!(report.phase_deviation_sup <= 1e-8);
    assert!(report.margins.is_admissible());
}

#[test]
fn verification_of_constant_solution() {
    let grid = TorusGrid::with_axes(&[(Axis::X1, 8)]).unwrap();
    let bg = baseline_background(grid, &[]);
    let r = verify_solution(&bg, &ScalarField::zeros(grid), bg.phase()).unwrap();
    assert!(r.residual_sup <= 1e-12);
    assert!(r.dhym_residual_sup <= 1e-12);
    assert!(r.phase_deviation_sup <= 1e-12);
}

#[test]
fn verification_reports_residual_without_failing() {
    let bg = cos_fixture(16);
    let r = verify_solution(&bg, &ScalarField::zeros(*bg.grid()), bg.phase()).unwrap();
    assert!(r.residual_sup > 1e-3);
}

#[test]
fn subsolution_violation_stops_before_stepping() {
    let grid = TorusGrid::with_axes(&[(Axis::X1, 8)]).unwrap();
    let err = BackgroundData::from_modes(
        grid,
        HermitianForm::identity(),
        HermitianForm::scaled_identity(1.2),
        &[],
        common::baseline_phase(),
    )
    .unwrap_err();
    match err {
        Error::HypothesisViolated {
            min_pair_product_margin,
            ..
        } => assert!((min_pair_product_margin + 0.56).abs() < 1e-12),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn constant_coefficients_match_direct_evaluation() {
    let grid = TorusGrid::with_axes(&[(Axis::X1, 8)]).unwrap();
    let bg = baseline_background(grid, &[]);
    let p = PathParams::new(1.0, 1.0, common::baseline_phase());
    let st = evaluate(&bg, &ScalarField::zeros(grid), &p);
    assert_eq!(st.gma.iter().fold(0.0f64, |m, v| m.max(v.abs())), 0.0);
}
