mod common;

use dhym_core::algebra::HermitianForm;
use dhym_core::torus::{
    class_integrals_grid, complex_hessian, quadrature, read_field, write_field, zero_mean, Axis,
    BackgroundData, ScalarField, TorusGrid, TORUS_VOLUME,
};
use proptest::prelude::*;

fn grid2(a: Axis, b: Axis, n: usize) -> TorusGrid {
    TorusGrid::with_axes(&[(a, n), (b, n)]).unwrap()
}

/// Random trigonometric polynomial in `(x_a, x_b)` with wavenumbers below 4,
/// returned with its exact second derivatives `(f_aa, f_bb, f_ab)`.
#[derive(Clone, Debug)]
struct Trig {
    terms: Vec<(f64, i32, i32, bool)>,
}

impl Trig {
    fn eval(&self, u: f64, v: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for &(amp, k, l, sine) in &self.terms {
            let arg = f64::from(k) * u + f64::from(l) * v;
            let (f, d2) = if sine {
                (arg.sin(), -arg.sin())
            } else {
                (arg.cos(), -arg.cos())
            };
            out[0] += amp * f;
            out[1] += amp * d2 * f64::from(k * k);
            out[2] += amp * d2 * f64::from(l * l);
            out[3] += amp * d2 * f64::from(k * l);
        }
        out
    }
}

fn trig() -> impl Strategy<Value = Trig> {
    prop::collection::vec((-1.0f64..1.0, -3i32..4, -3i32..4, any::<bool>()), 1..6)
        .prop_map(|terms| Trig { terms })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn hessian_of_trig_polynomials_is_exact(p in trig(), pair in 0usize..3) {
        let (a, b) = [(Axis::X1, Axis::X2), (Axis::X1, Axis::Y1), (Axis::X2, Axis::Y3)][pair];
        let grid = grid2(a, b, 8);
        let phi = ScalarField::from_fn(grid, |x| p.eval(x[a.index()], x[b.index()])[0]);
        let h = complex_hessian(&grid, &phi);
        let scale = p.terms.iter().map(|t| t.0.abs()).sum::<f64>() * 9.0 + 1.0;
        for i in 0..grid.len() {
            let x = grid.point(i);
            let [_, faa, fbb, fab] = p.eval(x[a.index()], x[b.index()]);
            // build the expected matrix from ¼[(f_{xjxk}+f_{yjyk}) + i(f_{xjyk} − f_{yjxk})]
            let mut d = [[0.0f64; 6]; 6];
            let (ia, ib) = (a.index(), b.index());
            d[ia][ia] = faa;
            d[ib][ib] = fbb;
            d[ia][ib] = fab;
            d[ib][ia] = fab;
            for j in 0..3 {
                for k in 0..3 {
                    let re = 0.25 * (d[j][k] + d[3 + j][3 + k]);
                    let im = 0.25 * (d[j][3 + k] - d[3 + j][k]);
                    let got = h.get(i).entry(j, k);
                    prop_assert!((got.re - re).abs() <= 1e-12 * scale);
                    prop_assert!((got.im - im).abs() <= 1e-12 * scale);
                }
            }
            prop_assert!(h.get(i).hermiticity_defect() <= 1e-14 * scale);
        }
    }

    #[test]
    fn zero_mean_is_idempotent(vals in prop::collection::vec(-10.0f64..10.0, 64)) {
        let grid = TorusGrid::with_axes(&[(Axis::X1, 8), (Axis::Y2, 8)]).unwrap();
        let f = ScalarField::new(grid, vals).unwrap();
        let once = zero_mean(&grid, &f);
        let twice = zero_mean(&grid, &once);
        prop_assert!(once.mean().abs() <= 1e-14);
        prop_assert!((&once - &twice).sup_norm() <= 1e-14);
    }

    #[test]
    fn dump_round_trips(vals in prop::collection::vec(-1e6f64..1e6, 512)) {
        let grid = TorusGrid::new([8, 8, 1, 8, 1, 1]).unwrap();
        let f = ScalarField::new(grid, vals).unwrap();
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        prop_assert_eq!(read_field(buf.as_slice()).unwrap(), f);
    }
}

#[test]
fn class_integrals_ignore_smooth_perturbations() {
    let grid = grid2(Axis::X1, Axis::X2, 16);
    let base = |psi0: ScalarField| {
        BackgroundData::new(
            grid,
            HermitianForm::identity(),
            HermitianForm::scaled_identity(2.0),
            psi0,
            common::baseline_phase(),
        )
        .unwrap()
    };
    let flat = class_integrals_grid(&base(ScalarField::zeros(grid)));
    let bumps = [
        ScalarField::from_fn(grid, |x| 0.05 * (x[0].cos()).exp() * x[1].sin()),
        ScalarField::from_fn(grid, |x| {
            0.04 * (x[0] - x[1]).sin().exp() + 0.02 * (2.0 * x[1]).cos()
        }),
    ];
    for psi in bumps {
        let i = class_integrals_grid(&base(psi));
        for (a, b) in [
            (i.int_omega_cap_cubed, flat.int_omega_cap_cubed),
            (i.int_3omega2_omega_cap, flat.int_3omega2_omega_cap),
            (i.int_omega_cubed, flat.int_omega_cubed),
        ] {
            assert!((a - b).abs() <= 1e-10 * b.abs(), "{a} vs {b}");
        }
    }
}

fn bessel_i0_at_one() -> f64 {
    // Σ (1/4)^k / (k!)²
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..30 {
        term *= 0.25 / (k * k) as f64;
        sum += term;
    }
    sum
}

#[test]
fn errors_decay_spectrally_with_resolution() {
    let mut quad_err = Vec::new();
    let mut hess_err = Vec::new();
    for n in [8, 16, 32] {
        let grid = grid2(Axis::X1, Axis::Y1, n);
        let f = ScalarField::from_fn(grid, |x| (x[0].cos() + 0.5 * x[3].sin()).exp());
        // ∫ e^{cos u} e^{sin(v)/2} = (2π)⁶ I₀(1) I₀(1/2) over the full torus
        let i0_half: f64 = (0..30)
            .fold((1.0, 1.0), |(t, s), k: i32| {
                if k == 0 {
                    (t, s)
                } else {
                    let t = t * 0.0625 / f64::from(k * k);
                    (t, s + t)
                }
            })
            .1;
        let exact = TORUS_VOLUME * bessel_i0_at_one() * i0_half;
        quad_err.push((quadrature(&grid, &f) - exact).abs() / exact);

        let h = complex_hessian(&grid, &f);
        let mut err: f64 = 0.0;
        for i in 0..grid.len() {
            let x = grid.point(i);
            let (u, v) = (x[0], x[3]);
            let e = (u.cos() + 0.5 * v.sin()).exp();
            let fuu = (u.sin().powi(2) - u.cos()) * e;
            let fvv = (0.25 * v.cos().powi(2) - 0.5 * v.sin()) * e;
            err = err.max((h.get(i).entry(0, 0).re - 0.25 * (fuu + fvv)).abs());
        }
        hess_err.push(err);
    }
    eprintln!("quadrature {quad_err:?} hessian {hess_err:?}");
    // doubling the resolution must gain far more than any fixed power of h
    assert!(quad_err[1] <= 1e-6 * quad_err[0] || quad_err[1] <= 1e-14);
    assert!(quad_err[2] <= 1e-14);
    assert!(hess_err[1] <= 1e-3 * hess_err[0]);
    assert!(hess_err[2] <= 1e-3 * hess_err[1] || hess_err[2] <= 1e-12);
}
