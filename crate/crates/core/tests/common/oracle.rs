//! Stand-alone solver for the t = 0 Hessian-quotient equation
//! σ₃(ω⁻¹Ω_u) = c₀ sec²θ̂ σ₁(ω⁻¹Ω_u), built from dense periodic
//! differentiation matrices, a finite-difference Jacobian and a bordered
//! mean-zero constraint. Shares nothing with the library's spectral code.
#![allow(clippy::needless_range_loop)]

use dhym_core::torus::BackgroundData;
use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;

struct Dense {
    res: [usize; 6],
    strides: [usize; 6],
    d1: Vec<Option<Vec<Vec<f64>>>>,
    d2: Vec<Option<Vec<Vec<f64>>>>,
}

fn first_derivative_matrix(n: usize) -> Vec<Vec<f64>> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        let d = i as f64 - j as f64;
                        let sign = if (i + n - j).is_multiple_of(2) {
                            1.0
                        } else {
                            -1.0
                        };
                        0.5 * sign / (d * h / 2.0).tan()
                    }
                })
                .collect()
        })
        .collect()
}

fn second_derivative_matrix(n: usize) -> Vec<Vec<f64>> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        -std::f64::consts::PI.powi(2) / (3.0 * h * h) - 1.0 / 6.0
                    } else {
                        let d = i as f64 - j as f64;
                        let sign = if (i + n - j).is_multiple_of(2) {
                            1.0
                        } else {
                            -1.0
                        };
                        -0.5 * sign / (d * h / 2.0).sin().powi(2)
                    }
                })
                .collect()
        })
        .collect()
}

impl Dense {
    fn new(res: [usize; 6]) -> Self {
        let mut strides = [1usize; 6];
        for a in (0..5).rev() {
            strides[a] = strides[a + 1] * res[a + 1];
        }
        let d1 = res
            .iter()
            .map(|&n| (n > 1).then(|| first_derivative_matrix(n)))
            .collect();
        let d2 = res
            .iter()
            .map(|&n| (n > 1).then(|| second_derivative_matrix(n)))
            .collect();
        Self {
            res,
            strides,
            d1,
            d2,
        }
    }

    fn len(&self) -> usize {
        self.res.iter().product()
    }

    fn apply(&self, u: &[f64], axis: usize, m: &[Vec<f64>]) -> Vec<f64> {
        let n = self.res[axis];
        let s = self.strides[axis];
        (0..u.len())
            .map(|p| {
                let i = (p / s) % n;
                let base = p - i * s;
                (0..n).map(|j| m[i][j] * u[base + j * s]).sum()
            })
            .collect()
    }

    fn second(&self, u: &[f64], a: usize, b: usize) -> Vec<f64> {
        if a == b {
            match &self.d2[a] {
                Some(m) => self.apply(u, a, m),
                None => vec![0.0; u.len()],
            }
        } else {
            match (&self.d1[a], &self.d1[b]) {
                (Some(ma), Some(mb)) => self.apply(&self.apply(u, b, mb), a, ma),
                _ => vec![0.0; u.len()],
            }
        }
    }

    /// ∂∂̄u at every point, entries `¼[(u_{xjxk} + u_{yjyk}) + i(u_{xjyk} − u_{yjxk})]`.
    fn complex_hessian(&self, u: &[f64]) -> Vec<Matrix3<Complex64>> {
        let mut second = vec![vec![Vec::new(); 6]; 6];
        for a in 0..6 {
            for b in a..6 {
                let d = self.second(u, a, b);
                second[b][a] = d.clone();
                second[a][b] = d;
            }
        }
        (0..u.len())
            .map(|p| {
                Matrix3::from_fn(|j, k| {
                    let re = second[j][k][p] + second[3 + j][3 + k][p];
                    let im = second[j][3 + k][p] - second[3 + j][k][p];
                    Complex64::new(re, im) * 0.25
                })
            })
            .collect()
    }
}

pub struct QuotientOracle {
    dense: Dense,
    omega_inv: Matrix3<Complex64>,
    omega_det: f64,
    background: Vec<Matrix3<Complex64>>,
    target: f64,
}

impl QuotientOracle {
    pub fn new(bg: &BackgroundData) -> Self {
        let dense = Dense::new(bg.grid().resolution());
        let omega = *bg.omega().matrix();
        let omega_inv = omega.try_inverse().unwrap();
        let omega_det = omega.determinant().re;
        let base = *bg.omega0_constant().matrix();
        let background: Vec<_> = dense
            .complex_hessian(bg.psi0().values())
            .into_iter()
            .map(|h| h + base)
            .collect();
        let n = background.len() as f64;
        let s3: f64 = background
            .iter()
            .map(|a| a.determinant().re / omega_det)
            .sum::<f64>()
            / n;
        let s1: f64 = background
            .iter()
            .map(|a| (omega_inv * a).trace().re)
            .sum::<f64>()
            / n;
        let sec2 = bg.phase().sec2();
        let c0 = s3 / (sec2 * s1);
        Self {
            dense,
            omega_inv,
            omega_det,
            background,
            target: c0 * sec2,
        }
    }

    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        self.dense
            .complex_hessian(u)
            .iter()
            .zip(&self.background)
            .map(|(h, b)| {
                let a = b + h;
                a.determinant().re / self.omega_det - self.target * (self.omega_inv * a).trace().re
            })
            .collect()
    }

    /// Newton on the bordered system `[J 1; 1ᵀ 0]`.
    pub fn solve(&self, tol: f64) -> Vec<f64> {
        let n = self.dense.len();
        let mut u = vec![0.0; n];
        for _ in 0..40 {
            let r = self.residual(&u);
            let sup = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if sup <= tol {
                return u;
            }
            let h = 1e-6;
            let mut jac = DMatrix::<f64>::zeros(n + 1, n + 1);
            for j in 0..n {
                let mut up = u.clone();
                let mut dn = u.clone();
                up[j] += h;
                dn[j] -= h;
                let (rp, rm) = (self.residual(&up), self.residual(&dn));
                for i in 0..n {
                    jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
                }
                jac[(j, n)] = 1.0;
                jac[(n, j)] = 1.0;
            }
            let mut rhs = DVector::<f64>::zeros(n + 1);
            for i in 0..n {
                rhs[i] = -r[i];
            }
            rhs[n] = -u.iter().sum::<f64>();
            let du = jac.lu().solve(&rhs).expect("nonsingular bordered Jacobian");
            for i in 0..n {
                u[i] += du[i];
            }
        }
        panic!("oracle Newton did not converge");
    }
}
