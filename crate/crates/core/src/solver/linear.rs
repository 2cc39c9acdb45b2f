use crate::algebra::HermitianForm;
use crate::exec;
use crate::torus::{FormField, Spectral};

/// `u ↦ tr(N · ∂∂̄u)` on mean-zero functions, with a Fourier preconditioner
/// built from the grid average of `N`.
pub struct LinearizedOperator<'a> {
    spectral: &'a Spectral,
    coefficients: FormField,
    inv_symbol: Vec<f64>,
}

impl<'a> LinearizedOperator<'a> {
    pub fn new(spectral: &'a Spectral, coefficients: FormField) -> Self {
        let n = coefficients.values().len() as f64;
        let mean = coefficients
            .values()
            .iter()
            .fold(HermitianForm::zero(), |acc, f| acc + *f)
            * (1.0 / n);
        let inv_symbol = exec::map_indexed(coefficients.values().len(), |k| {
            let s = mean.trace_product(&spectral.hessian_symbol(k));
            if s.abs() > 1e-14 {
                1.0 / s
            } else {
                0.0
            }
        });
        Self {
            spectral,
            coefficients,
            inv_symbol,
        }
    }

    pub fn coefficients(&self) -> &FormField {
        &self.coefficients
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let hess = self.spectral.complex_hessian_hat(&self.spectral.forward(u));
        let coeffs = self.coefficients.values();
        let mut out = exec::map_indexed(u.len(), |i| coeffs[i].trace_product(hess.get(i)));
        project_mean_zero(&mut out);
        out
    }

    /// Exact inverse of the constant-coefficient operator with the mean of `N`.
    pub fn precondition(&self, r: &[f64]) -> Vec<f64> {
        let mut hat = self.spectral.forward(r);
        for (h, s) in hat.iter_mut().zip(&self.inv_symbol) {
            *h *= *s;
        }
        let mut out: Vec<f64> = self
            .spectral
            .inverse(hat)
            .into_iter()
            .map(|z| z.re)
            .collect();
        project_mean_zero(&mut out);
        out
    }
}

pub(crate) fn project_mean_zero(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Restarted GMRES with right preconditioning, starting from zero.
pub fn gmres(
    op: impl Fn(&[f64]) -> Vec<f64>,
    precond: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    tol: f64,
    restart: usize,
    max_iters: usize,
) -> (Vec<f64>, GmresOutcome) {
    let n = b.len();
    let mut x = vec![0.0; n];
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return (
            x,
            GmresOutcome {
                iterations: 0,
                relative_residual: 0.0,
                converged: true,
            },
        );
    }
    let mut total = 0;
    let mut rel = 1.0;
    while total < max_iters {
        let ax = op(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        rel = beta / b_norm;
        if rel <= tol {
            break;
        }
        let m = restart.min(max_iters - total);
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            let mut w = op(&precond(&basis[k]));
            for (j, v) in basis.iter().enumerate() {
                h[j][k] = dot(&w, v);
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= h[j][k] * vi);
            }
            h[k + 1][k] = norm(&w);
            for j in 0..k {
                let tmp = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = tmp;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            let hk1 = h[k + 1][k];
            h[k][k] = cs[k] * h[k][k] + sn[k] * hk1;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            total += 1;
            rel = g[k + 1].abs() / b_norm;
            let breakdown = hk1 == 0.0;
            if rel <= tol || breakdown {
                break;
            }
            let wn = hk1;
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        if k_used == 0 {
            break;
        }
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        let mut z = vec![0.0; n];
        for (yi, v) in y.iter().zip(&basis) {
            z.iter_mut().zip(v).for_each(|(zi, vi)| *zi += yi * vi);
        }
        let dx = precond(&z);
        x.iter_mut().zip(&dx).for_each(|(xi, di)| *xi += di);
        if rel <= tol {
            // confirm with a true residual on the next pass
            let ax = op(&x);
            let r: f64 = norm(
                &b.iter()
                    .zip(&ax)
                    .map(|(bi, ai)| bi - ai)
                    .collect::<Vec<_>>(),
            );
            rel = r / b_norm;
            if rel <= tol * 10.0 {
                break;
            }
        }
    }
    (
        x,
        GmresOutcome {
            iterations: total,
            relative_residual: rel,
            converged: rel <= tol * 10.0,
        },
    )
}
