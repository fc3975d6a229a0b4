//! Restarted GMRES without preconditioning.
//!
//! Arnoldi with modified Gram-Schmidt; the least-squares problem is kept in
//! triangular form by Givens rotations so the residual norm is available at
//! every inner iteration. The true residual is recomputed at each restart.

use super::dense::DenseMatrix;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Anything that can apply a square matrix to a vector.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        SparseMatrix::dim(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y)
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.matvec(x));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    /// Stop when `‖Ax - b‖ <= rtol ‖b‖` ...
    pub rtol: f64,
    /// ... or when `‖Ax - b‖ <= atol`.
    pub atol: f64,
    /// Krylov dimension between restarts.
    pub restart: usize,
    /// Cap on the total number of matrix-vector products.
    pub max_iter: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            restart: 30,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final `‖Ax - b‖ / ‖b‖`, recomputed from the returned `x`.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual(a: &impl LinearOperator, x: &[f64], b: &[f64], r: &mut [f64]) -> f64 {
    a.apply(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    norm(r)
}

/// Solves `A x = b` starting from `x = 0`.
pub fn gmres(a: &impl LinearOperator, b: &[f64], config: &GmresConfig) -> Result<GmresSolution> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::InvalidInput(format!(
            "rhs of length {} for a {n}x{n} system",
            b.len()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("rhs contains non-finite values".into()));
    }
    if config.restart == 0 {
        return Err(Error::InvalidInput(
            "GMRES restart length must be positive".into(),
        ));
    }
    let mut x = vec![0.0; n];
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(GmresSolution {
            x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let target = (config.rtol * b_norm).max(config.atol);
    let m = config.restart.min(n).max(1);

    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    // Column-major upper Hessenberg: h[j] holds column j (length m + 1).
    let mut h = vec![vec![0.0; m + 1]; m];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut iterations = 0;

    loop {
        let beta = residual(a, &x, b, &mut r);
        if beta <= target {
            return Ok(GmresSolution {
                x,
                iterations,
                relative_residual: beta / b_norm,
            });
        }
        if iterations >= config.max_iter || !beta.is_finite() {
            return Err(Error::NotConverged {
                iterations,
                residual: beta / b_norm,
            });
        }

        basis.clear();
        basis.push(r.iter().map(|v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;
        let mut k = 0;
        for j in 0..m {
            a.apply(&basis[j], &mut w);
            iterations += 1;
            let col = &mut h[j];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                col[i] = hij;
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
            }
            let h_next = norm(&w);
            col[j + 1] = h_next;
            for i in 0..j {
                let (hi, hi1) = (col[i], col[i + 1]);
                col[i] = cs[i] * hi + sn[i] * hi1;
                col[i + 1] = -sn[i] * hi + cs[i] * hi1;
            }
            let denom = col[j].hypot(col[j + 1]);
            if denom == 0.0 {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = col[j] / denom;
                sn[j] = col[j + 1] / denom;
            }
            col[j] = denom;
            col[j + 1] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            k = j + 1;

            let breakdown = h_next <= f64::EPSILON * beta;
            if g[j + 1].abs() <= target || iterations >= config.max_iter || breakdown {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }

        // Back substitution for the k x k triangular system.
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|l| h[l][i] * y[l]).sum();
            y[i] = if h[i][i] != 0.0 {
                (g[i] - s) / h[i][i]
            } else {
                0.0
            };
        }
        for (yi, v) in y.iter().zip(&basis) {
            for (xk, vk) in x.iter_mut().zip(v) {
                *xk += yi * vk;
            }
        }
    }
}
