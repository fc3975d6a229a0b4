//! Implicit systems built from even surface operators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::surface::SurfaceOperator;

/// Assembled `A u = b` with identity rows at the Dirichlet points.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    pub dirichlet: Vec<(usize, f64)>,
}

/// The operator as a matrix: `Q f = A f` for every field `f`.
///
/// Rows of even operators sum to zero; odd operators carry the self term
/// `2 η_S(x_p, x_p)` and `Σ_s η_S` on the diagonal.
pub fn surface_operator_matrix(sop: &SurfaceOperator) -> Result<SparseMatrix> {
    let sign = if sop.is_odd() { 1.0 } else { -1.0 };
    let mut trips = Vec::new();
    for p in 0..sop.len() {
        let scale = sop.scale(p);
        let (nb, eta) = sop.row(p);
        let mut diag = 0.0;
        for (&s, &e) in nb.iter().zip(eta) {
            trips.push((p, s, e * scale));
            diag += sign * e * scale;
        }
        if sop.is_odd() {
            diag += 2.0 * sop.self_value(p) * scale;
        }
        trips.push((p, p, diag));
    }
    SparseMatrix::from_triplets(sop.len(), trips)
}

/// Assembles `Q u = rhs_field` with `u` prescribed at the `dirichlet` points.
///
/// Columns of Dirichlet points are moved to the right-hand side, so the
/// unknowns couple only among themselves.
pub fn assemble_poisson(
    sop: &SurfaceOperator,
    rhs_field: &[f64],
    dirichlet: &[(usize, f64)],
) -> Result<SparseSystem> {
    let n = sop.len();
    if sop.is_odd() {
        return Err(Error::InvalidInput(format!(
            "Poisson assembly needs an even operator, got {}",
            sop.operator()
        )));
    }
    if rhs_field.len() != n {
        return Err(Error::InvalidInput(format!(
            "rhs of length {} for {n} points",
            rhs_field.len()
        )));
    }
    if dirichlet.is_empty() {
        return Err(Error::InvalidInput(
            "at least one Dirichlet point is needed to fix the constant".into(),
        ));
    }
    let mut fixed = HashMap::with_capacity(dirichlet.len());
    for &(p, v) in dirichlet {
        if p >= n || !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bad Dirichlet entry ({p}, {v})"
            )));
        }
        if fixed.insert(p, v).is_some() {
            return Err(Error::InvalidInput(format!(
                "point {p} is constrained twice"
            )));
        }
    }

    let mut trips = Vec::new();
    let mut rhs = rhs_field.to_vec();
    for (p, r) in rhs.iter_mut().enumerate().take(n) {
        if let Some(&v) = fixed.get(&p) {
            trips.push((p, p, 1.0));
            *r = v;
            continue;
        }
        let scale = sop.scale(p);
        let (nb, eta) = sop.row(p);
        if nb.is_empty() {
            return Err(Error::InvalidInput(format!("point {p} has no stencil")));
        }
        let mut diag = 0.0;
        for (&s, &e) in nb.iter().zip(eta) {
            let a = e * scale;
            diag -= a;
            match fixed.get(&s) {
                Some(&v) => *r -= a * v,
                None => trips.push((p, s, a)),
            }
        }
        trips.push((p, p, diag));
    }
    Ok(SparseSystem {
        matrix: SparseMatrix::from_triplets(n, trips)?,
        rhs,
        dirichlet: dirichlet.to_vec(),
    })
}
