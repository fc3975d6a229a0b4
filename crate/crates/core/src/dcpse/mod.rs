//! Flat-space DC-PSE: multi-indices, kernel construction and operators on
//! point sets in one to three dimensions.

mod kernel;
mod multiindex;

use std::sync::Arc;

use rayon::prelude::*;

pub use kernel::{
    apply_operator, build_kernel, build_kernels_scaled, KernelCoefficients, MonomialBasis,
};
pub use multiindex::{basis_multiindices, beta_min, DifferentialOperator, MultiIndex};

use crate::error::{Error, Result};
use crate::pointcloud::{mean_l1_distance, NeighborList, Vec3};

/// A DC-PSE operator discretized on a point set: per point, the neighbor
/// indices and the weights `η(z_q) / ε^|α|`.
#[derive(Debug, Clone)]
pub struct FlatOperator {
    op: DifferentialOperator,
    neighbors: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
    epsilon: Vec<f64>,
}

impl FlatOperator {
    pub fn operator(&self) -> &DifferentialOperator {
        &self.op
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Smoothing length used at point `p`.
    pub fn epsilon(&self, p: usize) -> f64 {
        self.epsilon[p]
    }

    /// Neighbor indices and kernel weights of point `p`.
    pub fn stencil(&self, p: usize) -> (&[usize], &[f64]) {
        (&self.neighbors[p], &self.weights[p])
    }

    /// `Q f` at every point.
    pub fn apply(&self, field: &[f64]) -> Result<Vec<f64>> {
        if field.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "field of length {} for an operator on {} points",
                field.len(),
                self.len()
            )));
        }
        let sign = if self.op.is_odd() { 1.0 } else { -1.0 };
        Ok((0..self.len())
            .map(|p| {
                let (nb, w) = self.stencil(p);
                nb.iter()
                    .zip(w)
                    .map(|(&q, w)| (field[q] + sign * field[p]) * w)
                    .sum()
            })
            .collect())
    }
}

/// Discretizes `op` with order-`r` kernels on `positions`, using `nbrs` as the
/// support of every point and `ε_p = eps_factor ×` the mean L1 distance to
/// the neighbors of `p`.
pub fn build_flat_operator(
    positions: &[Vec3],
    nbrs: &NeighborList,
    op: &DifferentialOperator,
    r: u32,
    eps_factor: f64,
) -> Result<FlatOperator> {
    if nbrs.len() != positions.len() {
        return Err(Error::InvalidInput(
            "neighbor list does not match positions".into(),
        ));
    }
    if !(eps_factor > 0.0 && eps_factor.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "eps_factor must be positive, got {eps_factor}"
        )));
    }
    let basis = Arc::new(MonomialBasis::new(op.order(), r, op.dim())?);
    let scale_pow = op.order() as i32;
    let built: Vec<(Vec<f64>, f64)> = (0..positions.len())
        .into_par_iter()
        .map(|p| {
            let xp = positions[p];
            let nb = nbrs.of(p);
            let eps = mean_l1_distance(&xp, nb.iter().map(|&q| positions[q]))
                .ok_or(Error::IsolatedPoint { index: p })?
                * eps_factor;
            let scaled: Vec<Vec3> = nb.iter().map(|&q| (xp - positions[q]) / eps).collect();
            let kernel = build_kernels_scaled(&scaled, &[op], &basis, eps, nbrs.cutoff())
                .map_err(|e| with_point(e, p))?
                .remove(0);
            let denom = eps.powi(scale_pow);
            let w = kernel
                .evaluate_scaled_many(&scaled)
                .into_iter()
                .map(|v| v / denom)
                .collect();
            Ok((w, eps))
        })
        .collect::<Result<_>>()?;
    let (weights, epsilon) = built.into_iter().unzip();
    Ok(FlatOperator {
        op: op.clone(),
        neighbors: nbrs.iter().map(<[usize]>::to_vec).collect(),
        weights,
        epsilon,
    })
}

/// Attaches the center index to a degenerate-distribution error.
pub(crate) fn with_point(e: Error, p: usize) -> Error {
    match e {
        Error::DegenerateDistribution {
            point: None,
            pivot_ratio,
        } => Error::DegenerateDistribution {
            point: Some(p),
            pivot_ratio,
        },
        other => other,
    }
}
