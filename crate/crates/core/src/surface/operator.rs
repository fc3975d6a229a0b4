//! Surface kernels: the embedding-space kernel summed over each group of the
//! extended neighborhood.

use std::sync::Arc;

use rayon::prelude::*;

use super::neighborhood::{build_surface_neighborhood, SurfaceParams};
use crate::dcpse::{build_kernels_scaled, with_point, DifferentialOperator, MonomialBasis};
use crate::error::{Error, Result};
use crate::pointcloud::{build_neighbor_list, PointLabel, SurfacePointCloud};

/// A surface DC-PSE operator on every non-ghost point of a cloud.
///
/// Row `p` holds the surface neighbors `s` with `η_S(x_p, x_s)`, plus the self
/// value `η_S(x_p, x_p)`. Ghost points have empty rows and evaluate to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceOperator {
    op: DifferentialOperator,
    row_ptr: Vec<usize>,
    neighbors: Vec<usize>,
    values: Vec<f64>,
    self_values: Vec<f64>,
    epsilon: Vec<f64>,
}

impl SurfaceOperator {
    pub fn operator(&self) -> &DifferentialOperator {
        &self.op
    }

    pub fn order(&self) -> u32 {
        self.op.order()
    }

    pub fn is_odd(&self) -> bool {
        self.op.is_odd()
    }

    pub fn len(&self) -> usize {
        self.self_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.self_values.is_empty()
    }

    /// Surface neighbors of `p` and their kernel values `η_S(x_p, x_s)`.
    pub fn row(&self, p: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[p]..self.row_ptr[p + 1];
        (&self.neighbors[range.clone()], &self.values[range])
    }

    pub fn self_value(&self, p: usize) -> f64 {
        self.self_values[p]
    }

    /// `ε(x_p)`; `None` for ghost points.
    pub fn epsilon(&self, p: usize) -> Option<f64> {
        let e = self.epsilon[p];
        (e > 0.0).then_some(e)
    }

    /// `ε^-|α|`, or 0 for rows without a stencil.
    pub fn scale(&self, p: usize) -> f64 {
        match self.epsilon(p) {
            Some(e) => e.powi(-(self.order() as i32)),
            None => 0.0,
        }
    }
}

/// Builds `op` on `cloud`. Operator multi-indices live in the embedding
/// space (two-dimensional for curves in the plane).
pub fn build_surface_operator(
    cloud: &SurfacePointCloud,
    op: &DifferentialOperator,
    params: &SurfaceParams,
) -> Result<SurfaceOperator> {
    Ok(build_surface_operators(cloud, std::slice::from_ref(op), params)?.remove(0))
}

/// Builds several operators of one common order, sharing neighborhoods and
/// the factorization of each moment matrix.
pub fn build_surface_operators(
    cloud: &SurfacePointCloud,
    ops: &[DifferentialOperator],
    params: &SurfaceParams,
) -> Result<Vec<SurfaceOperator>> {
    params.validate()?;
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidInput("no operators to build".into()))?;
    for op in ops {
        if op.dim() != cloud.dim() {
            return Err(Error::InvalidInput(format!(
                "operator {op} is {}-dimensional but the cloud is embedded in {} dimensions",
                op.dim(),
                cloud.dim()
            )));
        }
        if op.order() != first.order() {
            return Err(Error::InvalidInput(
                "operators built together must share one order".into(),
            ));
        }
    }
    let basis = Arc::new(MonomialBasis::new(first.order(), params.r, cloud.dim())?);
    let nbrs = build_neighbor_list(cloud, params.r_c)?;
    let op_refs: Vec<&DifferentialOperator> = ops.iter().collect();

    struct Row {
        eta: Vec<Vec<f64>>,
        eta_self: Vec<f64>,
        epsilon: f64,
    }
    let rows: Vec<Row> = (0..cloud.len())
        .into_par_iter()
        .map(|p| {
            if cloud.label(p) == PointLabel::Ghost {
                return Ok(Row {
                    eta: vec![Vec::new(); ops.len()],
                    eta_self: vec![0.0; ops.len()],
                    epsilon: 0.0,
                });
            }
            let nb = build_surface_neighborhood(cloud, p, &nbrs, params)?;
            let kernels =
                build_kernels_scaled(nb.entries(), &op_refs, &basis, nb.epsilon(), params.r_c)
                    .map_err(|e| with_point(e, p))?;
            let ptr = nb.group_ptr();
            let groups = nb.group_count();
            let mut eta = Vec::with_capacity(ops.len());
            let mut eta_self = Vec::with_capacity(ops.len());
            for k in &kernels {
                let vals = k.evaluate_scaled_many(nb.entries());
                let mut sums: Vec<f64> = (0..groups)
                    .map(|g| vals[ptr[g]..ptr[g + 1]].iter().sum())
                    .collect();
                eta_self.push(sums.pop().unwrap_or(0.0));
                eta.push(sums);
            }
            Ok(Row {
                eta,
                eta_self,
                epsilon: nb.epsilon(),
            })
        })
        .collect::<Result<_>>()?;

    let mut row_ptr = Vec::with_capacity(cloud.len() + 1);
    row_ptr.push(0);
    let mut neighbors = Vec::new();
    for (p, row) in rows.iter().enumerate() {
        if row.epsilon > 0.0 {
            neighbors.extend_from_slice(nbrs.of(p));
        }
        row_ptr.push(neighbors.len());
    }
    let epsilon: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    Ok(ops
        .iter()
        .enumerate()
        .map(|(k, op)| SurfaceOperator {
            op: op.clone(),
            row_ptr: row_ptr.clone(),
            neighbors: neighbors.clone(),
            values: rows.iter().flat_map(|r| r.eta[k].iter().copied()).collect(),
            self_values: rows.iter().map(|r| r.eta_self[k]).collect(),
            epsilon: epsilon.clone(),
        })
        .collect())
}

/// Applies the operator at point `p`.
pub fn evaluate_surface_operator_at(field: &[f64], sop: &SurfaceOperator, p: usize) -> f64 {
    let (nb, eta) = sop.row(p);
    let fp = field[p];
    let sum: f64 = if sop.is_odd() {
        nb.iter()
            .zip(eta)
            .map(|(&s, e)| (field[s] + fp) * e)
            .sum::<f64>()
            + 2.0 * fp * sop.self_value(p)
    } else {
        nb.iter().zip(eta).map(|(&s, e)| (field[s] - fp) * e).sum()
    };
    sum * sop.scale(p)
}

/// Applies the operator at every point.
pub fn evaluate_surface_operator(field: &[f64], sop: &SurfaceOperator) -> Result<Vec<f64>> {
    if field.len() != sop.len() {
        return Err(Error::InvalidInput(format!(
            "field of length {} for an operator on {} points",
            field.len(),
            sop.len()
        )));
    }
    Ok((0..sop.len())
        .into_par_iter()
        .map(|p| evaluate_surface_operator_at(field, sop, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::{generate_circle, generate_fibonacci_sphere};

    fn circle_params(n: usize) -> SurfaceParams {
        let dn = 3.0 / (n as f64 - 1.0);
        SurfaceParams::new(2, 4.1 * dn)
            .with_delta_n(dn)
            .with_layers(4)
    }

    #[test]
    fn laplacian_of_constant_is_exactly_zero() {
        let cloud = generate_fibonacci_sphere(500).unwrap();
        let dn = 0.8 / (500f64.cbrt() - 1.0);
        let params = SurfaceParams::new(2, 2.9 * dn)
            .with_delta_n(dn)
            .with_layers(2);
        let lb =
            build_surface_operator(&cloud, &DifferentialOperator::laplacian(3), &params).unwrap();
        let out = evaluate_surface_operator(&vec![2.5; 500], &lb).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let cloud = generate_circle(128).unwrap();
        for axis in 0..2 {
            let g = build_surface_operator(
                &cloud,
                &DifferentialOperator::partial(2, axis),
                &circle_params(128),
            )
            .unwrap();
            let out = evaluate_surface_operator(&vec![1.0; 128], &g).unwrap();
            for (p, v) in out.iter().enumerate() {
                let (_, eta) = g.row(p);
                let scale =
                    g.scale(p) * (eta.iter().map(|e| e.abs()).sum::<f64>() + g.self_value(p).abs());
                assert!(v.abs() <= 1e-8 * scale, "{v} at {p}");
            }
        }
    }

    #[test]
    fn circle_laplace_beltrami_of_sine() {
        let n = 512;
        let cloud = generate_circle(n).unwrap();
        let lb = build_surface_operator(
            &cloud,
            &DifferentialOperator::laplacian(2),
            &circle_params(n),
        )
        .unwrap();
        let f: Vec<f64> = cloud.positions().iter().map(|x| x.y).collect();
        let out = evaluate_surface_operator(&f, &lb).unwrap();
        let err = out
            .iter()
            .zip(&f)
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-2, "max error {err}");
    }

    #[test]
    fn ghost_rows_are_empty() {
        let cloud = generate_circle(64).unwrap();
        let mut labels = vec![PointLabel::Interior; 64];
        labels[5] = PointLabel::Ghost;
        let cloud = cloud.relabel(labels).unwrap();
        let lb = build_surface_operator(
            &cloud,
            &DifferentialOperator::laplacian(2),
            &circle_params(64),
        )
        .unwrap();
        assert!(lb.row(5).0.is_empty());
        assert_eq!(lb.epsilon(5), None);
        let f: Vec<f64> = (0..64).map(|i| i as f64).collect();
        assert_eq!(evaluate_surface_operator(&f, &lb).unwrap()[5], 0.0);
        assert!(lb.row(6).0.contains(&5));
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let cloud = generate_circle(64).unwrap();
        let err = build_surface_operator(
            &cloud,
            &DifferentialOperator::laplacian(3),
            &circle_params(64),
        );
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }
}
