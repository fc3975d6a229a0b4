//! Mean and Gauss curvature from the embedded shape tensor `∇_S n`.

use nalgebra::Matrix3;

use super::neighborhood::SurfaceParams;
use super::operator::{build_surface_operators, evaluate_surface_operator};
use crate::dcpse::DifferentialOperator;
use crate::error::{Error, Result};
use crate::pointcloud::SurfacePointCloud;

/// Imaginary parts below this fraction of `‖∇_S n‖_F` count as real.
pub const IMAGINARY_TOL: f64 = 1e-6;

/// Per-point curvature pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    /// `½ tr(∇_S n)`; `+1` on the unit sphere with outward normals.
    pub mean: f64,
    /// Product of the two eigenvalues of largest magnitude.
    pub gauss: f64,
}

/// `∇_S n` at every point: row `i` is the surface gradient of `n_i`.
pub fn shape_tensor(
    cloud: &SurfacePointCloud,
    params: &SurfaceParams,
) -> Result<Vec<Matrix3<f64>>> {
    if cloud.dim() != 3 {
        return Err(Error::InvalidInput(
            "the shape tensor needs a surface in 3D".into(),
        ));
    }
    let ops: Vec<DifferentialOperator> = (0..3)
        .map(|j| DifferentialOperator::partial(3, j))
        .collect();
    let grads = build_surface_operators(cloud, &ops, params)?;
    let mut shape = vec![Matrix3::zeros(); cloud.len()];
    for i in 0..3 {
        let component: Vec<f64> = cloud.normals().iter().map(|n| n[i]).collect();
        for (j, g) in grads.iter().enumerate() {
            for (m, v) in shape
                .iter_mut()
                .zip(evaluate_surface_operator(&component, g)?)
            {
                m[(i, j)] = v;
            }
        }
    }
    Ok(shape)
}

/// Mean and Gauss curvature of each shape tensor.
///
/// Discretization error makes `∇_S n` slightly non-symmetric, so near umbilic
/// points the two tangential eigenvalues may come out as a complex-conjugate
/// pair; their product is then `|λ|²`. Only a complex eigenvalue among the
/// smallest in magnitude (the normal direction) is rejected.
pub fn curvatures(shape: &[Matrix3<f64>]) -> Result<Vec<Curvature>> {
    shape
        .iter()
        .enumerate()
        .map(|(point, m)| {
            let mut eig: Vec<_> = m.complex_eigenvalues().iter().copied().collect();
            eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
            let tol = IMAGINARY_TOL * m.norm();
            if eig[2].im.abs() > tol {
                return Err(Error::IllConditionedShape { point });
            }
            Ok(Curvature {
                mean: 0.5 * m.trace(),
                gauss: (eig[0] * eig[1]).re,
            })
        })
        .collect()
}
