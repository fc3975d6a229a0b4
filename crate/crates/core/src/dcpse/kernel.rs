//! DC-PSE kernels: polynomials windowed by a Gaussian whose coefficients are
//! fixed per point by the discrete moment conditions.
//!
//! With scaled offsets `z_q = (x_p - x_q) / ε` the kernel is
//! `η(z) = (Σ_γ a_γ z^γ) exp(-|z|²)` and the coefficients solve
//!
//! ```text
//! Σ_γ a_γ Σ_q z_q^(β+γ) exp(-|z_q|²) = (-1)^|α| α!   if β is a term of the operator
//!                                    = 0              otherwise
//! ```
//!
//! for every `β` in [`basis_multiindices`]. Applying the kernel as
//! `ε^-|α| Σ_q (f_q ± f_p) η(z_q)` then reproduces `D^α f` to order `r`.

use std::sync::Arc;

use super::multiindex::{basis_multiindices, DifferentialOperator, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::pointcloud::Vec3;

/// Monomials `z^γ` of a kernel basis with a fast batched evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    indices: Vec<MultiIndex>,
    exps: Vec<[usize; 3]>,
    max_degree: usize,
    order: u32,
    r: u32,
}

impl MonomialBasis {
    pub fn new(order: u32, r: u32, dim: usize) -> Result<Self> {
        let indices = basis_multiindices(order, r, dim)?;
        let exps = indices
            .iter()
            .map(|m| m.padded().map(|e| e as usize))
            .collect();
        Ok(Self {
            indices,
            exps,
            max_degree: (order + r - 1) as usize,
            order,
            r,
        })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Writes `z^γ` for every basis entry into `out`.
    pub fn eval_into(&self, z: &Vec3, out: &mut [f64]) {
        const MAX: usize = 16;
        debug_assert!(self.max_degree < MAX);
        let mut pow = [[1.0f64; MAX]; 3];
        for (axis, table) in pow.iter_mut().enumerate() {
            for k in 1..=self.max_degree {
                table[k] = table[k - 1] * z[axis];
            }
        }
        for (o, e) in out.iter_mut().zip(&self.exps) {
            *o = pow[0][e[0]] * pow[1][e[1]] * pow[2][e[2]];
        }
    }
}

/// Per-point kernel: basis, solved coefficients and the smoothing length.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoefficients {
    basis: Arc<MonomialBasis>,
    coeffs: Vec<f64>,
    epsilon: f64,
    cutoff: f64,
}

impl KernelCoefficients {
    pub fn basis(&self) -> &[MultiIndex] {
        self.basis.indices()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Support radius in unscaled length units.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// `|α|` of the operator the kernel was built for.
    pub fn order(&self) -> u32 {
        self.basis.order
    }

    /// Requested convergence order.
    pub fn r(&self) -> u32 {
        self.basis.r
    }

    pub fn is_odd(&self) -> bool {
        self.basis.order % 2 == 1
    }

    /// Kernel value at an unscaled offset `x_p - x_q`; exactly zero outside the cutoff.
    pub fn evaluate(&self, offset: &Vec3) -> f64 {
        if offset.norm() > self.cutoff {
            return 0.0;
        }
        self.evaluate_scaled(&(offset / self.epsilon))
    }

    /// Kernel value at an already scaled offset `z = (x_p - x_q) / ε`.
    pub fn evaluate_scaled(&self, z: &Vec3) -> f64 {
        let mut mono = vec![0.0; self.basis.len()];
        self.basis.eval_into(z, &mut mono);
        let poly: f64 = mono.iter().zip(&self.coeffs).map(|(m, a)| m * a).sum();
        poly * (-z.norm_squared()).exp()
    }

    /// Kernel values at many scaled offsets, reusing scratch storage.
    pub fn evaluate_scaled_many(&self, zs: &[Vec3]) -> Vec<f64> {
        let mut mono = vec![0.0; self.basis.len()];
        zs.iter()
            .map(|z| {
                self.basis.eval_into(z, &mut mono);
                let poly: f64 = mono.iter().zip(&self.coeffs).map(|(m, a)| m * a).sum();
                poly * (-z.norm_squared()).exp()
            })
            .collect()
    }
}

/// Builds the kernel of `op` at a point from its neighbor offsets `x_p - x_q`.
pub fn build_kernel(
    offsets: &[Vec3],
    op: &DifferentialOperator,
    epsilon: f64,
    r: u32,
    cutoff: f64,
) -> Result<KernelCoefficients> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let scaled: Vec<Vec3> = offsets.iter().map(|d| d / epsilon).collect();
    let basis = Arc::new(MonomialBasis::new(op.order(), r, op.dim())?);
    Ok(build_kernels_scaled(&scaled, &[op], &basis, epsilon, cutoff)?.remove(0))
}

/// Builds kernels for several operators of one common order that share the
/// same neighborhood, factorizing the moment matrix once.
///
/// `scaled` holds the offsets already divided by `epsilon`.
pub fn build_kernels_scaled(
    scaled: &[Vec3],
    ops: &[&DifferentialOperator],
    basis: &Arc<MonomialBasis>,
    epsilon: f64,
    cutoff: f64,
) -> Result<Vec<KernelCoefficients>> {
    if scaled.is_empty() {
        return Err(Error::InvalidInput("kernel neighborhood is empty".into()));
    }
    if ops.iter().any(|op| op.order() != basis.order) {
        return Err(Error::InvalidInput(
            "all operators sharing a kernel basis must have its order".into(),
        ));
    }
    let n = basis.len();
    let mut moments = vec![0.0; n * n];
    let mut mono = vec![0.0; n];
    for z in scaled {
        basis.eval_into(z, &mut mono);
        let w = (-z.norm_squared()).exp();
        for i in 0..n {
            let wi = w * mono[i];
            let row = &mut moments[i * n..(i + 1) * n];
            for j in i..n {
                row[j] += wi * mono[j];
            }
        }
    }
    // Symmetric diagonal scaling so the pivot test measures rank, not units.
    // A monomial vanishing on every point keeps unit scale and is caught by
    // the consistency check of the rank-deficient path.
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = moments[i * n + i];
            if d > f64::MIN_POSITIVE {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = moments[i * n + j] * scale[i] * scale[j];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }

    let sign = if basis.order % 2 == 1 { -1.0 } else { 1.0 };
    let scaled_rhs = |op: &DifferentialOperator| -> Vec<f64> {
        basis
            .indices()
            .iter()
            .zip(&scale)
            .map(|(beta, s)| {
                let hits = op.terms().iter().filter(|t| *t == beta);
                hits.map(|t| sign * t.factorial()).sum::<f64>() * s
            })
            .collect()
    };
    let solutions: Vec<Vec<f64>> = match m.clone().lu() {
        Ok(lu) => ops.iter().map(|op| lu.solve(&scaled_rhs(op))).collect(),
        Err(Error::SingularMatrix { pivot_ratio }) => {
            let pinv = RankDeficientSolver::new(&m);
            ops.iter()
                .map(|op| {
                    pinv.solve_consistent(&scaled_rhs(op))
                        .ok_or(Error::DegenerateDistribution {
                            point: None,
                            pivot_ratio,
                        })
                })
                .collect::<Result<_>>()?
        }
        Err(other) => return Err(other),
    };

    Ok(solutions
        .into_iter()
        .map(|y| KernelCoefficients {
            basis: Arc::clone(basis),
            coeffs: y.iter().zip(&scale).map(|(y, s)| y * s).collect(),
            epsilon,
            cutoff,
        })
        .collect())
}

/// Minimum-norm solutions of a singular symmetric moment system.
///
/// When the neighborhood has fewer independent points than basis monomials
/// (e.g. the compact three-point stencil in 1D) the coefficients are not
/// unique, but every solution yields the same kernel values on the points, so
/// the stencil is well defined as long as the conditions are satisfiable.
struct RankDeficientSolver {
    matrix: DenseMatrix,
    eigen: nalgebra::SymmetricEigen<f64, nalgebra::Dyn>,
    cutoff: f64,
}

impl RankDeficientSolver {
    /// Moment conditions must hold to this relative accuracy.
    const CONSISTENCY_TOL: f64 = 1e-10;

    fn new(m: &DenseMatrix) -> Self {
        let n = m.rows();
        let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
        let eigen = dm.symmetric_eigen();
        let largest = eigen.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        Self {
            matrix: m.clone(),
            eigen,
            cutoff: crate::linalg::PIVOT_RATIO_THRESHOLD * largest,
        }
    }

    fn solve_consistent(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let q = &self.eigen.eigenvectors;
        let b = nalgebra::DVector::from_column_slice(rhs);
        let mut coef = q.transpose() * &b;
        for (c, lambda) in coef.iter_mut().zip(self.eigen.eigenvalues.iter()) {
            *c = if lambda.abs() > self.cutoff {
                *c / lambda
            } else {
                0.0
            };
        }
        let x: Vec<f64> = (q * coef).iter().copied().collect();
        let mx = self.matrix.matvec(&x);
        let resid = mx
            .iter()
            .zip(rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        (resid <= Self::CONSISTENCY_TOL * scale).then_some(x)
    }
}

/// `ε^-|α| Σ_q (f_q ± f_p) η((x_p - x_q)/ε)`; `+` for odd `|α|`, `-` for even.
pub fn apply_operator(
    field: &[f64],
    p: usize,
    kernel: &KernelCoefficients,
    nbrs: &[usize],
    positions: &[Vec3],
) -> f64 {
    let fp = field[p];
    let sign = if kernel.is_odd() { 1.0 } else { -1.0 };
    let sum: f64 = nbrs
        .iter()
        .map(|&q| (field[q] + sign * fp) * kernel.evaluate(&(positions[p] - positions[q])))
        .sum();
    sum / kernel.epsilon().powi(kernel.order() as i32)
}
