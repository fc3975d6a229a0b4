//! Dense LU for the per-point moment systems; CSR storage and restarted GMRES
//! for the implicit surface problems.

mod dense;
mod gmres;
mod sparse;

pub use dense::{lu_solve, DenseMatrix, LuDecomposition, PIVOT_RATIO_THRESHOLD};
pub use gmres::{gmres, GmresConfig, GmresSolution, LinearOperator};
pub use sparse::SparseMatrix;
