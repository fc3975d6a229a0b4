//! Implicit assembly with Dirichlet rows, mirrored ghost points for no-flux
//! boundaries, and explicit Runge–Kutta time stepping.

mod dopri5;
mod ghosts;
mod system;

pub use dopri5::{dopri5_integrate, Dopri5Stats};
pub use ghosts::{build_ghosts, sync_ghosts, GhostMap};
pub use system::{assemble_poisson, surface_operator_matrix, SparseSystem};
