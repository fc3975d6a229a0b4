//! Surface DC-PSE: operators on curves and surfaces built from embedding-space
//! kernels over a virtual normal extension of the point cloud.

mod curvature;
mod neighborhood;
mod operator;

pub use curvature::{curvatures, shape_tensor, Curvature, IMAGINARY_TOL};
pub use neighborhood::{build_surface_neighborhood, SurfaceNeighborhood, SurfaceParams};
pub use operator::{
    build_surface_operator, build_surface_operators, evaluate_surface_operator,
    evaluate_surface_operator_at, SurfaceOperator,
};
