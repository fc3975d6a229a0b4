//! Point-cloud data model, neighbor search and analytic surface generators.

mod cloud;
mod generators;
mod neighbors;

pub use cloud::{PointLabel, SurfacePointCloud, Vec3, COINCIDENT_REL_TOL, UNIT_NORMAL_TOL};
pub use generators::{
    generate_bump_surface, generate_circle, generate_ellipsoid, generate_fibonacci_sphere, zeta,
    zeta_prime, BumpSurfaceSpec, BUMP_SPACING_RATIO, GOLDEN_ANGLE, ZETA_CUTOFF,
};
pub use neighbors::{
    average_spacing, build_neighbor_list, fixed_radius_neighbors, mean_average_spacing,
    NeighborList,
};

pub(crate) use neighbors::mean_l1_distance;
