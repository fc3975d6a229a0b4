//! Discretization-corrected particle strength exchange on point clouds
//! sampling curves and surfaces.

pub mod bench;
pub mod dcpse;
pub mod error;
pub mod linalg;
pub mod pde;
pub mod pointcloud;
pub mod surface;

pub use error::{Error, Result};

/// The README and every chapter of the guide in `book/` are compiled and run
/// as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/point-clouds.md")]
    struct PointClouds;
    #[doc = include_str!("../../../book/src/kernels.md")]
    struct Kernels;
    #[doc = include_str!("../../../book/src/surface-operators.md")]
    struct SurfaceOperators;
    #[doc = include_str!("../../../book/src/curvature.md")]
    struct Curvature;
    #[doc = include_str!("../../../book/src/implicit.md")]
    struct Implicit;
    #[doc = include_str!("../../../book/src/diffusion.md")]
    struct Diffusion;
    #[doc = include_str!("../../../book/src/studies.md")]
    struct Studies;
}
