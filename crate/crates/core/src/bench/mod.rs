//! Benchmark drivers, closed-form references, error analysis and file I/O.

mod analysis;
mod experiments;
mod io;
mod normals;
pub mod reference;

pub use analysis::{
    error_norms, fit_convergence_order, fit_slope, ConvergenceOrder, ConvergenceRecord,
};
pub use experiments::{
    bump_probes, run_bump_diffusion, run_bunny_curvature, run_circle_lb, run_circle_poisson,
    run_ellipsoid_curvature, run_ellipsoid_curvature_with_axes, run_sphere_lb, run_sphere_poisson,
    BumpRun, CurvatureLevel, Experiment, ExperimentConfig, PoissonSolve, BUMP_SPACING,
    ELLIPSOID_AXES, SPHERE_GMRES_RESTART,
};
pub use io::{
    load_point_cloud, save_point_cloud, write_convergence_csv, write_point_values_csv,
    write_time_series_csv, CloudFormat, LoadedCloud, TimeSample, CONVERGENCE_HEADER,
    NORMAL_RENORMALIZE_TOL, TIME_SERIES_HEADER,
};
pub use normals::{estimate_normals, mean_nearest_neighbor_distance};
