//! Drivers for the convergence, curvature and diffusion studies.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::analysis::{error_norms, ConvergenceRecord};
use super::io::TimeSample;
use super::normals::mean_nearest_neighbor_distance;
use super::reference;
use crate::dcpse::DifferentialOperator;
use crate::error::{Error, Result};
use crate::linalg::{gmres, GmresConfig};
use crate::pde::{assemble_poisson, build_ghosts, dopri5_integrate, sync_ghosts, Dopri5Stats};
use crate::pointcloud::{
    build_neighbor_list, generate_bump_surface, generate_circle, generate_ellipsoid,
    generate_fibonacci_sphere, mean_average_spacing, BumpSurfaceSpec, SurfacePointCloud, Vec3,
};
use crate::surface::{
    build_surface_operator, curvatures, evaluate_surface_operator, evaluate_surface_operator_at,
    shape_tensor, Curvature, SurfaceParams,
};

/// Ellipsoid semi-axes of the curvature study.
pub const ELLIPSOID_AXES: (f64, f64, f64) = (1.0, 0.8, 0.75);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    CircleLb,
    CirclePoisson,
    SphereLb,
    SpherePoisson,
    EllipsoidCurvature,
    BunnyCurvature,
    BumpDiffusion,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::CircleLb,
        Experiment::CirclePoisson,
        Experiment::SphereLb,
        Experiment::SpherePoisson,
        Experiment::EllipsoidCurvature,
        Experiment::BunnyCurvature,
        Experiment::BumpDiffusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::CircleLb => "circle-lb",
            Experiment::CirclePoisson => "circle-poisson",
            Experiment::SphereLb => "sphere-lb",
            Experiment::SpherePoisson => "sphere-poisson",
            Experiment::EllipsoidCurvature => "ellipsoid-curvature",
            Experiment::BunnyCurvature => "bunny-curvature",
            Experiment::BumpDiffusion => "bump-diffusion",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown experiment '{s}'")))
    }
}

/// Every knob of a study. [`ExperimentConfig::defaults`] gives the standard
/// parameters of each experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Point counts, ascending.
    pub resolutions: Vec<usize>,
    pub order: u32,
    /// `r_c = rc_factor × δn`.
    pub rc_factor: f64,
    /// Fixed δn; `None` applies the experiment's rule for each resolution.
    /// For the bump this is the grid spacing `h` (and δn = h).
    pub dn: Option<f64>,
    pub n_n: usize,
    pub eps_factor: f64,
    pub gmres: GmresConfig,
    /// Bump height.
    pub alpha: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Ghosts are placed within this multiple of `r_c` from the edges.
    pub ghost_band_factor: f64,
    /// Probe output interval of the diffusion run.
    pub sample_interval: f64,
}

/// Krylov dimension of the sphere Poisson solves.
pub const SPHERE_GMRES_RESTART: usize = 100;

/// Grid spacing of the bump benchmark.
pub const BUMP_SPACING: f64 = 0.03125;

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            resolutions: Vec::new(),
            order: 2,
            rc_factor: 2.9,
            dn: None,
            n_n: 2,
            eps_factor: 1.0,
            gmres: GmresConfig::default(),
            alpha: 0.0,
            dt: 1e-4,
            t_final: 1.0,
            ghost_band_factor: 2.0,
            sample_interval: 0.01,
        };
        match experiment {
            Experiment::CircleLb | Experiment::CirclePoisson => Self {
                resolutions: vec![256, 512, 1024, 2048],
                rc_factor: 4.1,
                n_n: 4,
                ..base
            },
            Experiment::SphereLb => Self {
                resolutions: vec![1000, 4000, 16000, 40000],
                ..base
            },
            // Restarting every 30 iterations stalls near 1e-9 on the
            // fourth-order systems.
            Experiment::SpherePoisson => Self {
                resolutions: vec![1000, 4000, 16000, 40000],
                gmres: GmresConfig {
                    restart: SPHERE_GMRES_RESTART,
                    ..GmresConfig::default()
                },
                ..base
            },
            Experiment::EllipsoidCurvature => Self {
                resolutions: vec![2000, 8000, 32258],
                ..base
            },
            Experiment::BunnyCurvature => base,
            Experiment::BumpDiffusion => Self {
                dn: Some(BUMP_SPACING),
                n_n: 3,
                ..base
            },
        }
    }

    /// δn for a cloud of `n_points` points.
    pub fn delta_n(&self, n_points: usize) -> f64 {
        if let Some(dn) = self.dn {
            return dn;
        }
        let n = n_points as f64;
        match self.experiment {
            Experiment::CircleLb | Experiment::CirclePoisson => 3.0 / (n - 1.0),
            Experiment::SphereLb | Experiment::SpherePoisson => 0.8 / (n.cbrt() - 1.0),
            Experiment::EllipsoidCurvature => 3.0 / (n.sqrt() - 1.0),
            Experiment::BunnyCurvature | Experiment::BumpDiffusion => BUMP_SPACING,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.order < 1 {
            return bad("order must be at least 1".into());
        }
        if self.n_n < 1 {
            return bad("N_n must be at least 1".into());
        }
        for (name, v) in [
            ("rc-factor", self.rc_factor),
            ("eps-factor", self.eps_factor),
            ("dt", self.dt),
            ("ghost band", self.ghost_band_factor),
            ("sample interval", self.sample_interval),
        ] {
            if !positive(v) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("tfinal must be non-negative, got {}", self.t_final));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be non-negative, got {}", self.alpha));
        }
        if let Some(dn) = self.dn {
            if !positive(dn) {
                return bad(format!("dn must be positive, got {dn}"));
            }
        }
        if self.resolutions.windows(2).any(|w| w[0] >= w[1]) {
            return bad("resolutions must be strictly ascending".into());
        }
        Ok(())
    }

    /// Operator parameters at a resolution of `n_points`.
    pub fn surface_params(&self, n_points: usize) -> SurfaceParams {
        let dn = self.delta_n(n_points);
        SurfaceParams::new(self.order, self.rc_factor * dn)
            .with_delta_n(dn)
            .with_layers(self.n_n)
            .with_eps_factor(self.eps_factor)
    }

    fn record(
        &self,
        name: &str,
        cloud: &SurfacePointCloud,
        params: &SurfaceParams,
    ) -> Result<ConvergenceRecord> {
        let nbrs = build_neighbor_list(cloud, params.r_c)?;
        Ok(ConvergenceRecord {
            experiment: name.to_owned(),
            n_points: cloud.len(),
            h: mean_average_spacing(cloud, &nbrs)?,
            order_r: self.order,
            rc_factor: self.rc_factor,
            dn: params.delta_n.unwrap_or(f64::NAN),
            n_n: self.n_n,
            eps_factor: self.eps_factor,
            l2: f64::NAN,
            linf: f64::NAN,
            wall_time_s: 0.0,
        })
    }

    fn expect(&self, allowed: &[Experiment]) -> Result<()> {
        self.validate()?;
        if allowed.contains(&self.experiment) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "configuration for {} passed to a {} driver",
                self.experiment, allowed[0]
            )))
        }
    }
}

fn circle_cloud(n: usize) -> Result<SurfacePointCloud> {
    generate_circle(n)
}

fn sphere_cloud(n: usize) -> Result<SurfacePointCloud> {
    generate_fibonacci_sphere(n)
}

/// Laplace–Beltrami of a field against its closed form over all resolutions.
fn lb_study(
    cfg: &ExperimentConfig,
    make: fn(usize) -> Result<SurfacePointCloud>,
    f: fn(&Vec3) -> f64,
    lap_f: fn(&Vec3) -> f64,
) -> Result<Vec<ConvergenceRecord>> {
    cfg.resolutions
        .iter()
        .map(|&n| {
            let cloud = make(n)?;
            let params = cfg.surface_params(n);
            let mut rec = cfg.record(cfg.experiment.name(), &cloud, &params)?;
            let start = Instant::now();
            let lb = build_surface_operator(
                &cloud,
                &DifferentialOperator::laplacian(cloud.dim()),
                &params,
            )?;
            let field: Vec<f64> = cloud.positions().iter().map(f).collect();
            let numeric = evaluate_surface_operator(&field, &lb)?;
            rec.wall_time_s = start.elapsed().as_secs_f64();
            let exact: Vec<f64> = cloud.positions().iter().map(lap_f).collect();
            (rec.l2, rec.linf) = error_norms(&numeric, &exact)?;
            log::info!(
                "{} N_p={} h={:.4e} Linf={:.4e}",
                rec.experiment,
                n,
                rec.h,
                rec.linf
            );
            Ok(rec)
        })
        .collect()
}

/// `Δ_S (sin θ + cos θ)` on the unit circle.
pub fn run_circle_lb(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    cfg.expect(&[Experiment::CircleLb])?;
    lb_study(
        cfg,
        circle_cloud,
        reference::circle_trig,
        reference::circle_trig_laplacian,
    )
}

/// `Δ_S Y_4^0` on the unit sphere.
pub fn run_sphere_lb(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    cfg.expect(&[Experiment::SphereLb])?;
    lb_study(cfg, sphere_cloud, reference::y40, reference::y40_laplacian)
}

/// Result of one implicit solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSolve {
    pub record: ConvergenceRecord,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn poisson_study(
    cfg: &ExperimentConfig,
    make: fn(usize) -> Result<SurfacePointCloud>,
    solution: fn(&Vec3) -> f64,
    rhs: fn(&Vec3) -> f64,
    pinned: fn(&SurfacePointCloud, f64) -> Vec<usize>,
) -> Result<Vec<PoissonSolve>> {
    cfg.resolutions
        .iter()
        .map(|&n| {
            let cloud = make(n)?;
            let params = cfg.surface_params(n);
            let mut rec = cfg.record(cfg.experiment.name(), &cloud, &params)?;
            let start = Instant::now();
            let lb = build_surface_operator(
                &cloud,
                &DifferentialOperator::laplacian(cloud.dim()),
                &params,
            )?;
            let rhs_field: Vec<f64> = cloud.positions().iter().map(rhs).collect();
            let dirichlet: Vec<(usize, f64)> = pinned(&cloud, rec.h)
                .into_iter()
                .map(|p| (p, solution(&cloud.position(p))))
                .collect();
            let system = assemble_poisson(&lb, &rhs_field, &dirichlet)?;
            let sol = gmres(&system.matrix, &system.rhs, &cfg.gmres)?;
            rec.wall_time_s = start.elapsed().as_secs_f64();
            let mut is_pinned = vec![false; n];
            dirichlet.iter().for_each(|&(p, _)| is_pinned[p] = true);
            let (numeric, exact): (Vec<f64>, Vec<f64>) = (0..n)
                .filter(|&p| !is_pinned[p])
                .map(|p| (sol.x[p], solution(&cloud.position(p))))
                .unzip();
            (rec.l2, rec.linf) = error_norms(&numeric, &exact)?;
            log::info!(
                "{} N_p={} h={:.4e} Linf={:.4e} gmres iterations={} residual={:.2e}",
                rec.experiment,
                n,
                rec.h,
                rec.linf,
                sol.iterations,
                sol.relative_residual
            );
            Ok(PoissonSolve {
                record: rec,
                iterations: sol.iterations,
                relative_residual: sol.relative_residual,
            })
        })
        .collect()
}

/// The point closest to `(1, 0)`.
fn circle_pin(cloud: &SurfacePointCloud, _h: f64) -> Vec<usize> {
    let target = Vec3::new(1.0, 0.0, 0.0);
    let best = (0..cloud.len())
        .min_by(|&a, &b| {
            let da = (cloud.position(a) - target).norm();
            let db = (cloud.position(b) - target).norm();
            da.total_cmp(&db)
        })
        .unwrap_or(0);
    vec![best]
}

/// The band `|x| < h / 2` around the great circle in the y–z plane.
fn sphere_band(cloud: &SurfacePointCloud, h: f64) -> Vec<usize> {
    (0..cloud.len())
        .filter(|&p| cloud.position(p).x.abs() < 0.5 * h)
        .collect()
}

/// `Δ_S f = -4 sin 2θ` on the unit circle with `f(1, 0) = 0`.
pub fn run_circle_poisson(cfg: &ExperimentConfig) -> Result<Vec<PoissonSolve>> {
    cfg.expect(&[Experiment::CirclePoisson])?;
    poisson_study(
        cfg,
        circle_cloud,
        reference::circle_poisson_solution,
        reference::circle_poisson_rhs,
        circle_pin,
    )
}

/// `Δ_S f = -20 Y_4^0` on the unit sphere with `f = Y_4^0` on a great circle.
pub fn run_sphere_poisson(cfg: &ExperimentConfig) -> Result<Vec<PoissonSolve>> {
    cfg.expect(&[Experiment::SpherePoisson])?;
    poisson_study(
        cfg,
        sphere_cloud,
        reference::y40,
        reference::y40_laplacian,
        sphere_band,
    )
}

/// Errors of the ellipsoid curvature study at one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureLevel {
    pub mean: ConvergenceRecord,
    pub gauss: ConvergenceRecord,
    /// `(min, max)` of `|H - H_exact| / |H_exact|` over all points.
    pub mean_relative: (f64, f64),
    pub gauss_relative: (f64, f64),
}

fn relative_range(numeric: &[f64], exact: &[f64]) -> (f64, f64) {
    numeric
        .iter()
        .zip(exact)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), e| {
            (lo.min(e), hi.max(e))
        })
}

/// Mean and Gauss curvature of an ellipsoid with the given semi-axes.
pub fn run_ellipsoid_curvature_with_axes(
    cfg: &ExperimentConfig,
    axes: (f64, f64, f64),
) -> Result<Vec<CurvatureLevel>> {
    cfg.expect(&[Experiment::EllipsoidCurvature])?;
    let (a, b, c) = axes;
    cfg.resolutions
        .iter()
        .map(|&n| {
            let cloud = generate_ellipsoid(a, b, c, n)?;
            let params = cfg.surface_params(n);
            let base = cfg.record("", &cloud, &params)?;
            let start = Instant::now();
            let curv = curvatures(&shape_tensor(&cloud, &params)?)?;
            let wall = start.elapsed().as_secs_f64();
            let h: Vec<f64> = curv.iter().map(|k| k.mean).collect();
            let k: Vec<f64> = curv.iter().map(|k| k.gauss).collect();
            let h_exact: Vec<f64> = cloud
                .positions()
                .iter()
                .map(|x| reference::ellipsoid_mean_curvature(a, b, c, x))
                .collect();
            let k_exact: Vec<f64> = cloud
                .positions()
                .iter()
                .map(|x| reference::ellipsoid_gauss_curvature(a, b, c, x))
                .collect();
            let mut mean = base.clone();
            mean.experiment = "ellipsoid-curvature-H".into();
            mean.wall_time_s = wall;
            (mean.l2, mean.linf) = error_norms(&h, &h_exact)?;
            let mut gauss = base;
            gauss.experiment = "ellipsoid-curvature-K".into();
            gauss.wall_time_s = wall;
            (gauss.l2, gauss.linf) = error_norms(&k, &k_exact)?;
            log::info!(
                "ellipsoid N_p={n} Linf(H)={:.3e} Linf(K)={:.3e}",
                mean.linf,
                gauss.linf
            );
            Ok(CurvatureLevel {
                mean_relative: relative_range(&h, &h_exact),
                gauss_relative: relative_range(&k, &k_exact),
                mean,
                gauss,
            })
        })
        .collect()
}

/// The standard ellipsoid study (`a = 1, b = 0.8, c = 0.75`).
pub fn run_ellipsoid_curvature(cfg: &ExperimentConfig) -> Result<Vec<CurvatureLevel>> {
    run_ellipsoid_curvature_with_axes(cfg, ELLIPSOID_AXES)
}

/// Curvatures of an arbitrary cloud. Without a fixed δn, the mean
/// nearest-neighbor distance is used.
pub fn run_bunny_curvature(
    cloud: &SurfacePointCloud,
    cfg: &ExperimentConfig,
) -> Result<Vec<Curvature>> {
    cfg.expect(&[Experiment::BunnyCurvature])?;
    let mut cfg = cfg.clone();
    if cfg.dn.is_none() {
        cfg.dn = Some(mean_nearest_neighbor_distance(cloud.positions())?);
    }
    let params = cfg.surface_params(cloud.len());
    curvatures(&shape_tensor(cloud, &params)?)
}

/// Probe locations of the diffusion benchmark (parameter-plane coordinates).
pub fn bump_probes() -> [[f64; 2]; 2] {
    let s = 0.25 * std::f64::consts::SQRT_2;
    [[-0.5, 0.0], [-s, s]]
}

/// Output of the diffusion benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpRun {
    pub samples: Vec<TimeSample>,
    /// Surface points used as probes.
    pub probe_points: [usize; 2],
    /// In-plane distance from each probe to its surface point.
    pub probe_distance: [f64; 2],
    pub n_points: usize,
    pub n_ghosts: usize,
    pub stats: Dopri5Stats,
    pub wall_time_s: f64,
}

impl BumpRun {
    /// Largest sampled value at probe `k`.
    pub fn peak(&self, k: usize) -> f64 {
        self.samples
            .iter()
            .map(|s| if k == 0 { s.f_at_x0 } else { s.f_at_x1 })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `∂_t f = Δ_S f` on the bump surface with no-flux edges.
pub fn run_bump_diffusion(cfg: &ExperimentConfig) -> Result<BumpRun> {
    cfg.expect(&[Experiment::BumpDiffusion])?;
    let start = Instant::now();
    let spec = BumpSurfaceSpec::new(cfg.alpha);
    let h = cfg.delta_n(0);
    let surface = generate_bump_surface(&spec, h)?;
    let params = cfg.surface_params(surface.len());
    let (cloud, ghosts) = build_ghosts(&surface, &spec, cfg.ghost_band_factor * params.r_c)?;
    let lb = build_surface_operator(&cloud, &DifferentialOperator::laplacian(3), &params)?;
    log::info!(
        "bump alpha={} N_p={} ghosts={} operator built in {:.1}s",
        cfg.alpha,
        surface.len(),
        ghosts.len(),
        start.elapsed().as_secs_f64()
    );

    let probes = bump_probes();
    let mut probe_points = [0; 2];
    let mut probe_distance = [0.0; 2];
    for (k, pr) in probes.iter().enumerate() {
        let (idx, d) = (0..surface.len())
            .map(|p| {
                let x = surface.position(p);
                (p, (x.x - pr[0]).hypot(x.y - pr[1]))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("bump surface is never empty");
        probe_points[k] = idx;
        probe_distance[k] = d;
    }

    let initial: Vec<f64> = cloud
        .positions()
        .iter()
        .map(|x| spec.initial_condition(x))
        .collect();
    let every = ((cfg.sample_interval / cfg.dt).round() as usize).max(1);
    let mut samples = Vec::new();
    let (_, stats) = dopri5_integrate(
        &initial,
        cfg.dt,
        cfg.t_final,
        |_, y, out| {
            out.par_iter_mut()
                .enumerate()
                .for_each(|(p, o)| *o = evaluate_surface_operator_at(y, &lb, p));
        },
        |y| sync_ghosts(y, &ghosts),
        |step, t, y| {
            if step % every == 0 || (t - cfg.t_final).abs() < 1e-12 {
                samples.push(TimeSample {
                    t,
                    f_at_x0: y[probe_points[0]],
                    f_at_x1: y[probe_points[1]],
                    alpha: cfg.alpha,
                });
            }
        },
    )?;
    // The final step may coincide with a regular sample.
    samples.dedup_by(|a, b| (a.t - b.t).abs() < 1e-12);
    Ok(BumpRun {
        samples,
        probe_points,
        probe_distance,
        n_points: surface.len(),
        n_ghosts: ghosts.len(),
        stats,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
