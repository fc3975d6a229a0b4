use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use sdcpse::bench::{
    estimate_normals, fit_convergence_order, load_point_cloud, run_bump_diffusion,
    run_bunny_curvature, run_circle_lb, run_circle_poisson, run_ellipsoid_curvature, run_sphere_lb,
    run_sphere_poisson, write_convergence_csv, write_point_values_csv, write_time_series_csv,
    CloudFormat, ConvergenceRecord, Experiment, ExperimentConfig,
};
use sdcpse::Error;

/// Surface DC-PSE benchmark runner.
#[derive(Debug, Parser)]
#[command(name = "sdcpse", version)]
struct Args {
    /// circle-lb | circle-poisson | sphere-lb | sphere-poisson | ellipsoid-curvature | bunny-curvature | bump-diffusion
    experiment: String,
    /// Point counts of the convergence study (repeatable).
    #[arg(long = "np")]
    np: Vec<usize>,
    /// Convergence order r of the operators.
    #[arg(long)]
    order: Option<u32>,
    /// Cutoff radius as a multiple of δn.
    #[arg(long = "rc-factor")]
    rc_factor: Option<f64>,
    /// Fixed normal spacing δn (the grid spacing h for bump-diffusion).
    #[arg(long)]
    dn: Option<f64>,
    /// Normal layers per side.
    #[arg(long)]
    nn: Option<usize>,
    /// ε as a multiple of the average spacing.
    #[arg(long = "eps-factor")]
    eps_factor: Option<f64>,
    /// Bump height for bump-diffusion.
    #[arg(long)]
    alpha: Option<f64>,
    /// Time step for bump-diffusion.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time for bump-diffusion.
    #[arg(long)]
    tfinal: Option<f64>,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Estimate normals of the input cloud by PCA.
    #[arg(long = "estimate-normals")]
    estimate_normals: bool,
    /// Krylov dimension between GMRES restarts.
    #[arg(long = "gmres-restart")]
    gmres_restart: Option<usize>,
    /// Cap on GMRES iterations.
    #[arg(long = "gmres-maxiter")]
    gmres_maxiter: Option<usize>,
    /// Point cloud (CSV or ASCII PLY) for bunny-curvature.
    #[arg(long)]
    input: Option<PathBuf>,
}

/// Neighbors used for PCA normals.
const NORMAL_NEIGHBORS: usize = 10;

fn config(args: &Args) -> Result<ExperimentConfig, Error> {
    let experiment: Experiment = args.experiment.parse()?;
    let mut cfg = ExperimentConfig::defaults(experiment);
    if !args.np.is_empty() {
        cfg.resolutions = args.np.clone();
    }
    if let Some(v) = args.order {
        cfg.order = v;
    }
    if let Some(v) = args.rc_factor {
        cfg.rc_factor = v;
    }
    if let Some(v) = args.dn {
        cfg.dn = Some(v);
    }
    if let Some(v) = args.nn {
        cfg.n_n = v;
    }
    if let Some(v) = args.eps_factor {
        cfg.eps_factor = v;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.dt {
        cfg.dt = v;
    }
    if let Some(v) = args.tfinal {
        cfg.t_final = v;
    }
    if let Some(v) = args.gmres_restart {
        cfg.gmres.restart = v;
    }
    if let Some(v) = args.gmres_maxiter {
        cfg.gmres.max_iter = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn report_orders(records: &[ConvergenceRecord]) {
    if let Ok(order) = fit_convergence_order(records) {
        let name = records
            .first()
            .map(|r| r.experiment.as_str())
            .unwrap_or_default();
        eprintln!(
            "{name}: fitted order L2 {:.2}, Linf {:.2}",
            order.l2, order.linf
        );
    }
}

fn run(args: &Args) -> Result<(), Error> {
    let cfg = config(args)?;
    let out = args.out.as_deref();
    match cfg.experiment {
        Experiment::CircleLb | Experiment::SphereLb => {
            let records = if cfg.experiment == Experiment::CircleLb {
                run_circle_lb(&cfg)?
            } else {
                run_sphere_lb(&cfg)?
            };
            report_orders(&records);
            write_convergence_csv(&records, output(out)?)
        }
        Experiment::CirclePoisson | Experiment::SpherePoisson => {
            let solves = if cfg.experiment == Experiment::CirclePoisson {
                run_circle_poisson(&cfg)?
            } else {
                run_sphere_poisson(&cfg)?
            };
            let records: Vec<_> = solves.into_iter().map(|s| s.record).collect();
            report_orders(&records);
            write_convergence_csv(&records, output(out)?)
        }
        Experiment::EllipsoidCurvature => {
            let levels = run_ellipsoid_curvature(&cfg)?;
            let mean: Vec<_> = levels.iter().map(|l| l.mean.clone()).collect();
            let gauss: Vec<_> = levels.iter().map(|l| l.gauss.clone()).collect();
            report_orders(&mean);
            report_orders(&gauss);
            write_convergence_csv(&[mean, gauss].concat(), output(out)?)
        }
        Experiment::BunnyCurvature => {
            let path = args
                .input
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("bunny-curvature needs --input".into()))?;
            let loaded = load_point_cloud(path, CloudFormat::from_path(path))?;
            let cloud = if args.estimate_normals {
                let normals = estimate_normals(&loaded.positions, NORMAL_NEIGHBORS)?;
                loaded.with_normals(normals)?
            } else {
                loaded.into_cloud()?
            };
            let curv = run_bunny_curvature(&cloud, &cfg)?;
            let mean: Vec<f64> = curv.iter().map(|c| c.mean).collect();
            write_point_values_csv(&cloud, "H", &mean, output(out)?)
        }
        Experiment::BumpDiffusion => {
            let run = run_bump_diffusion(&cfg)?;
            eprintln!(
                "bump alpha={}: {} points, {} ghosts, peaks {:.6} / {:.6}",
                cfg.alpha,
                run.n_points,
                run.n_ghosts,
                run.peak(0),
                run.peak(1)
            );
            write_time_series_csv(&run.samples, output(out)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
