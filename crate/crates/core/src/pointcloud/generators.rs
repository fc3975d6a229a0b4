//! Analytic point-cloud generators used by the benchmarks.

use std::f64::consts::PI;

use super::cloud::{SurfacePointCloud, Vec3};
use crate::error::{Error, Result};

/// `pi * (3 - sqrt(5))`, the angular increment of golden-angle spirals.
pub const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// `N_p` equi-angular points on the unit circle with outward normals.
pub fn generate_circle(n_points: usize) -> Result<SurfacePointCloud> {
    if n_points < 3 {
        return Err(Error::InvalidInput(format!(
            "a circle needs at least 3 points, got {n_points}"
        )));
    }
    let positions: Vec<Vec3> = (0..n_points)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / n_points as f64;
            Vec3::new(theta.cos(), theta.sin(), 0.0)
        })
        .collect();
    let normals = positions.clone();
    SurfacePointCloud::new(2, positions, normals)
}

fn fibonacci_directions(n_points: usize) -> Vec<Vec3> {
    (0..n_points)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n_points as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = GOLDEN_ANGLE * i as f64;
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z).normalize()
        })
        .collect()
}

/// `N_p` quasi-uniform points on the unit sphere (golden-angle spiral in
/// `z`-slices of equal area) with outward normals.
pub fn generate_fibonacci_sphere(n_points: usize) -> Result<SurfacePointCloud> {
    if n_points < 10 {
        return Err(Error::InvalidInput(format!(
            "a Fibonacci sphere needs at least 10 points, got {n_points}"
        )));
    }
    let positions = fibonacci_directions(n_points);
    let normals = positions.clone();
    SurfacePointCloud::new(3, positions, normals)
}

/// Fibonacci-sphere points scaled onto the ellipsoid `x²/a² + y²/b² + z²/c² = 1`,
/// with outward normals from the gradient of the implicit function.
pub fn generate_ellipsoid(a: f64, b: f64, c: f64, n_points: usize) -> Result<SurfacePointCloud> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::InvalidInput(format!(
            "ellipsoid semi-axes must be positive, got ({a}, {b}, {c})"
        )));
    }
    if n_points < 10 {
        return Err(Error::InvalidInput(format!(
            "an ellipsoid needs at least 10 points, got {n_points}"
        )));
    }
    let dirs = fibonacci_directions(n_points);
    let positions: Vec<Vec3> = dirs
        .iter()
        .map(|d| Vec3::new(a * d.x, b * d.y, c * d.z))
        .collect();
    let normals = positions
        .iter()
        .map(|x| Vec3::new(x.x / (a * a), x.y / (b * b), x.z / (c * c)).normalize())
        .collect();
    SurfacePointCloud::new(3, positions, normals)
}

/// Cut-off compressed Gaussian: `exp(-1/(1-d²))` for `d < 0.975`, else 0.
pub fn zeta(d: f64) -> f64 {
    if d < ZETA_CUTOFF {
        (-1.0 / (1.0 - d * d)).exp()
    } else {
        0.0
    }
}

/// Derivative of [`zeta`] (zero beyond the cutoff).
pub fn zeta_prime(d: f64) -> f64 {
    if d < ZETA_CUTOFF {
        let s = 1.0 - d * d;
        zeta(d) * (-2.0 * d / (s * s))
    } else {
        0.0
    }
}

pub const ZETA_CUTOFF: f64 = 0.975;

/// Graph surface `z = u(x, y)` over a square with one smooth radial bump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSurfaceSpec {
    pub bump_height: f64,
    pub bump_center: [f64; 2],
    pub bump_radius: f64,
    /// The domain is the square `[-half_width, half_width]²`.
    pub half_width: f64,
    /// Width of the initial condition of the diffusion benchmark.
    pub init_sigma: f64,
}

impl BumpSurfaceSpec {
    /// Benchmark geometry with the given bump height α.
    pub fn new(bump_height: f64) -> Self {
        Self {
            bump_height,
            bump_center: [-0.5, 0.0],
            bump_radius: 0.25,
            half_width: 2.0,
            init_sigma: 0.2,
        }
    }

    fn radial(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let dx = x - self.bump_center[0];
        let dy = y - self.bump_center[1];
        (dx, dy, dx.hypot(dy))
    }

    pub fn height(&self, x: f64, y: f64) -> f64 {
        let (_, _, rho) = self.radial(x, y);
        self.bump_height * zeta(rho / self.bump_radius)
    }

    /// `(∂u/∂x, ∂u/∂y)`.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let (dx, dy, rho) = self.radial(x, y);
        if rho == 0.0 {
            return (0.0, 0.0);
        }
        let g = self.bump_height * zeta_prime(rho / self.bump_radius) / self.bump_radius;
        (g * dx / rho, g * dy / rho)
    }

    /// Upward unit normal of the graph.
    pub fn normal(&self, x: f64, y: f64) -> Vec3 {
        let (ux, uy) = self.gradient(x, y);
        Vec3::new(-ux, -uy, 1.0).normalize()
    }

    /// Surface-area element `sqrt(1 + |∇u|²)` at distance `rho` from the bump center.
    fn area_element(&self, rho: f64) -> f64 {
        let g = self.bump_height * zeta_prime(rho / self.bump_radius) / self.bump_radius;
        (1.0 + g * g).sqrt()
    }

    /// Radius of the disc outside which the surface is flat.
    pub fn support_radius(&self) -> f64 {
        ZETA_CUTOFF * self.bump_radius
    }

    /// `[x_min, x_max, y_min, y_max]` of the square enclosing the bump.
    pub fn bump_box(&self) -> [f64; 4] {
        let [px, py] = self.bump_center;
        let r = self.bump_radius;
        [px - r, px + r, py - r, py + r]
    }

    /// Initial condition `σ⁻² ζ(|x| / σ)` of the diffusion benchmark.
    pub fn initial_condition(&self, x: &Vec3) -> f64 {
        zeta(x.norm() / self.init_sigma) / (self.init_sigma * self.init_sigma)
    }
}

/// Ratio of the target point spacing inside the bump box to the flat-grid spacing.
pub const BUMP_SPACING_RATIO: f64 = 0.4;

/// Points on the bump surface: a regular grid of spacing `h` on the flat part
/// and, inside the bump box, a golden-angle spiral around the bump center whose
/// radii are warped so that the lifted points are uniform in surface area.
///
/// The grid spacing is adjusted to `2 L / round(2 L / h)` so the grid reaches
/// the domain edges exactly.
pub fn generate_bump_surface(spec: &BumpSurfaceSpec, h: f64) -> Result<SurfacePointCloud> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "spacing must be positive, got {h}"
        )));
    }
    let l = spec.half_width;
    let cells = (2.0 * l / h).round().max(1.0) as usize;
    let step = 2.0 * l / cells as f64;
    let [bx0, bx1, by0, by1] = spec.bump_box();
    let tol = 1e-9 * step;
    let strictly_inside =
        |x: f64, y: f64| x > bx0 + tol && x < bx1 - tol && y > by0 + tol && y < by1 - tol;

    let mut positions = Vec::new();
    let mut normals = Vec::new();
    for j in 0..=cells {
        let y = -l + j as f64 * step;
        for i in 0..=cells {
            let x = -l + i as f64 * step;
            if strictly_inside(x, y) {
                continue;
            }
            positions.push(Vec3::new(x, y, spec.height(x, y)));
            normals.push(spec.normal(x, y));
        }
    }

    let spiral_spacing = BUMP_SPACING_RATIO * step;
    let margin = 0.5 * spiral_spacing;
    let [px, py] = spec.bump_center;
    let outer = spec.bump_radius * std::f64::consts::SQRT_2;
    let areas = CumulativeArea::new(spec, outer);
    let count = (areas.total() / (spiral_spacing * spiral_spacing)).round() as usize;
    for k in 0..count {
        let rho = areas.radius_for((k as f64 + 0.5) / count as f64 * areas.total());
        let phi = GOLDEN_ANGLE * k as f64;
        let x = px + rho * phi.cos();
        let y = py + rho * phi.sin();
        let inside = x > bx0 + margin && x < bx1 - margin && y > by0 + margin && y < by1 - margin;
        if inside {
            positions.push(Vec3::new(x, y, spec.height(x, y)));
            normals.push(spec.normal(x, y));
        }
    }
    SurfacePointCloud::new(3, positions, normals)
}

/// Tabulated surface area of the graph over the disc of radius `rho`.
struct CumulativeArea {
    radii: Vec<f64>,
    areas: Vec<f64>,
}

impl CumulativeArea {
    const SAMPLES: usize = 20_000;

    fn new(spec: &BumpSurfaceSpec, outer: f64) -> Self {
        let dr = outer / Self::SAMPLES as f64;
        let mut radii = Vec::with_capacity(Self::SAMPLES + 1);
        let mut areas = Vec::with_capacity(Self::SAMPLES + 1);
        let integrand = |r: f64| 2.0 * std::f64::consts::PI * r * spec.area_element(r);
        let mut acc = 0.0;
        radii.push(0.0);
        areas.push(0.0);
        for k in 1..=Self::SAMPLES {
            let (r0, r1) = ((k - 1) as f64 * dr, k as f64 * dr);
            acc += 0.5 * dr * (integrand(r0) + integrand(r1));
            radii.push(r1);
            areas.push(acc);
        }
        Self { radii, areas }
    }

    fn total(&self) -> f64 {
        *self.areas.last().unwrap()
    }

    fn radius_for(&self, area: f64) -> f64 {
        let k = self
            .areas
            .partition_point(|&a| a < area)
            .clamp(1, self.areas.len() - 1);
        let (a0, a1) = (self.areas[k - 1], self.areas[k]);
        let t = if a1 > a0 {
            (area - a0) / (a1 - a0)
        } else {
            0.0
        };
        self.radii[k - 1] + t * (self.radii[k] - self.radii[k - 1])
    }
}
