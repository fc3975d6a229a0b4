//! Closed-form fields and their surface derivatives for the benchmarks.

use std::f64::consts::PI;

use crate::pointcloud::Vec3;

/// `Y_4^0` at the direction of `x` (polar angle measured from +z).
pub fn y40(x: &Vec3) -> f64 {
    let c = x.z / x.norm();
    let c2 = c * c;
    (3.0 / 16.0) * (1.0 / PI).sqrt() * (35.0 * c2 * c2 - 30.0 * c2 + 3.0)
}

/// `sin θ + cos θ` on the unit circle.
pub fn circle_trig(x: &Vec3) -> f64 {
    let t = x.y.atan2(x.x);
    t.sin() + t.cos()
}

/// `Δ_S (sin θ + cos θ) = -(sin θ + cos θ)`.
pub fn circle_trig_laplacian(x: &Vec3) -> f64 {
    -circle_trig(x)
}

/// `sin 2θ`, the circle Poisson solution.
pub fn circle_poisson_solution(x: &Vec3) -> f64 {
    (2.0 * x.y.atan2(x.x)).sin()
}

/// `Δ_S sin 2θ = -4 sin 2θ`.
pub fn circle_poisson_rhs(x: &Vec3) -> f64 {
    -4.0 * circle_poisson_solution(x)
}

/// `Δ_S Y_4^0 = -20 Y_4^0` on the unit sphere.
pub fn y40_laplacian(x: &Vec3) -> f64 {
    -20.0 * y40(x)
}

/// Parameters `(u, v)` of a point on the ellipsoid
/// `x = a cos u sin v, y = b sin u sin v, z = c cos v`.
pub fn ellipsoid_parameters(a: f64, b: f64, c: f64, x: &Vec3) -> (f64, f64) {
    let v = (x.z / c).clamp(-1.0, 1.0).acos();
    let u = (x.y / b).atan2(x.x / a);
    (u, v)
}

fn ellipsoid_denominator(a: f64, b: f64, c: f64, u: f64, v: f64) -> f64 {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    a * a * b * b * cv * cv + c * c * (b * b * cu * cu + a * a * su * su) * sv * sv
}

/// Mean curvature of the ellipsoid (positive for outward normals).
pub fn ellipsoid_mean_curvature(a: f64, b: f64, c: f64, x: &Vec3) -> f64 {
    let (u, v) = ellipsoid_parameters(a, b, c, x);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let sv = v.sin();
    let num = a
        * b
        * c
        * (3.0 * (a2 + b2) + 2.0 * c2 + (a2 + b2 - 2.0 * c2) * (2.0 * v).cos()
            - 2.0 * (a2 - b2) * (2.0 * u).cos() * sv * sv);
    num / (8.0 * ellipsoid_denominator(a, b, c, u, v).powf(1.5))
}

/// Gauss curvature of the ellipsoid.
pub fn ellipsoid_gauss_curvature(a: f64, b: f64, c: f64, x: &Vec3) -> f64 {
    let (u, v) = ellipsoid_parameters(a, b, c, x);
    (a * b * c).powi(2) / ellipsoid_denominator(a, b, c, u, v).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_values_at_zero() {
        let x = Vec3::new(1.0, 0.0, 0.0);
        assert!((circle_trig(&x) - 1.0).abs() < 1e-15);
        assert!((circle_trig_laplacian(&x) + 1.0).abs() < 1e-15);
        assert_eq!(circle_poisson_solution(&x), 0.0);
    }

    #[test]
    fn y40_is_normalized() {
        // Midpoint rule in the polar angle; Y40 does not depend on azimuth.
        let n = 20_000;
        let dt = PI / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * dt;
            let y = y40(&Vec3::new(t.sin(), 0.0, t.cos()));
            total += y * y * t.sin() * dt * 2.0 * PI;
        }
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn y40_laplacian_ratio() {
        for t in [0.1f64, 0.7, 1.3, 2.9] {
            let x = Vec3::new(t.sin() * 0.6, t.sin() * 0.8, t.cos());
            assert!((y40_laplacian(&x) / y40(&x) + 20.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipsoid_reduces_to_sphere() {
        for x in [
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.6, 0.0, 0.8),
            Vec3::new(0.3, -0.4, 0.866_025_403_784_438_6),
        ] {
            assert!((ellipsoid_mean_curvature(1.0, 1.0, 1.0, &x) - 1.0).abs() < 1e-12);
            assert!((ellipsoid_gauss_curvature(1.0, 1.0, 1.0, &x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipsoid_axis_points() {
        // At (a, 0, 0) the principal curvatures are a/b² and a/c².
        let (a, b, c) = (1.0, 0.8, 0.75);
        let x = Vec3::new(a, 0.0, 0.0);
        let (k1, k2) = (a / (b * b), a / (c * c));
        assert!((ellipsoid_mean_curvature(a, b, c, &x) - 0.5 * (k1 + k2)).abs() < 1e-12);
        assert!((ellipsoid_gauss_curvature(a, b, c, &x) - k1 * k2).abs() < 1e-12);
    }
}
