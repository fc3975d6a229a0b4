//! Heat equation on the flat square [-2, 2]² with no-flux edges, discretized
//! by the five-point Laplacian on a vertex-centered grid and Crank-Nicolson in
//! time.
//!
//! The discrete Neumann Laplacian is diagonalized by cosines, so the time
//! stepping is done exactly mode by mode instead of with a sparse solver.

use std::f64::consts::PI;

const HALF_WIDTH: f64 = 2.0;

fn zeta(d: f64) -> f64 {
    if d < 0.975 {
        (-1.0 / (1.0 - d * d)).exp()
    } else {
        0.0
    }
}

/// `σ⁻² ζ(|x| / σ)` with `σ = 0.2`.
fn initial(x: f64, y: f64) -> f64 {
    let sigma = 0.2;
    zeta(x.hypot(y) / sigma) / (sigma * sigma)
}

pub struct FlatHeat {
    /// Intervals per axis.
    m: usize,
    /// Cosine coefficients, row-major `(m + 1)²`.
    coeff: Vec<f64>,
    /// Per-mode Crank-Nicolson amplification over one sampling interval.
    gain: Vec<f64>,
}

impl FlatHeat {
    /// Grid with `m + 1` nodes per axis; `steps` time steps of size `dt`
    /// make up one sampling interval.
    pub fn new(m: usize, dt: f64, steps: i32) -> Self {
        let h = 2.0 * HALF_WIDTH / m as f64;
        let node = |i: usize| -HALF_WIDTH + i as f64 * h;
        // Nodes carrying a non-zero initial value.
        let support: Vec<usize> = (0..=m).filter(|&i| node(i).abs() < 0.2).collect();
        let b = support.len();
        let u0: Vec<f64> = support
            .iter()
            .flat_map(|&i| support.iter().map(move |&j| initial(node(i), node(j))))
            .collect();
        let norm = |k: usize| {
            if k == 0 || k == m {
                m as f64
            } else {
                m as f64 / 2.0
            }
        };
        let basis = |k: usize, i: usize| (PI * (k * i) as f64 / m as f64).cos();

        // Transform along the first axis, then along the second.
        let mut half = vec![0.0; (m + 1) * b];
        for k in 0..=m {
            for (ib, &i) in support.iter().enumerate() {
                let c = basis(k, i);
                for jb in 0..b {
                    half[k * b + jb] += c * u0[ib * b + jb];
                }
            }
        }
        let cos_support: Vec<f64> = (0..=m)
            .flat_map(|l| support.iter().map(move |&j| basis(l, j)))
            .collect();
        let mut coeff = vec![0.0; (m + 1) * (m + 1)];
        for k in 0..=m {
            let row = &half[k * b..(k + 1) * b];
            for l in 0..=m {
                let col = &cos_support[l * b..(l + 1) * b];
                let s: f64 = row.iter().zip(col).map(|(a, c)| a * c).sum();
                coeff[k * (m + 1) + l] = s / (norm(k) * norm(l));
            }
        }

        let eig: Vec<f64> = (0..=m)
            .map(|k| {
                let s = (PI * k as f64 / (2.0 * m as f64)).sin();
                -4.0 / (h * h) * s * s
            })
            .collect();
        let gain = (0..=m)
            .flat_map(|k| {
                let eig = &eig;
                (0..=m).map(move |l| {
                    let mu = eig[k] + eig[l];
                    ((1.0 + 0.5 * dt * mu) / (1.0 - 0.5 * dt * mu)).powi(steps)
                })
            })
            .collect();
        Self { m, coeff, gain }
    }

    /// Values at `(x, y)` after `0, 1, ..., samples - 1` sampling intervals,
    /// interpolating the grid solution with its own cosine series.
    pub fn probe(&self, x: f64, y: f64, samples: usize) -> Vec<f64> {
        let m = self.m;
        let cx: Vec<f64> = (0..=m)
            .map(|k| (PI * k as f64 * (x + HALF_WIDTH) / (2.0 * HALF_WIDTH)).cos())
            .collect();
        let cy: Vec<f64> = (0..=m)
            .map(|l| (PI * l as f64 * (y + HALF_WIDTH) / (2.0 * HALF_WIDTH)).cos())
            .collect();
        let mut modes = self.coeff.clone();
        let mut out = Vec::with_capacity(samples);
        for _ in 0..samples {
            let mut v = 0.0;
            for k in 0..=m {
                let row = &modes[k * (m + 1)..(k + 1) * (m + 1)];
                v += cx[k] * row.iter().zip(&cy).map(|(a, c)| a * c).sum::<f64>();
            }
            out.push(v);
            modes.iter_mut().zip(&self.gain).for_each(|(a, g)| *a *= g);
        }
        out
    }

    /// The initial condition, to check the transform against.
    pub fn initial_at(&self, x: f64, y: f64) -> f64 {
        initial(x, y)
    }
}
