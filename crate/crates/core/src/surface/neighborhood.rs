//! Virtual normal extension of a surface neighborhood.
//!
//! Every surface neighbor `s` of `p` is copied along its normal at
//! `x_s + i δn n_s` for `i = -N_n..=N_n`; `p` itself contributes its copies with
//! `i != 0`. Only offsets within the cutoff are kept, and none of the copies is
//! ever stored as a point: the neighborhood holds offsets grouped by the
//! surface point they came from.

use crate::error::{Error, Result};
use crate::pointcloud::{average_spacing, NeighborList, SurfacePointCloud, Vec3};

/// Discretization parameters shared by all surface operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    /// Convergence order `r` of the kernels.
    pub r: u32,
    /// Cutoff radius `r_c`.
    pub r_c: f64,
    /// Spacing of the normal copies. `None` uses the average spacing of each point.
    pub delta_n: Option<f64>,
    /// Copies per side of the surface. `None` uses `round(r_c / δn)`.
    pub n_n: Option<usize>,
    /// `ε = eps_factor × average spacing`.
    pub eps_factor: f64,
}

impl SurfaceParams {
    pub fn new(r: u32, r_c: f64) -> Self {
        Self {
            r,
            r_c,
            delta_n: None,
            n_n: None,
            eps_factor: 1.0,
        }
    }

    pub fn with_delta_n(mut self, delta_n: f64) -> Self {
        self.delta_n = Some(delta_n);
        self
    }

    pub fn with_layers(mut self, n_n: usize) -> Self {
        self.n_n = Some(n_n);
        self
    }

    pub fn with_eps_factor(mut self, eps_factor: f64) -> Self {
        self.eps_factor = eps_factor;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if self.r < 1 {
            return Err(Error::InvalidInput(
                "convergence order r must be at least 1".into(),
            ));
        }
        if !positive(self.r_c) || !positive(self.eps_factor) {
            return Err(Error::InvalidInput(format!(
                "r_c and eps_factor must be positive (got {} and {})",
                self.r_c, self.eps_factor
            )));
        }
        if let Some(dn) = self.delta_n {
            if !positive(dn) {
                return Err(Error::InvalidInput(format!(
                    "δn must be positive, got {dn}"
                )));
            }
        }
        if self.n_n == Some(0) {
            return Err(Error::InvalidInput("N_n must be at least 1".into()));
        }
        Ok(())
    }
}

/// Offsets `(x_p - x_q) / ε_p` of the normal-extended neighborhood of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceNeighborhood {
    center: usize,
    neighbors: Vec<usize>,
    entries: Vec<Vec3>,
    group_ptr: Vec<usize>,
    delta_n: f64,
    n_n: usize,
    r_c: f64,
    epsilon: f64,
}

impl SurfaceNeighborhood {
    pub fn center(&self) -> usize {
        self.center
    }

    /// Surface neighbors, one per group except the final self group.
    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    /// `|𝒩_S| + 1`
    pub fn group_count(&self) -> usize {
        self.group_ptr.len() - 1
    }

    /// Scaled offsets of group `g`; the last group holds the copies of the center.
    pub fn group(&self, g: usize) -> &[Vec3] {
        &self.entries[self.group_ptr[g]..self.group_ptr[g + 1]]
    }

    pub fn self_group(&self) -> &[Vec3] {
        self.group(self.group_count() - 1)
    }

    /// All scaled offsets, group after group.
    pub fn entries(&self) -> &[Vec3] {
        &self.entries
    }

    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }

    pub fn layers(&self) -> usize {
        self.n_n
    }

    pub fn cutoff(&self) -> f64 {
        self.r_c
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub(crate) fn group_ptr(&self) -> &[usize] {
        &self.group_ptr
    }
}

/// Builds the extended neighborhood of point `p`.
pub fn build_surface_neighborhood(
    cloud: &SurfacePointCloud,
    p: usize,
    nbrs: &NeighborList,
    params: &SurfaceParams,
) -> Result<SurfaceNeighborhood> {
    params.validate()?;
    let spacing = average_spacing(cloud, p, nbrs)?;
    let delta_n = params.delta_n.unwrap_or(spacing);
    let n_n = params
        .n_n
        .unwrap_or_else(|| ((params.r_c / delta_n).round() as usize).max(1));
    let epsilon = spacing * params.eps_factor;
    let r2 = params.r_c * params.r_c;
    let xp = cloud.position(p);
    let layers = -(n_n as i64)..=n_n as i64;

    let neighbors = nbrs.of(p).to_vec();
    let mut entries = Vec::with_capacity((neighbors.len() + 1) * (2 * n_n + 1));
    let mut group_ptr = Vec::with_capacity(neighbors.len() + 2);
    group_ptr.push(0);
    for &s in &neighbors {
        let base = xp - cloud.position(s);
        let ns = cloud.normal(s);
        for i in layers.clone() {
            let d = base - (i as f64 * delta_n) * ns;
            if d.norm_squared() <= r2 {
                entries.push(d / epsilon);
            }
        }
        group_ptr.push(entries.len());
    }
    let np = cloud.normal(p);
    for i in layers.filter(|&i| i != 0) {
        let d = -(i as f64 * delta_n) * np;
        if d.norm_squared() <= r2 {
            entries.push(d / epsilon);
        }
    }
    group_ptr.push(entries.len());

    Ok(SurfaceNeighborhood {
        center: p,
        neighbors,
        entries,
        group_ptr,
        delta_n,
        n_n,
        r_c: params.r_c,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::{build_neighbor_list, generate_circle};

    fn flat_line(n: usize, h: f64) -> SurfacePointCloud {
        let pos = (0..n).map(|i| Vec3::new(i as f64 * h, 0.0, 0.0)).collect();
        let nor = vec![Vec3::new(0.0, 1.0, 0.0); n];
        SurfacePointCloud::new(2, pos, nor).unwrap()
    }

    #[test]
    fn flat_line_keeps_diagonal_copies() {
        let h = 0.1;
        let cloud = flat_line(5, h);
        let nbrs = build_neighbor_list(&cloud, 1.5 * h).unwrap();
        let params = SurfaceParams::new(2, 1.5 * h)
            .with_delta_n(h)
            .with_layers(1);
        let nb = build_surface_neighborhood(&cloud, 2, &nbrs, &params).unwrap();
        assert_eq!(nb.neighbors(), &[1, 3]);
        assert_eq!(nb.group_count(), 3);
        let eps = nb.epsilon();
        assert!((eps - h).abs() < 1e-15);
        let g: Vec<Vec3> = nb.group(1).iter().map(|z| z * eps).collect();
        // x_2 - x_3 = (-h, 0) and its copies at ±δn along y.
        assert_eq!(g.len(), 3);
        for (d, want) in g.iter().zip([(-h, h), (-h, 0.0), (-h, -h)]) {
            assert!(
                (d.x - want.0).abs() < 1e-15 && (d.y - want.1).abs() < 1e-15,
                "{d:?}"
            );
        }
        assert_eq!(nb.self_group().len(), 2);
    }

    #[test]
    fn self_group_is_along_the_normal() {
        let cloud = generate_circle(64).unwrap();
        let dn = 3.0 / 63.0;
        let rc = 4.1 * dn;
        let nbrs = build_neighbor_list(&cloud, rc).unwrap();
        let params = SurfaceParams::new(2, rc).with_delta_n(dn).with_layers(4);
        for p in [0, 17, 40] {
            let nb = build_surface_neighborhood(&cloud, p, &nbrs, &params).unwrap();
            let n = cloud.normal(p);
            let mut lengths: Vec<f64> = nb
                .self_group()
                .iter()
                .map(|z| {
                    let d = z * nb.epsilon();
                    assert!(d.cross(&n).norm() < 1e-14);
                    d.norm()
                })
                .collect();
            lengths.sort_by(f64::total_cmp);
            let want: Vec<f64> = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0]
                .iter()
                .map(|i| i * dn)
                .collect();
            assert_eq!(lengths.len(), want.len());
            for (a, b) in lengths.iter().zip(&want) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn entry_count_matches_brute_force_materialization() {
        let cloud = generate_circle(64).unwrap();
        let dn = 3.0 / 63.0;
        let rc = 4.1 * dn;
        let nbrs = build_neighbor_list(&cloud, rc).unwrap();
        let params = SurfaceParams::new(2, rc).with_delta_n(dn).with_layers(4);
        for p in 0..cloud.len() {
            let nb = build_surface_neighborhood(&cloud, p, &nbrs, &params).unwrap();
            let xp = cloud.position(p);
            let mut count = 0;
            for s in 0..cloud.len() {
                let neighbor = s == p || (xp - cloud.position(s)).norm() <= rc;
                for i in -4i32..=4 {
                    if !neighbor || (s == p && i == 0) {
                        continue;
                    }
                    let x = cloud.position(s) + i as f64 * dn * cloud.normal(s);
                    if (xp - x).norm() <= rc {
                        count += 1;
                    }
                }
            }
            assert_eq!(nb.entries().len(), count, "point {p}");
        }
    }

    #[test]
    fn defaults_follow_average_spacing() {
        let h = 0.1;
        let cloud = flat_line(6, h);
        let nbrs = build_neighbor_list(&cloud, 2.05 * h).unwrap();
        let nb =
            build_surface_neighborhood(&cloud, 0, &nbrs, &SurfaceParams::new(2, 2.05 * h)).unwrap();
        assert!((nb.delta_n() - 1.5 * h).abs() < 1e-14);
        assert_eq!(nb.layers(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        let cloud = flat_line(3, 0.1);
        let nbrs = build_neighbor_list(&cloud, 0.15).unwrap();
        let bad = SurfaceParams::new(2, 0.15).with_layers(0);
        assert!(build_surface_neighborhood(&cloud, 0, &nbrs, &bad).is_err());
        let bad = SurfaceParams::new(2, 0.15).with_delta_n(-1.0);
        assert!(build_surface_neighborhood(&cloud, 0, &nbrs, &bad).is_err());
    }
}
