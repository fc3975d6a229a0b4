//! Fixed-radius neighbor search on a uniform cell list.
//!
//! Points are binned into cubic cells of edge `r_c`; candidates for a point are
//! taken from the 27 surrounding cells. A pair `(p, q)` is a neighbor pair iff
//! `|x_p - x_q|^2 <= r_c^2`, so ties at exactly the cutoff are included and the
//! relation is symmetric by construction.

use std::collections::HashMap;

use rayon::prelude::*;

use super::cloud::{SurfacePointCloud, Vec3};
use crate::error::{Error, Result};

/// Per-point neighbor indices within a fixed cutoff radius, self excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    cutoff: f64,
    neighbors: Vec<Vec<usize>>,
}

impl NeighborList {
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Neighbors of `p` in ascending index order.
    pub fn of(&self, p: usize) -> &[usize] {
        &self.neighbors[p]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.neighbors.iter().map(Vec::as_slice)
    }

    pub fn into_inner(self) -> Vec<Vec<usize>> {
        self.neighbors
    }
}

/// Builds the neighbor list of `cloud` for cutoff radius `r_c`.
pub fn build_neighbor_list(cloud: &SurfacePointCloud, r_c: f64) -> Result<NeighborList> {
    fixed_radius_neighbors(cloud.positions(), r_c)
}

/// Neighbor list over bare positions, for point sets without normals.
pub fn fixed_radius_neighbors(positions: &[Vec3], r_c: f64) -> Result<NeighborList> {
    if !(r_c > 0.0 && r_c.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "cutoff radius must be positive, got {r_c}"
        )));
    }
    Ok(NeighborList {
        cutoff: r_c,
        neighbors: neighbors_within(positions, r_c),
    })
}

type CellKey = [i64; 3];

fn cell_of(x: &Vec3, inv_edge: f64) -> CellKey {
    [
        (x.x * inv_edge).floor() as i64,
        (x.y * inv_edge).floor() as i64,
        (x.z * inv_edge).floor() as i64,
    ]
}

pub(crate) fn neighbors_within(positions: &[Vec3], r_c: f64) -> Vec<Vec<usize>> {
    // Slightly oversized cells so rounding in the binning never separates a
    // pair at distance exactly r_c by more than one cell.
    let inv_edge = 1.0 / (r_c * (1.0 + 1e-9));
    let mut cells: HashMap<CellKey, Vec<usize>> = HashMap::new();
    for (i, x) in positions.iter().enumerate() {
        cells.entry(cell_of(x, inv_edge)).or_default().push(i);
    }
    let r2 = r_c * r_c;
    positions
        .par_iter()
        .enumerate()
        .map(|(p, xp)| {
            let [cx, cy, cz] = cell_of(xp, inv_edge);
            let mut found = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let Some(bucket) = cells.get(&[cx + dx, cy + dy, cz + dz]) else {
                            continue;
                        };
                        found.extend(
                            bucket
                                .iter()
                                .copied()
                                .filter(|&q| q != p && (xp - positions[q]).norm_squared() <= r2),
                        );
                    }
                }
            }
            found.sort_unstable();
            found
        })
        .collect()
}

/// Mean L1 distance between point `p` and its neighbors.
pub fn average_spacing(cloud: &SurfacePointCloud, p: usize, nbrs: &NeighborList) -> Result<f64> {
    let xp = cloud.position(p);
    mean_l1_distance(&xp, nbrs.of(p).iter().map(|&q| cloud.position(q)))
        .ok_or(Error::IsolatedPoint { index: p })
}

pub(crate) fn mean_l1_distance(center: &Vec3, others: impl Iterator<Item = Vec3>) -> Option<f64> {
    let (sum, count) = others.fold((0.0, 0usize), |(s, c), x| {
        (s + (center - x).abs().sum(), c + 1)
    });
    (count > 0).then(|| sum / count as f64)
}

/// Mean of [`average_spacing`] over all points of the cloud.
pub fn mean_average_spacing(cloud: &SurfacePointCloud, nbrs: &NeighborList) -> Result<f64> {
    let mut total = 0.0;
    for p in 0..cloud.len() {
        total += average_spacing(cloud, p, nbrs)?;
    }
    Ok(total / cloud.len() as f64)
}
