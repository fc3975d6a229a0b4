//! Normal estimation for clouds that come without normals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointcloud::Vec3;

/// Indices of the `k` nearest other points of every point (brute force).
fn k_nearest(positions: &[Vec3], k: usize) -> Vec<Vec<usize>> {
    positions
        .par_iter()
        .enumerate()
        .map(|(p, xp)| {
            let mut d: Vec<(f64, usize)> = positions
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != p)
                .map(|(q, xq)| ((xp - xq).norm_squared(), q))
                .collect();
            let k = k.min(d.len());
            if k < d.len() {
                d.select_nth_unstable_by(k, |a, b| a.0.total_cmp(&b.0));
            }
            let nearest = &mut d[..k];
            nearest.sort_by(|a, b| a.0.total_cmp(&b.0));
            // Copied out so the full-length scratch buffer is not kept alive.
            nearest.iter().map(|&(_, q)| q).collect()
        })
        .collect()
}

/// Mean distance from each point to its nearest neighbor.
pub fn mean_nearest_neighbor_distance(positions: &[Vec3]) -> Result<f64> {
    if positions.len() < 2 {
        return Err(Error::InvalidInput("need at least two points".into()));
    }
    let total: f64 = k_nearest(positions, 1)
        .iter()
        .enumerate()
        .map(|(p, nb)| (positions[p] - positions[nb[0]]).norm())
        .sum();
    Ok(total / positions.len() as f64)
}

#[derive(PartialEq)]
struct Edge(f64, usize, usize);

impl Eq for Edge {}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Edge {
    // Reversed so the binary heap pops the lightest edge first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0)
    }
}

/// Unit normals from principal component analysis of the `k` nearest
/// neighbors of each point.
///
/// Orientation is made consistent by growing a minimum spanning tree over the
/// neighbor graph (edge weight `1 - |n_i · n_j|`) from the highest point of
/// each component, whose normal is pointed up, and flipping children to agree
/// with their parents. Finally all normals are flipped if most of them point
/// toward the centroid.
pub fn estimate_normals(positions: &[Vec3], k: usize) -> Result<Vec<Vec3>> {
    if k < 5 {
        return Err(Error::InvalidInput(format!(
            "normal estimation needs k >= 5, got {k}"
        )));
    }
    if positions.len() <= k {
        return Err(Error::InvalidInput(format!(
            "normal estimation with k = {k} needs more than {k} points"
        )));
    }
    let knn = k_nearest(positions, k);
    let mut normals: Vec<Vec3> = knn
        .par_iter()
        .enumerate()
        .map(|(p, nb)| {
            let members = || {
                std::iter::once(p)
                    .chain(nb.iter().copied())
                    .map(|q| positions[q])
            };
            let count = nb.len() as f64 + 1.0;
            let mean = members().sum::<Vec3>() / count;
            let cov: Matrix3<f64> = members().map(|x| (x - mean) * (x - mean).transpose()).sum();
            let eig = SymmetricEigen::new(cov);
            let mut order = [0, 1, 2];
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let (mid, top) = (eig.eigenvalues[order[1]], eig.eigenvalues[order[2]]);
            if mid <= 1e-12 * top {
                return Err(Error::DegenerateCovariance { point: p });
            }
            Ok(eig.eigenvectors.column(order[0]).normalize())
        })
        .collect::<Result<_>>()?;

    // Symmetrize the k-nearest-neighbor relation for the spanning tree.
    let mut adj = knn.clone();
    for (p, nb) in knn.iter().enumerate() {
        for &q in nb {
            if !knn[q].contains(&p) {
                adj[q].push(p);
            }
        }
    }
    let n = positions.len();
    let mut visited = vec![false; n];
    let mut by_height: Vec<usize> = (0..n).collect();
    by_height.sort_by(|&a, &b| positions[b].z.total_cmp(&positions[a].z));
    for root in by_height {
        if visited[root] {
            continue;
        }
        if normals[root].z < 0.0 {
            normals[root] = -normals[root];
        }
        visited[root] = true;
        let mut heap = BinaryHeap::new();
        let push_edges =
            |heap: &mut BinaryHeap<Edge>, normals: &[Vec3], visited: &[bool], p: usize| {
                for &q in &adj[p] {
                    if !visited[q] {
                        heap.push(Edge(1.0 - normals[p].dot(&normals[q]).abs(), p, q));
                    }
                }
            };
        push_edges(&mut heap, &normals, &visited, root);
        while let Some(Edge(_, parent, child)) = heap.pop() {
            if visited[child] {
                continue;
            }
            visited[child] = true;
            if normals[child].dot(&normals[parent]) < 0.0 {
                normals[child] = -normals[child];
            }
            push_edges(&mut heap, &normals, &visited, child);
        }
    }

    let centroid = positions.iter().sum::<Vec3>() / n as f64;
    let inward = positions
        .iter()
        .zip(&normals)
        .filter(|(x, nrm)| (*x - centroid).dot(nrm) < 0.0)
        .count();
    if 2 * inward > n {
        normals.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(normals)
}
