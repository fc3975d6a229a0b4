//! No-flux boundaries on the square bump domain by the method of images.

use crate::error::{Error, Result};
use crate::pointcloud::{BumpSurfaceSpec, PointLabel, SurfacePointCloud, Vec3};

/// Ghost points appended after the real points, each mirroring one source.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostMap {
    real: usize,
    sources: Vec<usize>,
}

impl GhostMap {
    /// Number of real (non-ghost) points; ghosts follow them.
    pub fn real_count(&self) -> usize {
        self.real
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    /// `(ghost index, source index)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sources
            .iter()
            .enumerate()
            .map(|(g, &s)| (self.real + g, s))
    }
}

/// Reflects every point within `band` of an edge of the square domain.
///
/// Points near a corner get three images: across each edge and across the
/// corner. Points lying exactly on an edge are not mirrored across it.
pub fn build_ghosts(
    cloud: &SurfacePointCloud,
    spec: &BumpSurfaceSpec,
    band: f64,
) -> Result<(SurfacePointCloud, GhostMap)> {
    if !(band > 0.0 && band.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "ghost band must be positive, got {band}"
        )));
    }
    if cloud.dim() != 3 {
        return Err(Error::InvalidInput(
            "ghosts are built for graph surfaces in 3D".into(),
        ));
    }
    let l = spec.half_width;
    let reach = spec.support_radius();
    let c = spec.bump_center;
    if spec.bump_height != 0.0 && (0..2).any(|k| c[k].abs() + reach > l - band) {
        return Err(Error::UnsupportedGeometry(
            "bump support reaches the ghost band; curved boundaries cannot be mirrored".into(),
        ));
    }

    // Per axis: the mirror coordinate if the point is inside the band.
    let mirror = |v: f64| -> Option<f64> {
        if v < l && l - v <= band {
            Some(2.0 * l - v)
        } else if v > -l && v + l <= band {
            Some(-2.0 * l - v)
        } else {
            None
        }
    };

    let mut positions = cloud.positions().to_vec();
    let mut normals = cloud.normals().to_vec();
    let mut labels = cloud.labels().to_vec();
    let mut sources = Vec::new();
    for (i, x) in cloud.positions().iter().enumerate() {
        let (mx, my) = (mirror(x.x), mirror(x.y));
        let images = [
            mx.map(|gx| Vec3::new(gx, x.y, x.z)),
            my.map(|gy| Vec3::new(x.x, gy, x.z)),
            mx.zip(my).map(|(gx, gy)| Vec3::new(gx, gy, x.z)),
        ];
        for g in images.into_iter().flatten() {
            positions.push(g);
            normals.push(cloud.normal(i));
            labels.push(PointLabel::Ghost);
            sources.push(i);
        }
    }
    let augmented = SurfacePointCloud::with_labels(3, positions, normals, labels)?;
    Ok((
        augmented,
        GhostMap {
            real: cloud.len(),
            sources,
        },
    ))
}

/// Copies every source value onto its ghosts.
pub fn sync_ghosts(field: &mut [f64], map: &GhostMap) {
    for (g, s) in map.pairs() {
        field[g] = field[s];
    }
}
