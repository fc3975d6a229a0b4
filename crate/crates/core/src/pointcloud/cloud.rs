use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Coordinates in the embedding space. Two-dimensional clouds keep `z = 0`.
pub type Vec3 = Vector3<f64>;

/// Maximum deviation of a stored normal from unit length.
pub const UNIT_NORMAL_TOL: f64 = 1e-12;

/// Two points closer than this fraction of the cloud diameter count as coincident.
pub const COINCIDENT_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PointLabel {
    #[default]
    Interior,
    Dirichlet,
    Ghost,
}

impl PointLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PointLabel::Interior => "interior",
            PointLabel::Dirichlet => "dirichlet",
            PointLabel::Ghost => "ghost",
        }
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PointLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "interior" => Ok(PointLabel::Interior),
            "dirichlet" => Ok(PointLabel::Dirichlet),
            "ghost" => Ok(PointLabel::Ghost),
            other => Err(Error::InvalidInput(format!(
                "unknown point label '{other}'"
            ))),
        }
    }
}

/// Collocation points on a curve (in 2D) or surface (in 3D) together with
/// their unit normals.
///
/// The cloud is validated on construction and immutable afterwards: all
/// normals are unit length, the per-point arrays have equal length and no two
/// points coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePointCloud {
    dim: usize,
    positions: Vec<Vec3>,
    normals: Vec<Vec3>,
    labels: Vec<PointLabel>,
}

impl SurfacePointCloud {
    /// Builds a cloud with every point labeled [`PointLabel::Interior`].
    pub fn new(dim: usize, positions: Vec<Vec3>, normals: Vec<Vec3>) -> Result<Self> {
        let labels = vec![PointLabel::Interior; positions.len()];
        Self::with_labels(dim, positions, normals, labels)
    }

    pub fn with_labels(
        dim: usize,
        positions: Vec<Vec3>,
        normals: Vec<Vec3>,
        labels: Vec<PointLabel>,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidInput(format!(
                "embedding dimension must be 2 or 3, got {dim}"
            )));
        }
        if positions.len() != normals.len() || positions.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "length mismatch: {} positions, {} normals, {} labels",
                positions.len(),
                normals.len(),
                labels.len()
            )));
        }
        for (i, (x, n)) in positions.iter().zip(&normals).enumerate() {
            if x.iter().chain(n.iter()).any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("point {i} is not finite")));
            }
            if dim == 2 && (x.z != 0.0 || n.z != 0.0) {
                return Err(Error::InvalidInput(format!(
                    "point {i} has a z component in a 2D cloud"
                )));
            }
            if (n.norm() - 1.0).abs() > UNIT_NORMAL_TOL {
                return Err(Error::InvalidInput(format!(
                    "normal of point {i} has length {}",
                    n.norm()
                )));
            }
        }
        let cloud = Self {
            dim,
            positions,
            normals,
            labels,
        };
        if let Some((p, q)) = cloud.find_coincident_pair() {
            return Err(Error::InvalidInput(format!("points {p} and {q} coincide")));
        }
        Ok(cloud)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn labels(&self) -> &[PointLabel] {
        &self.labels
    }

    pub fn position(&self, i: usize) -> Vec3 {
        self.positions[i]
    }

    pub fn normal(&self, i: usize) -> Vec3 {
        self.normals[i]
    }

    pub fn label(&self, i: usize) -> PointLabel {
        self.labels[i]
    }

    /// Replaces the labels, keeping geometry untouched.
    pub fn relabel(mut self, labels: Vec<PointLabel>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn diameter(&self) -> f64 {
        if self.positions.is_empty() {
            return 0.0;
        }
        let mut lo = self.positions[0];
        let mut hi = self.positions[0];
        for x in &self.positions {
            lo = lo.inf(x);
            hi = hi.sup(x);
        }
        (hi - lo).norm()
    }

    /// Consumes the cloud and returns its raw arrays.
    pub fn into_parts(self) -> (usize, Vec<Vec3>, Vec<Vec3>, Vec<PointLabel>) {
        (self.dim, self.positions, self.normals, self.labels)
    }

    fn find_coincident_pair(&self) -> Option<(usize, usize)> {
        if self.len() < 2 {
            return None;
        }
        let tol = COINCIDENT_REL_TOL * self.diameter();
        if tol == 0.0 {
            return Some((0, 1));
        }
        let close = super::neighbors::neighbors_within(&self.positions, tol);
        close
            .iter()
            .enumerate()
            .find_map(|(p, nb)| nb.first().map(|&q| (p.min(q), p.max(q))))
    }
}
