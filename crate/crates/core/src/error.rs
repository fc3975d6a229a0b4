use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied an argument outside the documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {index} has no neighbors within the cutoff radius")]
    IsolatedPoint { index: usize },

    /// The moment matrix of a kernel neighborhood is rank deficient, e.g. all
    /// points on a line while asking for a derivative across it.
    #[error("degenerate point distribution{}: pivot ratio {pivot_ratio:.3e}", point_suffix(*.point))]
    DegenerateDistribution {
        point: Option<usize>,
        pivot_ratio: f64,
    },

    #[error("singular matrix: pivot ratio {pivot_ratio:.3e}")]
    SingularMatrix { pivot_ratio: f64 },

    #[error("iterative solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("non-finite value in the solution at step {step}")]
    BlowUp { step: usize },

    #[error("shape tensor at point {point} has a complex eigenvalue pair that cannot be separated from the normal direction")]
    IllConditionedShape { point: usize },

    #[error("all neighbors of point {point} are collinear; cannot estimate a normal")]
    DegenerateCovariance { point: usize },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("point cloud has no normals (pass --estimate-normals to compute them)")]
    MissingNormals,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn point_suffix(point: Option<usize>) -> String {
    point.map(|p| format!(" at point {p}")).unwrap_or_default()
}

impl Error {
    /// True for failures of the numerics (as opposed to bad configuration or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IsolatedPoint { .. }
                | Error::DegenerateDistribution { .. }
                | Error::SingularMatrix { .. }
                | Error::NotConverged { .. }
                | Error::BlowUp { .. }
                | Error::IllConditionedShape { .. }
                | Error::DegenerateCovariance { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
