use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },

    #[error("path needs at least 2 distinct vertices, got {0}")]
    TooFewVertices(usize),

    #[error("zero-length segment between vertices {0} and {1}")]
    ZeroLengthSegment(usize, usize),

    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),

    #[error("cusp at vertex {0}: path turns back on itself")]
    Cusp(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("endpoints are antipodal; closing geodesic is not unique")]
    Antipodal,

    #[error("carving produced a non-manifold intermediate at cut {cut}: {reason}")]
    NonManifold { cut: usize, reason: String },

    #[error("bore runs through a thin shell region: {0}")]
    ThinShell(String),

    #[error("malformed STL: {0}")]
    MalformedStl(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Returns an `InvalidParameter` error unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {value}")))
    }
}
