use thiserror::Error;

/// Errors raised by the geometry, energy, bounds, competitor and optimizer layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElasticaError {
    #[error("convexity violated: min radius of curvature {min_radius:.3e} below floor {floor:.3e}")]
    ConvexityViolation { min_radius: f64, floor: f64 },

    #[error("degenerate shape: {0}")]
    DegenerateShape(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("polyline is not convex (turn {cross:.3e} at vertex {vertex})")]
    NonConvexPolyline { vertex: usize, cross: f64 },

    #[error("point ({x}, {y}) lies outside the shape")]
    PointOutside { x: f64, y: f64 },

    #[error("containment inner ⊆ outer could not be verified (support excess {excess:.3e})")]
    ContainmentUnverified { excess: f64 },

    #[error("quadrature underflow: {0}")]
    QuadratureUnderflow(String),

    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    #[error("frame missing: {0}")]
    FrameMissing(String),

    #[error("tangent direction not found: {0}")]
    TangentNotFound(String),

    #[error("{value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    #[error("epsilon {eps} too large: {reason}")]
    EpsilonTooLarge { eps: f64, reason: String },

    #[error("fit unstable: {0}")]
    FitUnstable(String),

    #[error("projection onto the convex class failed after {0} dampings")]
    ProjectionFailed(usize),

    #[error("line search failed at iteration {0}")]
    LineSearchFailed(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl ElasticaError {
    /// Input problems (malformed files, bad flags) as opposed to domain failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            ElasticaError::Parse(_)
                | ElasticaError::Io(_)
                | ElasticaError::InvalidParameter(_)
                | ElasticaError::InvalidShape(_)
        )
    }
}

impl From<std::io::Error> for ElasticaError {
    fn from(e: std::io::Error) -> Self {
        ElasticaError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for ElasticaError {
    fn from(e: serde_json::Error) -> Self {
        ElasticaError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ElasticaError>;
