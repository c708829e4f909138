use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = FifError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum FifError {
    #[error("fuzzy numbers are defined on different level grids")]
    GridMismatch,
    #[error("sample lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid level grid: {0}")]
    InvalidGrid(String),
    #[error("level intervals are not nested: {0}")]
    NotNested(String),
    #[error("membership function is not normal (peak {peak})")]
    NonNormal { peak: f64 },
    #[error("level set at λ = {lambda} is disconnected")]
    NonConvexLevels { lambda: f64 },
    #[error("membership function has unbounded support")]
    UnboundedSupport,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("degenerate interval between knots {left} and {right}")]
    DegenerateInterval { left: f64, right: f64 },
    #[error("x = {x} lies outside interval [{lo}, {hi}]")]
    OutOfInterval { x: f64, lo: f64, hi: f64 },
    #[error("{value} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("vertical scaling factor s_{index} = {value} is outside [0, 1)")]
    ScaleOutOfRange { index: usize, value: f64 },
    #[error("matching condition not verified: {0}")]
    MatchingNotVerified(String),
    #[error(
        "no convergence after {depth} sweeps (last displacement {residual:e}, target {target:e})"
    )]
    NoConvergence {
        depth: usize,
        residual: f64,
        target: f64,
    },
    #[error("free exponent τ = {0} must lie in (0, 1)")]
    InvalidTauChoice(f64),
    #[error("derived Hölder exponent τ = {0} is not positive")]
    NonPositiveExponent(f64),
    #[error("step {step:e} is below the evaluation grid spacing {spacing:e}")]
    InsufficientResolution { step: f64, spacing: f64 },
    #[error("θ = {0} is outside the admissible range")]
    InvalidTheta(f64),
    #[error("cannot parse configuration: {0}")]
    ConfigParse(String),
    #[error("configuration violates schema: {0}")]
    SchemaViolation(String),
    #[error("I/O error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl FifError {
    /// Stable, machine-parsable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            FifError::GridMismatch => "GridMismatch",
            FifError::LengthMismatch { .. } => "LengthMismatch",
            FifError::InvalidGrid(_) => "InvalidGrid",
            FifError::NotNested(_) => "NotNested",
            FifError::NonNormal { .. } => "NonNormal",
            FifError::NonConvexLevels { .. } => "NonConvexLevels",
            FifError::UnboundedSupport => "UnboundedSupport",
            FifError::InvalidParameters(_) => "InvalidParameters",
            FifError::DegenerateInterval { .. } => "DegenerateInterval",
            FifError::OutOfInterval { .. } => "OutOfInterval",
            FifError::OutOfDomain { .. } => "OutOfDomain",
            FifError::ScaleOutOfRange { .. } => "ScaleOutOfRange",
            FifError::MatchingNotVerified(_) => "MatchingNotVerified",
            FifError::NoConvergence { .. } => "NoConvergence",
            FifError::InvalidTauChoice(_) => "InvalidTauChoice",
            FifError::NonPositiveExponent(_) => "NonPositiveExponent",
            FifError::InsufficientResolution { .. } => "InsufficientResolution",
            FifError::InvalidTheta(_) => "InvalidTheta",
            FifError::ConfigParse(_) => "ConfigParse",
            FifError::SchemaViolation(_) => "SchemaViolation",
            FifError::Io { .. } => "Io",
        }
    }

    /// Process exit status: 2 validation, 3 convergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            FifError::NoConvergence { .. } => 3,
            FifError::Io { .. } => 4,
            _ => 2,
        }
    }
}
