use thiserror::Error;

/// Errors raised by the corrections, the algebra model and the harness.
///
/// Variants fall into two families. Hypothesis failures (see
/// [`Error::is_hypothesis_failure`]) mean the input was well formed but too
/// far from the structure for the construction to apply; everything else is
/// an input or I/O problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (‖b − b*‖ = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not skew-Hermitian (‖k + k*‖ = {defect:.3e})")]
    NotSkewHermitian { defect: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("hypothesis failed at stage `{stage}`: defect {defect:.6e} must be below {limit}")]
    DefectTooLarge {
        stage: String,
        defect: f64,
        limit: f64,
    },

    #[error("projections too far apart for a conjugating unitary (‖q − p‖ = {distance:.6e}, must be < 1)")]
    ProjectionsTooFar { distance: f64 },

    #[error("matrix is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("matrix is not a partial isometry (residual {residual:.3e})")]
    NotPartialIsometry { residual: f64 },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("compressed operator is singular on the initial projection (‖b*b − P‖ = {defect:.6e}, must be < 1)")]
    CompressionSingular { defect: f64 },

    #[error("ambiguous support: large entries ({}, {}) and ({}, {}) share a row or column", .first.0 + 1, .first.1 + 1, .second.0 + 1, .second.1 + 1)]
    AmbiguousSupport {
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("masa is not refined: target cell {cell:?} straddles a source cell boundary")]
    NotRefined { cell: Vec<usize> },

    #[error("support mismatch: entry ({}, {}) leaves the target pattern", .pair.0 + 1, .pair.1 + 1)]
    SupportMismatch { pair: (usize, usize) },

    #[error("frame mismatch on edge ({}, {}): {detail}", .edge.0 + 1, .edge.1 + 1)]
    FrameMismatch { edge: (usize, usize), detail: String },

    #[error("ambient dimension {dim} exceeds the limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("tower level {level}: {source}")]
    AtLevel { level: usize, source: Box<Error> },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for the "input too far from structure" family (CLI exit code 2).
    pub fn is_hypothesis_failure(&self) -> bool {
        if let Error::AtLevel { source, .. } = self {
            return source.is_hypothesis_failure();
        }
        matches!(
            self,
            Error::DefectTooLarge { .. }
                | Error::ProjectionsTooFar { .. }
                | Error::RankMismatch { .. }
                | Error::CompressionSingular { .. }
                | Error::AmbiguousSupport { .. }
                | Error::NotRefined { .. }
                | Error::SupportMismatch { .. }
                | Error::FrameMismatch { .. }
        )
    }

    /// Stage label used in experiment reports.
    pub fn stage(&self) -> String {
        match self {
            Error::DefectTooLarge { stage, .. } => stage.clone(),
            Error::ProjectionsTooFar { .. } => "conjugating-unitary".into(),
            Error::CompressionSingular { .. } => "edge-compression".into(),
            Error::RankMismatch { .. } => "rank".into(),
            Error::AmbiguousSupport { .. } => "normalizer-support".into(),
            Error::NotRefined { .. } => "masa-containment".into(),
            Error::SupportMismatch { .. } => "word-support".into(),
            Error::FrameMismatch { .. } => "edge-frame".into(),
            Error::AtLevel { level, source } => format!("level{level}:{}", source.stage()),
            _ => "input".into(),
        }
    }

    pub(crate) fn dims(expected: (usize, usize), found: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            expected: format!("{}x{}", expected.0, expected.1),
            found: format!("{}x{}", found.0, found.1),
        }
    }

    pub(crate) fn too_large(stage: impl Into<String>, defect: f64, limit: f64) -> Self {
        Error::DefectTooLarge {
            stage: stage.into(),
            defect,
            limit,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
