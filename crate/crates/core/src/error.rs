use thiserror::Error;

use crate::chains::ChainError;
use crate::diamfn::AxiomReport;
use crate::scalar::Scalar;
use crate::space::Violation;
use crate::subset::SubsetId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A subset whose prescribed value differs from its diameter in the
/// synthesized space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamMismatch {
    pub subset: SubsetId,
    pub tau: Scalar,
    pub diam: Scalar,
}

/// Why a matrix entry is not an admissible distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricFault {
    Negative,
    NonzeroDiagonal,
    ZeroOffDiagonal,
    Asymmetric,
}

impl std::fmt::Display for MetricFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MetricFault::Negative => "negative distance",
            MetricFault::NonzeroDiagonal => "nonzero diagonal entry",
            MetricFault::ZeroOffDiagonal => "zero distance between distinct points",
            MetricFault::Asymmetric => "entry differs from its mirror",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input text. `line` and `column` are 1-based when known.
    #[error("parse error{}: {message}", location(*line, *column))]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("metric error at ({row},{col}): {fault}")]
    Metric { row: usize, col: usize, fault: MetricFault },

    #[error("not an ultrametric: {0}")]
    NotUltrametric(Box<Violation>),

    #[error("subset is empty")]
    EmptySubset,

    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("operation needs at least 2 points, got {n}")]
    DegenerateSpace { n: usize },

    #[error("{what} supports at most {cap} points, got {n}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("diameter function violates its axioms: {0}")]
    AxiomViolation(Box<AxiomReport>),

    #[error("tau({}) = {} but the synthesized diameter is {}", .0.subset, .0.tau, .0.diam)]
    DiamMismatch(Box<DiamMismatch>),

    #[error("a single part cannot be realized: the diametrical relation of a finite space is never universal")]
    UniversalRelation,

    #[error("need 0 < inner < outer, got inner = {inner}, outer = {outer}")]
    BadScales { inner: Scalar, outer: Scalar },

    #[error("apex level {level} must exceed the diameter {diam}")]
    ApexTooClose { level: Scalar, diam: Scalar },

    #[error("graph is not the complete multipartite graph of the given partition{}", .0.as_ref().map(|(u, v)| format!(" (pair {u},{v})")).unwrap_or_default())]
    NotCompleteMultipartiteInput(Option<(usize, usize)>),

    #[error("invalid chain: {0}")]
    Chain(ChainError),

    #[error("invalid dendrogram at node path {path:?}: {reason}")]
    InvalidDendrogram { path: Vec<usize>, reason: String },

    #[error("spectrum values must contain 0")]
    MissingZero,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse { line: None, column: None, message: message.into() }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::Shape(_) => "ShapeError",
            Error::Metric { .. } => "MetricError",
            Error::NotUltrametric(_) => "Violation",
            Error::EmptySubset => "EmptySubset",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegenerateSpace { .. } => "DegenerateSpace",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::AxiomViolation(_) => "AxiomViolation",
            Error::DiamMismatch(_) => "DiamMismatch",
            Error::UniversalRelation => "UniversalRelation",
            Error::BadScales { .. } => "BadScales",
            Error::ApexTooClose { .. } => "ApexTooClose",
            Error::NotCompleteMultipartiteInput(_) => "NotCompleteMultipartiteInput",
            Error::Chain(_) => "ChainError",
            Error::InvalidDendrogram { .. } => "InvalidDendrogram",
            Error::MissingZero => "MissingZero",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidPartition(_) => "InvalidPartition",
        }
    }

    /// True for errors caused by unreadable input rather than by the
    /// mathematical content of well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Shape(_))
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::NotUltrametric(Box::new(v))
    }
}

impl From<ChainError> for Error {
    fn from(e: ChainError) -> Self {
        Error::Chain(e)
    }
}
