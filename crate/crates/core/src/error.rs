use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: syntax, invariant violations in files, empty inputs.
    Parse,
    /// Well-formed input that does not fit together (dimensions, node sets, names).
    Semantic,
    Io,
    /// A size cap or evaluation budget was hit.
    Limit,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative weight {0}")]
    NegativeWeight(f64),
    #[error("non-finite weight {0}")]
    NonFiniteWeight(f64),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("edge type `{0}` has no nonzero weight")]
    ZeroEdgeType(String),
    #[error("negative composite weight {value} on edge `{u}`-`{v}` (enable clamping to truncate)")]
    NegativeComposite { u: String, v: String, value: f64 },
    #[error("unknown edge type `{0}`")]
    UnknownEdgeType(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown cluster label {0}")]
    UnknownCluster(usize),
    #[error("node set mismatch: {0}")]
    NodeSetMismatch(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph has zero total edge weight")]
    ZeroTotalWeight,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("objective returned NaN at {0:?}")]
    NonFiniteObjective(Vec<f64>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn at_line(self, line: usize) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    pub fn io(path: impl fmt::Display, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::AtLine { source, .. } => match source.kind() {
                // A dimension problem inside a file is still a dimension problem.
                ErrorKind::Semantic => ErrorKind::Semantic,
                _ => ErrorKind::Parse,
            },
            Error::Parse(_)
            | Error::NegativeWeight(_)
            | Error::NonFiniteWeight(_)
            | Error::SelfLoop(_)
            | Error::DuplicateEdge(..)
            | Error::DuplicateNode(_)
            | Error::EmptyGraph
            | Error::ZeroTotalWeight => ErrorKind::Parse,
            Error::DimensionMismatch { .. }
            | Error::ZeroEdgeType(_)
            | Error::NegativeComposite { .. }
            | Error::UnknownEdgeType(_)
            | Error::UnknownNode(_)
            | Error::UnknownCluster(_)
            | Error::NodeSetMismatch(_)
            | Error::InvalidParameter(_)
            | Error::NonFiniteObjective(_) => ErrorKind::Semantic,
            Error::LimitExceeded(_) => ErrorKind::Limit,
            Error::Io { .. } => ErrorKind::Io,
        }
    }
}
