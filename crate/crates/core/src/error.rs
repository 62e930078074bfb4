use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("degenerate curve: {0}")]
    Degenerate(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("edges {0:?} do not form a connected subcurve")]
    DisconnectedSubcurve(Vec<String>),
    #[error("wrong genus: expected {expected}, found {found}")]
    WrongGenus { expected: String, found: usize },
    #[error("singular lattice: {0}")]
    SingularLattice(String),
    #[error("operation requires numeric edge lengths")]
    SymbolicLengths,
    #[error("chain is not balanced at vertex {0}")]
    NotBalanced(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("homology class is not integral: {0}")]
    NonIntegralClass(String),
    #[error("degenerate segment of zero length")]
    DegenerateSegment,
    #[error("boundary equation has no integral solution")]
    NoSolution,
    #[error("chain is not supported on the 1-skeleton: {0}")]
    UnsupportedChain(String),
    #[error("edge {0:?} is a bridge")]
    BridgeEdge(String),
    #[error("not a subcurve: {0}")]
    NotASubcurve(String),
    #[error("wrong rank: {0}")]
    WrongRank(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
