use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular matrix: determinant is zero")]
    Singular,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("fiber type {0} is irreducible; only reducible Kodaira fibers are cataloged")]
    Irreducible(String),

    #[error("unknown fiber type `{0}`")]
    UnknownKind(String),

    #[error("component index {index} out of range for fiber {kind} with {count} components")]
    ComponentOutOfRange {
        kind: String,
        index: usize,
        count: usize,
    },

    #[error("vector {0} is not in the dual lattice")]
    NotInDualLattice(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("intersection number {0}·{1} is not recorded")]
    MissingIntersection(String, String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("inconsistent intersection data: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate arrangement: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by malformed input, as opposed to well-formed input whose
    /// mathematical content does not check out.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnknownKind(_)
                | Error::Irreducible(_)
                | Error::Parse(_)
                | Error::Degenerate(_)
                | Error::InvalidProfile(_)
                | Error::UnknownSymbol(_)
                | Error::Dimension(_)
                | Error::ComponentOutOfRange { .. }
        )
    }
}
