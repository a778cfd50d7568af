use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A query or product fell outside the coverage of the ground table.
    #[error("value {value} is out of range (table limit {limit})")]
    OutOfRange { value: u128, limit: u64 },

    #[error("rank index {index} is out of range (table size {size})")]
    IndexOutOfRange { index: u64, size: u64 },

    #[error("{0} is not a member of the ground set")]
    NotMember(u64),

    #[error("finite product over subset {subset:?} is out of range (table limit {limit})")]
    SubsetOutOfRange { subset: Vec<usize>, limit: u64 },

    #[error("building a table with limit {limit} needs about {needed} bytes, budget is {budget}")]
    ResourceExhausted {
        limit: u64,
        needed: u64,
        budget: u64,
    },

    #[error("corrupt cache file: {0}")]
    CorruptCache(String),

    #[error("cache predicate mismatch: file has {found:?}, expected {expected:?}")]
    PredicateMismatch { expected: String, found: String },

    #[error("{value} is outside the coloring domain (bound {bound})")]
    OutOfDomain { value: u64, bound: u64 },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("enumeration of {r}^{bound} colorings exceeds the cap of {cap}")]
    CapExceeded { r: u32, bound: u64, cap: u64 },

    #[error("blocks are not increasing: block {0} does not lie entirely before block {1}")]
    OrderViolation(usize, usize),

    #[error("located words overlap at position {0}")]
    DomainOverlap(u64),

    #[error("letter {letter} outside alphabet of size {q}")]
    LetterOutOfAlphabet { letter: u32, q: u32 },

    #[error("gamma must be nonempty")]
    EmptyGamma,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for the errors that mean "the table is too small for this query".
    pub fn is_out_of_range(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange { .. }
                | Error::IndexOutOfRange { .. }
                | Error::SubsetOutOfRange { .. }
        )
    }
}
