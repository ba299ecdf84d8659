use thiserror::Error;

/// Formats 0-based index pairs as 1-based `(x, y)` lists for messages.
fn pairs_1based(pairs: &[(usize, usize)]) -> String {
    let parts: Vec<String> = pairs
        .iter()
        .map(|(x, y)| format!("({}, {})", x + 1, y + 1))
        .collect();
    parts.join(", ")
}

/// Errors raised by the analyses in this crate.
///
/// Every index carried by a variant is 0-based; the `Display` output is 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NaN cannot be stored as an extended real")]
    NotANumber,

    #[error("+inf cannot be stored as an extended real")]
    PositiveInfinity,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({}, {}) = {value} is not a finite nonnegative real", .row + 1, .col + 1)]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("walk supremum is +inf at {}", pairs_1based(.pairs))]
    Divergent { pairs: Vec<(usize, usize)> },

    #[error("no usable basepoint{}", match .basepoint { Some(b) => format!(" at {}", b + 1), None => String::new() })]
    BasepointUnusable { basepoint: Option<usize> },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("generators are not indecomposable: ({}, {}) is zero in every product", .row + 1, .col + 1)]
    NotIndecomposable { row: usize, col: usize },

    #[error("element {} has diagonal entry ({}, {}) = {value}, not in {{0, 1}}", .element + 1, .index + 1, .index + 1)]
    NotBinaryDiagonal {
        element: usize,
        index: usize,
        value: f64,
    },

    #[error("rescaled element {} has entry ({}, {}) = {value}, not in {{0, 1}}", .element + 1, .row + 1, .col + 1)]
    NotBinaryAfterRescale {
        element: usize,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("closure enumeration stopped at {size} elements before reaching a fixpoint")]
    ClosureIncomplete { size: usize },

    #[error("matrix is not a projection (residual {residual:e})")]
    NotAProjection { residual: f64 },

    #[error("block {:?} is not rank one (residual {residual:e})", .indices.iter().map(|i| i + 1).collect::<Vec<_>>())]
    BlockNotRankOne { indices: Vec<usize>, residual: f64 },

    #[error("the positive semidefinite part of the set is empty")]
    EmptyPositivePart,

    #[error("truncation length {len} is shorter than the required {required}")]
    TruncationTooShort { len: usize, required: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
