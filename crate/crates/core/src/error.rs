use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("coordinate {value} of digit {digit:?} is outside 0..{base}")]
    CoordinateOutOfRange { digit: Vec<i64>, value: i64, base: u64 },
    #[error("duplicate digit {0:?}")]
    DuplicateDigit(Vec<u64>),
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u64),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("digit set is empty")]
    EmptyDigitSet,
    #[error("digit {digit:?} has {found} coordinates, expected {expected}")]
    DigitArity {
        digit: Vec<i64>,
        expected: usize,
        found: usize,
    },
    #[error("operation requires dimension {expected}, digit set has dimension {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(String),
    #[error("memory budget exceeded{}: {required} bytes required, {allowed} allowed", level_note(*.level))]
    BudgetExceeded {
        required: u64,
        allowed: u64,
        level: Option<u32>,
    },
    #[error("slice fixes {found} axes, {expected} must be fixed to leave two free axes")]
    SliceArity { expected: usize, found: usize },
    #[error("slice is invalid: {0}")]
    InvalidSlice(String),
    #[error("cell {0:?} is outside the grid")]
    CellOutOfRange(Vec<u64>),
    #[error("cell {0:?} is not occupied")]
    CellUnoccupied(Vec<u64>),
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("graph-directed system has an empty attractor (spectral radius 0)")]
    EmptyAttractor,
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("duplicate edge {from:?} -> {to:?} with digit {digit:?}")]
    DuplicateEdge {
        from: String,
        to: String,
        digit: Vec<u64>,
    },
    #[error("graph has base {graph_base} and dimension {graph_dim}, digit set has base {set_base} and dimension {set_dim}")]
    GraphMismatch {
        graph_base: u64,
        graph_dim: usize,
        set_base: u64,
        set_dim: usize,
    },
    #[error("graph edge uses digit {0:?}, which is not in the digit set")]
    DigitNotInSet(Vec<u64>),
    #[error("graph file: {0}")]
    GraphFormat(String),
    #[error("portable bitmap: {0}")]
    Pbm(String),
    #[error("exact connectedness index {exact} exceeds the upper bound {upper}")]
    ExactExceedsUpper { exact: f64, upper: f64 },
}

fn level_note(level: Option<u32>) -> String {
    match level {
        Some(k) => format!(" at level {k}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn at_level(self, k: u32) -> Self {
        match self {
            Error::BudgetExceeded {
                required, allowed, ..
            } => Error::BudgetExceeded {
                required,
                allowed,
                level: Some(k),
            },
            other => other,
        }
    }

    /// True for errors caused by malformed input text.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::CoordinateOutOfRange { .. }
                | Error::DuplicateDigit(_)
                | Error::BaseTooSmall(_)
                | Error::ZeroDimension
                | Error::EmptyDigitSet
                | Error::DigitArity { .. }
                | Error::GraphFormat(_)
                | Error::UnknownNode(_)
                | Error::DuplicateNode(_)
                | Error::DuplicateEdge { .. }
        )
    }

    pub fn is_budget_error(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Overflow(_))
    }
}
