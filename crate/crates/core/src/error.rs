use std::fmt;

use thiserror::Error;

pub type Result<T, E = SvmError> = std::result::Result<T, E>;

/// Where in an input a parse failure was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line number in a text document.
    Line(usize),
    /// Byte offset in a binary stream.
    Offset(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Offset(n) => write!(f, "byte offset {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEof(&'static str),
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("non-finite value `{0}`")]
    NonFinite(String),
    #[error("unsupported kernel type {0} (only the linear kernel 0 is accepted)")]
    UnsupportedKernel(i64),
    #[error("malformed feature pair `{0}`")]
    BadPair(String),
    #[error("feature index {index} is not greater than previous index {previous}")]
    IndexOrder { index: usize, previous: usize },
    #[error("dimension mismatch: feature index {index} outside 1..={limit}")]
    IndexRange { index: usize, limit: usize },
    #[error("declared {declared} support vectors but found {found}")]
    SvCount { declared: usize, found: usize },
    #[error("invalid label `{0}` (expected 1, -1 or 0)")]
    BadLabel(String),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub location: Location,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn line(line: usize, kind: ParseErrorKind) -> Self {
        Self {
            location: Location::Line(line),
            kind,
        }
    }

    pub fn offset(offset: usize, kind: ParseErrorKind) -> Self {
        Self {
            location: Location::Offset(offset),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvmError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value in {context} at {index:?}")]
    NonFiniteValue {
        context: &'static str,
        index: Vec<usize>,
    },
    #[error("empty model: {0}")]
    EmptyModel(&'static str),
    #[error("empty dataset")]
    EmptyDataset,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(
        "calibration underdetermined: {observations} observations for {free} free coefficients"
    )]
    UnderdeterminedFit { observations: usize, free: usize },
    #[error("calibration system is singular (observations do not separate the free coefficients)")]
    SingularSystem,
    #[error("BRAM overflow: {required} blocks required, {available} available")]
    BramOverflow { required: usize, available: usize },
    #[error("invalid calibration profile: {0}")]
    InvalidProfile(String),
}

impl SvmError {
    pub(crate) fn mismatch(context: &'static str, expected: usize, found: usize) -> Self {
        SvmError::DimensionMismatch {
            context,
            expected,
            found,
        }
    }

    pub(crate) fn non_finite(context: &'static str, index: Vec<usize>) -> Self {
        SvmError::NonFiniteValue { context, index }
    }
}
