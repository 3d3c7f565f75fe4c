use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("q must be at least 3, got {0}")]
    InvalidQ(i64),

    #[error("field mismatch: q={left} vs q={right}")]
    FieldMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("({a}, {c}) is not a coprime pair with c > 0")]
    NotCoprime { a: String, c: String },

    #[error("matrix does not have determinant 1")]
    DeterminantNotOne,

    #[error("lower-left entry is zero: the double coset is trivial")]
    TrivialDoubleCoset,

    #[error("three-term relation needs nonzero lower-left entries")]
    ZeroLowerLeft,

    #[error("row does not come from an element of the Hecke group: {0}")]
    NotInGroup(String),

    #[error("reduction exceeded {0} iterations")]
    IterationCap(usize),

    #[error("cocycle value {0} outside {{-1, -1/2, 0, 1/2, 1}}")]
    OmegaOutOfRange(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),

    #[error("minimal polynomial check failed for q={0}")]
    MinimalPolynomial(u32),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
