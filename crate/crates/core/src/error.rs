use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the engine. Each variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("degree must be positive")]
    EmptyDegree,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("element {0} is not a member of the group")]
    NotMember(String),

    #[error("subgroup is not normal: generator {0} conjugates it outside itself")]
    NotNormal(String),

    #[error("group order {order} exceeds the desk-scale bound {bound} (set BLOCKFUNCTOR_MAX_ORDER to raise it)")]
    SizeBound { order: String, bound: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("malformed marked pair: {0}")]
    MalformedPair(String),

    #[error("no prime q = 1 mod {exponent} with {lower} < q <= {cap}")]
    NoPrime { exponent: u64, lower: u64, cap: u64 },

    #[error("tables were built against different class registries")]
    RegistryMismatch,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
}

impl Error {
    /// Process exit code for the CLI: 2 parse, 3 domain, 4 internal or theorem check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Internal(_) | Error::TheoremViolation(_) => 4,
            _ => 3,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
