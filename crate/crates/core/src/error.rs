use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Mathematical verdicts (an infinite root system, a vanishing element) are
/// never errors; they are values. The variants here are contract violations,
/// malformed input, or exhausted resource caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation is undefined on zero")]
    ZeroInput,
    #[error("index {index} out of range for rank {theta}")]
    IndexOutOfRange { index: usize, theta: usize },
    #[error("indices must differ (got {0} twice)")]
    EqualIndices(usize),
    #[error("invalid braiding matrix: {0}")]
    InvalidMatrix(String),
    #[error("diagonal entry q_{{{0}{0}}} equals 1")]
    TrivialDiagonal(usize),
    #[error("cannot reflect at vertex {0}")]
    NotReflectable(usize),
    #[error("generalized Cartan matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("generalized Cartan matrix is decomposable")]
    Decomposable,
    #[error("invalid generalized Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("element is not homogeneous")]
    InhomogeneousInput,
    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("denominator vanishes: {0}")]
    DenominatorVanishes(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("order undefined: {0}")]
    OrderUndefined(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("rank {0} not supported here (rank 2 required)")]
    RankMismatch(usize),
    #[error("parse error in {context} at line {line}, column {column}: {message}")]
    Parse {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
