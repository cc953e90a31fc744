use thiserror::Error;

/// Crate-wide error type.
///
/// `kind()` separates "the requested configuration is not supported" from
/// genuine internal failures, so callers (the CLI in particular) can map
/// errors onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus polynomial is not irreducible over its base field")]
    ReducibleModulus,

    #[error("modulus polynomial must be monic of degree >= 1")]
    BadModulus,

    #[error("field tower too large: order exceeds u64")]
    TowerTooLarge,

    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),

    #[error("division by zero in a finite field")]
    ZeroInverse,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("ideal choice degenerate; re-seed ({0})")]
    DegenerateIdeal(String),

    #[error("generated group has order {0}, matching neither PSL nor PGL; re-seed the ideal")]
    QuotientUnclassified(u64),

    #[error("enumeration incomplete: cap {cap} exceeded")]
    IncompleteEnumeration { cap: usize },

    #[error("generators do not generate the group: reached {reached} of {total}")]
    DoesNotGenerate { reached: usize, total: usize },

    #[error("element not found in enumerated group")]
    NotInGroup,

    #[error(
        "matrix entries do not fit the {bits}-bit canonical key (dim {dim}, field order {order})"
    )]
    KeyOverflow { bits: u32, dim: usize, order: u64 },

    #[error("graph invariant violated: {0}")]
    GraphInvariant(String),

    #[error("dense path supports n <= {cap}, got n = {n}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("brute-force expansion supports n <= {cap}, got n = {n}")]
    ExpansionCapExceeded { n: usize, cap: usize },

    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("expected trivial eigenvalue {value} not present in spectrum")]
    MissingTrivialEigenvalue { value: f64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed input: {0}")]
    Parse(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The configuration is outside what the tool supports (exit code 2).
    Unsupported,
    /// Everything else (exit code 1).
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Unsupported(_)
            | Error::DegenerateIdeal(_)
            | Error::IncompleteEnumeration { .. }
            | Error::DenseCapExceeded { .. }
            | Error::ExpansionCapExceeded { .. } => ErrorKind::Unsupported,
            _ => ErrorKind::Internal,
        }
    }

    /// Whether retrying the same configuration with another seed could
    /// plausibly succeed (a different ideal/basis gets drawn).
    pub fn is_reseedable(&self) -> bool {
        matches!(
            self,
            Error::DegenerateIdeal(_) | Error::QuotientUnclassified(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
