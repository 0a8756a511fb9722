use num_bigint::BigInt;
use thiserror::Error;

/// Errors shared across the crate. Variants are grouped by layer; the CLI
/// maps them onto its exit-code contract.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    // --- linear algebra / polynomials ---
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial degree {got} exceeds the factorization capability cap {cap}")]
    DegreeCapExceeded { cap: usize, got: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    // --- spec-level ---
    #[error("invalid spec: {}", .0.join("; "))]
    SpecInvalid(Vec<String>),
    #[error("spec data is inconsistent: {0}")]
    SpecInconsistent(String),
    #[error("unsupported spec for class enumeration: {0}")]
    UnsupportedSpec(String),

    // --- sequence-level ---
    #[error("value at iterate {k} is infinite")]
    InfiniteValue { k: u64 },
    #[error("missing sequence value at divisor level {k}")]
    MissingDivisor { k: u64 },

    // --- zeta machinery ---
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("sequence admits no monic integer recurrence at minimal order {order}")]
    NonIntegerRecurrence { order: usize },
    #[error("repeated recurrence factor {factor}: eigenvalue multiplicity not supported")]
    RepeatedFactor { factor: String },
    #[error("spectral decomposition failed: {0}")]
    Decomposition(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),

    // --- oracle / invariants ---
    #[error("class count mismatch at iterate {k}: enumerated {enumerated}, averaging formula {expected}")]
    OracleMismatch {
        k: u64,
        enumerated: BigInt,
        expected: BigInt,
    },
    #[error("internal invariant violated: {0}")]
    AssertionViolated(String),
}
