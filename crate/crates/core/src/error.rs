use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u128),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element code {code} is not below the field order {q}")]
    MixedFields { code: u64, q: u32 },
    #[error("every element of a field of characteristic 2 is a square")]
    NoNonsquare,
    #[error("automorphism exponent {exponent} out of range for degree {r}")]
    BadAutomorphism { exponent: u32, r: u32 },

    #[error("transforming matrix is singular")]
    SingularC,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parameter out of range: {0}")]
    RangeError(String),
    #[error("representative lists exist only for s = 2 and s = 3, got s = {0}")]
    UnsupportedS(usize),

    #[error("structure constant a[{i}][{j}] of matrix {k} is nonzero but theta_{k} != sigma_{i} sigma_{j}")]
    AutomorphismConstraint { i: usize, j: usize, k: usize },
    #[error("structural matrices are linearly dependent (rank {rank} < t = {t})")]
    DependentMatrices { rank: usize, t: usize },
    #[error("ring of order {order} is too large for an exhaustive check")]
    TooLargeForExhaustive { order: u128 },
    #[error("isomorphism mode {mode} not applicable: {reason}")]
    ModeMismatch { mode: String, reason: String },
    #[error("rings have different invariants: {0}")]
    InvariantMismatch(String),
    #[error("unknown strategy or mode '{0}'")]
    UnknownStrategy(String),

    #[error("estimated {estimated} elementary actions exceeds the budget of {budget}")]
    BudgetExceeded { estimated: u128, budget: u128 },
    #[error("orbit invariant violated: {0}")]
    OrbitInvariant(String),

    #[error("no closed form or measured table covers {0}")]
    NotCovered(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
