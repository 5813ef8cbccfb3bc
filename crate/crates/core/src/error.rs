use thiserror::Error;

/// Everything that can go wrong in the core pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported (p must be an odd prime)")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("modulus {coeffs:?} is reducible over F_{p}")]
    ReducibleModulus { coeffs: Vec<u32>, p: u32 },
    #[error("field of order {0} is too large")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,

    #[error("Jacobi identity fails for basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("algebra is not nilpotent: lower central series stabilises at dimension {0}")]
    NotNilpotent(usize),
    #[error("nilpotency class {class} is not below the characteristic {p}")]
    ClassTooLarge { class: usize, p: u32 },
    #[error("algebra is abelian; the derived subalgebra is zero")]
    Abelian,
    #[error("bracket [{0}, {1}] lies outside the computed derived subalgebra")]
    InconsistentBracket(usize, usize),
    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("malformed algebra: {0}")]
    Malformed(String),

    #[error("enumeration of {needed} points exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("negative count: {0}")]
    NegativeCount(String),
    #[error("mismatched zeta exponents s = {0} and s = {1}")]
    MismatchedExponent(u32, u32),

    #[error("oracle supports nilpotency class 2 or 3 below the characteristic; got class {class} with p = {p}")]
    ClassUnsupported { class: usize, p: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
