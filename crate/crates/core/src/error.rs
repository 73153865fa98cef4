use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field descriptor `{0}`: expected `gf:<p>`, `gf:<p>^<k>` or `q`")]
    BadFieldSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field too large: |F^x| = {0} exceeds 2^40")]
    FieldTooLarge(u128),
    #[error("cannot parse field element `{0}`")]
    BadElement(String),
    #[error("cannot parse matrix literal `{0}`: {1}")]
    BadMatrix(String, String),
    #[error("zero has no power class")]
    ZeroElement,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("factorization exhausted: cannot certify the factorization of {0}")]
    FactorizationExhausted(String),
    #[error("closure not finite within cap of {0} elements")]
    ClosureCap(usize),
    #[error("element of infinite order")]
    InfiniteOrder,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ambient group too large: {0} elements")]
    AmbientTooLarge(u128),
}

pub type Result<T> = std::result::Result<T, Error>;
