use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is not even: diagonal entry {index} is odd")]
    NotEven { index: usize },
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("sublattice basis is not primitive (elementary divisors {divisors:?})")]
    NotPrimitive { divisors: Vec<String> },
    #[error("sublattice is degenerate")]
    DegenerateSublattice,
    #[error("sublattice basis does not have full column rank")]
    RankDeficient,
    #[error("element {witness:?} has q = {q} != 0 mod 1")]
    NotIsotropic { witness: Vec<u64>, q: String },
    #[error("generators do not lie in the discriminant group")]
    NotSubgroup,
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("Gauss sum {sum} does not match the signature prediction {expected}")]
    MismatchedSignature { sum: String, expected: String },
    #[error("discriminant group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },
    #[error("index spaces do not match: {0}")]
    IndexMismatch(String),
    #[error("not an element of SL2(Z): ad - bc != 1")]
    NotUnimodular,
    #[error("spanning set is not positive definite")]
    NotPositiveDefiniteSpan,
    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("sublattices are not compatible: {0}")]
    IncompatibleSublattices(String),
    #[error("enumeration would exceed the vector cap of {cap}")]
    BoundTooLarge { cap: usize },
    #[error("truncation bound must be positive and finite, got {0}")]
    InvalidBound(f64),
    #[error("polynomial is not homogeneous of the stated degree")]
    NonHomogeneousPolynomial,
    #[error("tau must lie in the upper half-plane")]
    TauNotInUpperHalfPlane,
    #[error("vector is not orthogonal to the sublattice")]
    VectorNotInComplement,
    #[error("certified tail {tail:e} exceeds the tolerance {tolerance:e}")]
    TailTooLarge { tail: f64, tolerance: f64 },
    #[error("orthogonal complement is not positive definite")]
    ComplementNotDefinite,
    #[error("glue projections are degenerate")]
    GlueDegenerate,
    #[error("polynomial is not harmonic")]
    PolynomialNotHarmonic,
    #[error("split check failed: {0}")]
    SplitCheckFailed(String),
    #[error("inconsistent degrees: {0}")]
    InconsistentDegrees(String),
    #[error("exponent {exp} at coset {coset:?} violates the dual exponent convention")]
    ExponentConvention { coset: Vec<u64>, exp: String },
}

pub type Result<T> = std::result::Result<T, Error>;
