use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("dim p = {0} is odd")]
    OddNoncompactDimension(usize),
    #[error("gram matrix is not positive definite")]
    NonDefiniteForm,
    #[error("weight {0:?} is not dominant")]
    NonDominantWeight(Vec<i64>),
    #[error("weight {0:?} is not on the {1} lattice")]
    OffLattice(Vec<i64>, &'static str),
    #[error("character is not invariant under the compact Weyl group")]
    NotInvariant,
    #[error("cover mismatch: {0} vs {1}")]
    CoverMismatch(&'static str, &'static str),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("K-type provider declares no finite support bound")]
    UnboundedProvider,
    #[error("parameter {0:?} is orthogonal to a compact root")]
    SingularOnCompactWall(Vec<i64>),
    #[error("numerators live on different lattices")]
    LatticeMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a complex: d∘d is nonzero starting at degree {0}")]
    NotAComplex(usize),
    #[error("diagram does not commute: {0}")]
    DiagramNotCommutative(String),
    #[error("sequence not exact: {0}")]
    SequenceNotExact(String),
    #[error("hypothesis ST = 0 and TS = 0 fails for pair {0}")]
    HypothesisSTnotZero(usize),
    #[error("ker F^2 + Im F^2 is not a direct sum decomposition of V")]
    SemisimplicityFails,
    #[error("Clifford relation fails for basis pair ({0}, {1})")]
    CliffordRelationFailed(usize, usize),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
