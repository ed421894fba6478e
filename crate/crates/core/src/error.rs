use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("basis not saturated; completion impossible")]
    NotSaturated,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron needs at least one vertex")]
    NoVertices,
    #[error("empty polyhedron")]
    EmptyPolyhedron,
    #[error("not pure: cell {cell} has dimension {found}, expected {expected}")]
    NotPure { cell: usize, expected: usize, found: usize },
    #[error("not a complex: cells {first} and {second} meet in a non-face")]
    NotAComplex { first: usize, second: usize },
    #[error("cell {0} has zero weight")]
    ZeroWeight(usize),
    #[error("facet index {index} out of range ({count} facets)")]
    FacetOutOfRange { index: usize, count: usize },
    #[error("index set must have {expected} elements from 1..={n}, got {found:?}")]
    BadIndexSet { expected: usize, n: usize, found: Vec<usize> },
    #[error("affine function; empty hypersurface")]
    AffineFunction,
    #[error("expected {expected} polynomials in {expected} variables, got {found}")]
    PolynomialCount { expected: usize, found: usize },
    #[error("non-transversal intersection, perturb inputs")]
    NotTransversal,
    #[error("zero frequency handled by rigidity_dimension")]
    ZeroFrequency,
    #[error("empty sample")]
    EmptySample,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
