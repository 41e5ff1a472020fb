use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("facet has {found} vertices, expected {expected}")]
    MixedDimension { expected: usize, found: usize },
    #[error("complex has no facets")]
    EmptyFacetList,
    #[error("facet repeats vertex {0}")]
    RepeatedVertex(usize),
    #[error("face dimension {k} out of range 0..{d}")]
    KOutOfRange { k: usize, d: usize },
    #[error("apex label {apex} collides with existing vertices 1..={n}")]
    ApexCollision { apex: usize, n: usize },
    #[error("{{{u},{w}}} is not an edge of the complex")]
    NotAnEdge { u: usize, w: usize },
    #[error("contracting {{{u},{w}}} leaves no facets")]
    ContractionAnnihilates { u: usize, w: usize },
    #[error("face of size {size} exceeds facet size {d}")]
    FaceTooLarge { size: usize, d: usize },
    #[error("face of size {size} exceeds facet size {d}")]
    SizeExceedsDimension { size: usize, d: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("placement has no coordinates for vertex {0}")]
    MissingVertexCoordinates(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("instance with {n} vertices exceeds the brute-force cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("chain coefficient on a face that is not a facet of the complex")]
    ChainOutsideComplex,
    #[error("facet {0} is not present in the complex")]
    FacetNotPresent(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("could not sample a nonsingular generic basis after {0} attempts")]
    SingularBasis(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
