//! Crate-wide error type.
//!
//! Every fallible operation in the library reports one of these variants;
//! the CLI maps them onto exit code 1 verbatim.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("facet {0:?} repeats a vertex label")]
    DuplicateVertexInFacet(Vec<u32>),
    #[error("facet list contains an empty facet")]
    EmptyFacet,
    #[error("face {0} is not in the complex")]
    FaceNotPresent(String),
    #[error("vertex {0} is not in the complex")]
    VertexNotPresent(u32),
    #[error("complex exceeds the {limit}-vertex bound for isomorphism search (has {actual})")]
    SizeLimitExceeded { limit: usize, actual: usize },
    #[error("complex is not pure: facets of dimension {0} and {1} coexist")]
    NotPure(i32, i32),
    #[error("complex is not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("complex is not a closed surface: {0}")]
    NotASurface(String),
    #[error("complex is not a normal pseudomanifold: {0}")]
    NotNormal(String),
    #[error("{0} is not a circle in the surface: {1}")]
    NotACircleInSurface(String, String),
    #[error("face {0} is not a facet")]
    NotAFacet(String),
    #[error("bijection is malformed: {0}")]
    MalformedBijection(String),
    #[error("bijection is not admissible: pair ({pair_source}, {pair_target}) has witness path {witness:?}")]
    NotAdmissible {
        pair_source: u32,
        pair_target: u32,
        witness: Vec<u32>,
    },
    #[error("face {0} is not a missing simplex")]
    NotMissing(String),
    #[error("classification verdict does not match the requested operation: {0}")]
    VerdictMismatch(String),
    #[error("unfolding postcondition failed: {0}")]
    NormalityViolation(String),
    #[error("edge unfolding at {0} hits the non-separating annulus case, which has no normal unfolding")]
    AnnulusCaseUnsupported(String),
    #[error("configuration is missing coordinates for vertex {0}")]
    MissingCoordinate(u32),
    #[error("lemma hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("face {face} has codimension {codim}, need at least 3")]
    CodimTooSmall { face: String, codim: i32 },
    #[error("singularity multiset is empty")]
    EmptyMultiset,
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
    #[error("decomposition is stuck: {0}")]
    DecompositionStuck(String),
    #[error("complex has g2 = {actual}, expected {expected}")]
    G2Mismatch { expected: i64, actual: i64 },
    #[error("complex does not have the expected structure: {0}")]
    StructureViolation(String),
    #[error("bad generator parameters: {0}")]
    BadParameters(String),
    #[error("trace node is malformed: {0}")]
    MalformedTrace(String),
    #[error("unknown operation {0:?}")]
    UnknownOperation(String),
    #[error("invalid complex JSON: {0}")]
    InvalidComplexJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
