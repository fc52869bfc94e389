use thiserror::Error;

use crate::subspace::SubspaceKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("subspace is degenerate (no J-orthogonal projection exists): {0}")]
    DegenerateSubspace(String),

    #[error("member {index} is {kind:?}, expected a uniformly definite subspace")]
    MemberClassification { index: usize, kind: SubspaceKind },

    #[error("member {index} has non-positive weight {weight}")]
    Weight { index: usize, weight: f64 },

    #[error("subspace classification failed: {0}")]
    Classification(String),

    #[error("family is not a J-fusion frame")]
    NotAFrame,

    #[error("operator is not surjective: rank {rank} < {dim}")]
    NotSurjective { rank: usize, dim: usize },

    #[error("operator is numerically singular (condition number {condition:.3e})")]
    SingularOperator { condition: f64 },

    #[error("vector {index} changed definiteness under the inverse frame operator")]
    DefinitenessTransport { index: usize },

    #[error("index {index} out of range for {len} elements")]
    Index { index: usize, len: usize },

    #[error("theorem hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
