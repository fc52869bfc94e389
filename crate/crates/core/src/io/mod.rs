//! JSON problem specifications, certificate reports and command dispatch.

mod report;
mod runner;
mod schema;

pub use report::{matrix_json, subspace_json, vector_json, witness_json, Check, Finding, Report, TaskReport};
pub use runner::{run, Command, RunOptions};
pub use schema::{
    parse_spec, Complex, FamilySpec, MemberSpec, Problem, ProblemSpec, RandomFrameSpec, SpaceSpec, ToleranceSpec,
    VectorFrameSpec,
};

/// Errors of the file and command layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("usage error: {0}")]
    Usage(String),
}
