//! Finite-dimensional Krein spaces and J-fusion frames.
//!
//! The crate builds Krein spaces from a fundamental symmetry `J`, classifies
//! subspaces by the sign of the indefinite product `[x, y] = <Jx, y>`, and
//! works with weighted families of uniformly definite subspaces: synthesis
//! and analysis operators, the J-fusion frame operator, frame certification,
//! optimal and estimated frame bounds, canonical J-duals and the action of
//! bounded operators on frames.
//!
//! All numerical types are immutable after construction and every operation
//! is a pure function of its inputs.

pub mod catalog;
pub mod duality;
pub mod error;
pub mod fusion;
pub mod io;
pub mod krein;
pub mod linalg;
pub mod modulus;
pub mod random;
pub mod subspace;
pub mod tolerance;
pub mod transforms;

pub use duality::VectorFrame;
pub use error::{Error, Result};
pub use fusion::{BoundPair, FrameBounds, FrameCertificate, WeightedFamily};
pub use krein::{KreinSpace, Operator, Sign};
pub use linalg::{CMatrix, CVector, C64};
pub use modulus::reduced_min_modulus;
pub use subspace::{Classification, Subspace, SubspaceKind};
pub use tolerance::Tolerances;
