//! Classical and quantum theory written in one language of fiducial
//! probability vectors `p`, effect vectors `r` with outcome probability
//! `r . p`, and real transformation matrices `Z`.
//!
//! Classical systems have `K = N` fiducial probabilities, quantum systems
//! `K = N^2`. The crate builds both, converts between density operators and
//! probability vectors, and provides numerical checks of the structural
//! facts that tell the two theories apart.

pub mod axioms;
pub mod classical;
pub mod composition;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod measurement;
pub mod model;
pub mod quantum;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
pub use model::{
    is_pure, mix, probability, EffectVector, ModelDescriptor, StateVector, TheoryKind, TheoryModel,
    TransformMatrix, Validity,
};
pub use tolerance::Tolerances;
