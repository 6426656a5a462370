//! Executable checks of the structural consequences of the axioms:
//! distinguishability dimension, subspace restriction, the `K = N^r` law,
//! linearity of measurement functionals and continuity of reversible paths.

mod affinity;
mod continuity;
mod distinguish;
mod power_law;
mod restrict;

pub use affinity::{default_probes, verify_affinity, AffinityOutcome, Probe, DEFAULT_WEIGHTS};
pub use continuity::{continuity_witness, ContinuityWitness};
pub use distinguish::{
    canonical_pure_family, max_distinguishable, DistinguishabilityCertificate, MAX_CANDIDATES,
};
pub use power_law::{verify_power_law, PowerLawEntry, PowerLawResult, PowerLawVerdict};
pub use restrict::{subspace_restrict, RestrictedModel};
