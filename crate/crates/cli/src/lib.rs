//! Batch verification, conversion and figure-data tooling for `fiducial`.

pub mod checks;
pub mod config;
pub mod convert;
pub mod error;
pub mod figures;
pub mod report;
pub mod simulate;

pub use config::{CheckName, RunConfig};
pub use error::{CliError, Result};
pub use report::{run_verify, CheckRecord, Status, VerificationReport};
