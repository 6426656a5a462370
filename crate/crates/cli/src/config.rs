use std::collections::BTreeMap;
use std::path::Path;

use fiducial::{ModelDescriptor, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Every check the `verify` command knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Affinity,
    BallGeometry,
    ClassicalExtremePoints,
    Composition,
    Continuity,
    DiscretenessGap,
    Distinguishability,
    FrameRank,
    FrequencyConvergence,
    Instruments,
    PowerLaw,
    Roundtrip,
    TraceFormula,
}

impl CheckName {
    pub const ALL: [CheckName; 13] = [
        CheckName::Affinity,
        CheckName::BallGeometry,
        CheckName::ClassicalExtremePoints,
        CheckName::Composition,
        CheckName::Continuity,
        CheckName::DiscretenessGap,
        CheckName::Distinguishability,
        CheckName::FrameRank,
        CheckName::FrequencyConvergence,
        CheckName::Instruments,
        CheckName::PowerLaw,
        CheckName::Roundtrip,
        CheckName::TraceFormula,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Affinity => "affinity",
            CheckName::BallGeometry => "ball_geometry",
            CheckName::ClassicalExtremePoints => "classical_extreme_points",
            CheckName::Composition => "composition",
            CheckName::Continuity => "continuity",
            CheckName::DiscretenessGap => "discreteness_gap",
            CheckName::Distinguishability => "distinguishability",
            CheckName::FrameRank => "frame_rank",
            CheckName::FrequencyConvergence => "frequency_convergence",
            CheckName::Instruments => "instruments",
            CheckName::PowerLaw => "power_law",
            CheckName::Roundtrip => "roundtrip",
            CheckName::TraceFormula => "trace_formula",
        }
    }

    /// Position in [`Self::ALL`]; used to derive the check's seed.
    pub fn index(self) -> u64 {
        Self::ALL.iter().position(|&c| c == self).expect("listed") as u64
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == name)
    }
}

impl std::fmt::Display for CheckName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Input of the `verify` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_theories")]
    pub theories: Vec<ModelDescriptor>,
    #[serde(default = "all_checks")]
    pub checks: Vec<CheckName>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Replaces the pass threshold of individual checks.
    #[serde(default)]
    pub check_tolerances: BTreeMap<CheckName, f64>,
    /// Number of random samples used by sampling checks.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_theories() -> Vec<ModelDescriptor> {
    let quantum = (2..=4).map(|n| ModelDescriptor::Quantum { n });
    let classical = (2..=6).map(|n| ModelDescriptor::Classical { n });
    quantum.chain(classical).collect()
}

fn all_checks() -> Vec<CheckName> {
    CheckName::ALL.to_vec()
}

fn default_seed() -> u64 {
    20240601
}

fn default_samples() -> usize {
    200
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            theories: default_theories(),
            checks: all_checks(),
            seed: default_seed(),
            tolerances: Tolerances::default(),
            check_tolerances: BTreeMap::new(),
            samples: default_samples(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::parse(origin, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let c = RunConfig::from_json("{}", "inline").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.theories.len(), 8);
    }

    #[test]
    fn unknown_check_rejected() {
        let err =
            RunConfig::from_json(r#"{"checks":["trace_formula","bogus"]}"#, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 1"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::from_json(r#"{"seeds":1}"#, "inline").is_err());
        assert!(RunConfig::from_json(r#"{"tolerances":{"eigen":1}}"#, "inline").is_err());
    }

    #[test]
    fn names_roundtrip() {
        for c in CheckName::ALL {
            assert_eq!(CheckName::parse(c.as_str()), Some(c));
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
    }
}
