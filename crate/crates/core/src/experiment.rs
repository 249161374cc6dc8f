//! Serializable description of one run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::checks::{CheckError, CheckSettings};
use crate::sampling::SampleConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Count,
    Series,
    Sample,
    Stats,
    Render,
    Check,
}

/// Everything a command needs; the seed inside `sample` makes the run
/// reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub command: Command,
    pub sample: SampleConfig,
    #[serde(default)]
    pub outputs: Vec<PathBuf>,
    /// Statistic names for `stats`, suite names for `check`.
    #[serde(default)]
    pub metrics: Vec<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub checks: CheckSettings,
}

impl ExperimentSpec {
    pub fn new(command: Command, sample: SampleConfig) -> Self {
        ExperimentSpec {
            command,
            sample,
            outputs: Vec::new(),
            metrics: Vec::new(),
            tolerances: BTreeMap::new(),
            trials: None,
            checks: CheckSettings::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Check settings with the tolerance overrides applied.
    pub fn check_settings(&self) -> Result<CheckSettings, CheckError> {
        let mut s = self.checks.clone();
        s.apply_tolerances(&self.tolerances)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SamplerKind;

    #[test]
    fn round_trip() {
        let mut spec = ExperimentSpec::new(Command::Stats, SampleConfig::new(100, 9, SamplerKind::UnlabeledExact));
        spec.outputs.push("degrees.csv".into());
        spec.metrics.push("degree".into());
        spec.tolerances.insert("w1_tolerance".into(), 0.04);
        let back = ExperimentSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.check_settings().unwrap().w1_tolerance, 0.04);
    }

    #[test]
    fn minimal_file() {
        let spec = ExperimentSpec::from_json(
            r#"{"command": "sample", "sample": {"n": 4482, "seed": 1, "kind": "labeled-boltzmann"}}"#,
        )
        .unwrap();
        assert_eq!(spec.command, Command::Sample);
        assert_eq!(spec.sample.epsilon, 0.1);
        assert!(spec.outputs.is_empty());
    }
}
