//! Run configuration: a single JSON file with one section per pipeline stage,
//! every section optional and defaulting to the library defaults. Flags
//! override file values; the file overrides defaults.

use std::collections::BTreeSet;
use std::path::Path;

use lpcg::error::read_to_string;
use lpcg::eval::MatchOptions;
use lpcg::label::{DisturbGroup, HighAccConfig, LowCostConfig};
use lpcg::synth::SceneSpec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Disturbance settings as configured; the per-file stream seed is derived
/// from the run's master seed, so the section only carries magnitude and
/// group selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DisturbSection {
    /// Scale factors land in `[1 - p/2, 1 + p/2]`; zero reproduces the
    /// input byte for byte.
    pub p: f64,
    pub groups: BTreeSet<DisturbGroup>,
}

impl Default for DisturbSection {
    fn default() -> Self {
        DisturbSection {
            p: 0.0,
            groups: [DisturbGroup::Location, DisturbGroup::Dimension, DisturbGroup::Orientation]
                .into_iter()
                .collect(),
        }
    }
}

/// Everything a run can configure, mirrored one-to-one in the JSON file.
/// Unknown top-level keys are rejected so a typoed section name fails loudly
/// instead of silently running on defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    /// Master seed; every stochastic stage derives its own stream from it.
    pub seed: u64,
    /// Worker threads for frame-parallel commands. Output bytes never depend
    /// on this.
    pub jobs: usize,
    pub lowcost: LowCostConfig,
    pub merge: HighAccConfig,
    pub disturb: DisturbSection,
    pub matching: MatchOptions,
    pub scene: SceneSpec,
}

impl Default for FileConfig {
    fn default() -> Self {
        FileConfig {
            seed: 0,
            jobs: 1,
            lowcost: LowCostConfig::default(),
            merge: HighAccConfig::default(),
            disturb: DisturbSection::default(),
            matching: MatchOptions::default(),
            scene: SceneSpec::default(),
        }
    }
}

impl FileConfig {
    /// Defaults, overlaid with the file at `path` when one is given. A
    /// missing or malformed file is a usage error: the run must not fall
    /// back to defaults the user did not ask for.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else { return Ok(FileConfig::default()) };
        let text = read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Checks every section, not just the ones the current command uses, so
    /// a bad file fails the same way under every subcommand.
    pub fn validate(&self) -> CliResult {
        if self.jobs == 0 {
            return Err(CliError::Usage("jobs must be at least 1".into()));
        }
        self.lowcost.validate()?;
        self.merge.validate()?;
        if !self.disturb.p.is_finite() || self.disturb.p < 0.0 {
            return Err(CliError::Usage(format!(
                "disturb.p must be finite and >= 0, got {}",
                self.disturb.p
            )));
        }
        if !(self.matching.iou_min > 0.0 && self.matching.iou_min <= 1.0) {
            return Err(CliError::Usage(format!(
                "matching.iou_min must be in (0, 1], got {}",
                self.matching.iou_min
            )));
        }
        self.scene.validate()?;
        Ok(())
    }
}
