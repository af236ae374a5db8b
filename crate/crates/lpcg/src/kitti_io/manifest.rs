//! Dataset manifest: a JSON index of frames with per-frame file paths and an
//! `has_annotation` flag separating the labeled split from the unlabeled one.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub frame_id: String,
    pub has_annotation: bool,
    pub cloud: PathBuf,
    pub calib: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detections: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct DatasetManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence_id: Option<String>,
    pub frames: Vec<FrameEntry>,
    /// Directory relative paths resolve against; set by [`DatasetManifest::load`],
    /// never serialized.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl DatasetManifest {
    /// Reads and validates a manifest file. Relative paths inside it resolve
    /// against the manifest's own directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        let mut manifest: DatasetManifest = serde_json::from_str(&text)?;
        manifest.base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for frame in &self.frames {
            if !seen.insert(frame.frame_id.as_str()) {
                return Err(Error::DuplicateFrameId(frame.frame_id.clone()));
            }
            if frame.has_annotation && frame.label.is_none() {
                return Err(Error::MissingLabelPath(frame.frame_id.clone()));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialize");
        text.push('\n');
        text
    }
}
