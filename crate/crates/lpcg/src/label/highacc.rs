//! High-accuracy dataset assembly: keep the annotated split as-is, turn
//! externally produced 3D detections into pseudo-label files for the
//! unlabeled split, and emit one merged manifest covering both.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, write_bytes, Error, Result};
use crate::kitti_io::{parse_label_file, write_label_file, DatasetManifest, FrameEntry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HighAccConfig {
    /// Minimum 3D detection confidence; lower-scored boxes are dropped.
    pub det3d_score_min: f64,
}

impl Default for HighAccConfig {
    fn default() -> Self {
        HighAccConfig { det3d_score_min: 0.7 }
    }
}

impl HighAccConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.det3d_score_min) || !self.det3d_score_min.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "det3d_score_min must be in [0, 1], got {}",
                self.det3d_score_min
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MergeReport {
    pub n_labeled_frames: usize,
    pub n_unlabeled_frames: usize,
    /// Detected boxes read across all unlabeled frames.
    pub n_boxes_in: usize,
    /// Boxes that passed the score threshold and were written out.
    pub n_boxes_kept: usize,
    pub n_dropped_low_score: usize,
    /// Detection records without a score field; unusable here and dropped.
    pub n_dropped_unscored: usize,
}

fn absolutized(entry: &FrameEntry, manifest: &DatasetManifest) -> FrameEntry {
    FrameEntry {
        frame_id: entry.frame_id.clone(),
        has_annotation: entry.has_annotation,
        cloud: manifest.resolve(&entry.cloud),
        calib: manifest.resolve(&entry.calib),
        label: entry.label.as_ref().map(|p| manifest.resolve(p)),
        detections: entry.detections.as_ref().map(|p| manifest.resolve(p)),
        image: entry.image.as_ref().map(|p| manifest.resolve(p)),
    }
}

/// Merges an annotated split with an unlabeled one whose frames carry
/// externally detected 3D boxes.
///
/// Detections score below `cfg.det3d_score_min` (or carrying no score at
/// all) are dropped; the survivors are written as per-frame label files under
/// `out_dir`. The annotated split's own files are never touched. The returned
/// manifest lists every frame of both splits with absolute paths, all
/// annotated, and is as large as both inputs combined.
pub fn high_acc_assemble(
    labeled: &DatasetManifest,
    unlabeled: &DatasetManifest,
    det3d_files: &HashMap<String, PathBuf>,
    cfg: &HighAccConfig,
    out_dir: &Path,
) -> Result<(DatasetManifest, MergeReport)> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Io { path: out_dir.to_path_buf(), source: e })?;

    let mut report = MergeReport {
        n_labeled_frames: labeled.frames.len(),
        n_unlabeled_frames: unlabeled.frames.len(),
        ..MergeReport::default()
    };
    let mut frames: Vec<FrameEntry> =
        labeled.frames.iter().map(|f| absolutized(f, labeled)).collect();

    for frame in &unlabeled.frames {
        let det_path = det3d_files
            .get(&frame.frame_id)
            .ok_or_else(|| Error::MissingDetections(frame.frame_id.clone()))?;
        let records = parse_label_file(&read_to_string(det_path)?)?;
        report.n_boxes_in += records.len();

        let mut kept = Vec::with_capacity(records.len());
        for rec in records {
            match rec.score {
                None => report.n_dropped_unscored += 1,
                Some(s) if s < cfg.det3d_score_min => report.n_dropped_low_score += 1,
                Some(_) => kept.push(rec),
            }
        }
        report.n_boxes_kept += kept.len();

        let label_path = out_dir.join(format!("{}.txt", frame.frame_id));
        write_bytes(&label_path, write_label_file(&kept).as_bytes())?;

        let mut entry = absolutized(frame, unlabeled);
        entry.label = Some(label_path);
        entry.has_annotation = true;
        frames.push(entry);
    }

    let merged = DatasetManifest {
        sequence_id: match (&labeled.sequence_id, &unlabeled.sequence_id) {
            (a, b) if a == b => a.clone(),
            _ => None,
        },
        frames,
        base_dir: out_dir.to_path_buf(),
    };
    merged.validate()?;
    Ok((merged, report))
}
