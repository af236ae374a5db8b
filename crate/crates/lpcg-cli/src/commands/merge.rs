//! `merge`: combine an annotated split with an unlabeled one whose frames
//! carry externally produced 3D detections, writing the merged manifest and
//! a merge report.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use lpcg::error::write_bytes;
use lpcg::kitti_io::DatasetManifest;
use lpcg::label::{high_acc_assemble, HighAccConfig};

use crate::commands::to_json_pretty;
use crate::error::CliResult;

/// One detection file per frame, named `<frame_id>.txt` under `dir`.
fn detection_files(dir: &Path) -> CliResult<HashMap<String, PathBuf>> {
    Ok(crate::commands::label_stems(dir)?.into_iter().collect())
}

pub fn run(
    labeled_path: &Path,
    unlabeled_path: &Path,
    detections_dir: &Path,
    out_dir: &Path,
    cfg: &HighAccConfig,
) -> CliResult {
    cfg.validate()?;
    let labeled = DatasetManifest::load(labeled_path)?;
    let unlabeled = DatasetManifest::load(unlabeled_path)?;
    let det3d_files = detection_files(detections_dir)?;

    let (merged, report) = high_acc_assemble(&labeled, &unlabeled, &det3d_files, cfg, out_dir)?;
    write_bytes(&out_dir.join("manifest.json"), merged.to_json().as_bytes())?;
    write_bytes(&out_dir.join("merge_report.json"), to_json_pretty(&report).as_bytes())?;

    log::info!(
        "merged {} labeled + {} unlabeled frames; kept {}/{} boxes",
        report.n_labeled_frames,
        report.n_unlabeled_frames,
        report.n_boxes_kept,
        report.n_boxes_in
    );
    println!(
        "merge: {} frames ({} labeled + {} unlabeled), {}/{} boxes kept ({} low-score, {} unscored)",
        merged.frames.len(),
        report.n_labeled_frames,
        report.n_unlabeled_frames,
        report.n_boxes_kept,
        report.n_boxes_in,
        report.n_dropped_low_score,
        report.n_dropped_unscored
    );
    Ok(())
}
