//! `lowcost`: pseudo-label every frame of a manifest from its LiDAR sweep
//! and 2D detections, writing one KITTI label file per frame plus an
//! aggregate JSON report.

use std::path::{Path, PathBuf};

use lpcg::error::write_bytes;
use lpcg::kitti_io::{
    read_calib_file, read_detections_file, read_velodyne_file, write_label_file, DatasetManifest,
    FrameEntry,
};
use lpcg::label::{low_cost_label_frame, FrameCounts, FrameReport, LowCostConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::{to_json_pretty, worker_pool};
use crate::error::CliResult;

/// The aggregate report: per-frame outcomes in manifest order plus their
/// sums, written next to the label files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n_frames: usize,
    pub totals: FrameCounts,
    pub frames: Vec<FrameReport>,
}

fn sum_counts(frames: &[FrameReport]) -> FrameCounts {
    let mut totals = FrameCounts::default();
    for report in frames {
        totals.n_detections += report.counts.n_detections;
        totals.n_skipped_empty += report.counts.n_skipped_empty;
        totals.n_filtered_dims += report.counts.n_filtered_dims;
        totals.n_emitted += report.counts.n_emitted;
    }
    totals
}

/// Labels one frame and writes its output file. A frame without a detections
/// path labels nothing but still produces an (empty) file, so the output
/// directory always mirrors the manifest frame for frame.
fn label_one(
    manifest: &DatasetManifest,
    frame: &FrameEntry,
    cfg: &LowCostConfig,
    out_dir: &Path,
) -> lpcg::Result<FrameReport> {
    let cloud = read_velodyne_file(&manifest.resolve(&frame.cloud))?;
    let calib = read_calib_file(&manifest.resolve(&frame.calib))?;
    let detections = match &frame.detections {
        Some(path) => read_detections_file(&manifest.resolve(path))?,
        None => {
            log::warn!("frame {}: no detections path, emitting an empty label file", frame.frame_id);
            Vec::new()
        }
    };
    let (labels, counts) = low_cost_label_frame(&cloud, &calib, &detections, cfg);
    let out_path = out_dir.join(format!("{}.txt", frame.frame_id));
    write_bytes(&out_path, write_label_file(&labels).as_bytes())?;
    Ok(FrameReport { frame_id: frame.frame_id.clone(), counts })
}

pub fn run(
    manifest_path: &Path,
    out_dir: &Path,
    report_path: Option<&Path>,
    cfg: &LowCostConfig,
    jobs: usize,
) -> CliResult {
    cfg.validate()?;
    let pool = worker_pool(jobs)?;
    let manifest = DatasetManifest::load(manifest_path)?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| lpcg::Error::Io { path: out_dir.to_path_buf(), source: e })?;
    let frames: Result<Vec<FrameReport>, lpcg::Error> = pool.install(|| {
        manifest
            .frames
            .par_iter()
            .map(|frame| label_one(&manifest, frame, cfg, out_dir))
            .collect()
    });
    let frames = frames.inspect_err(|_| {
        log::error!("labeling aborted; files already written under {} are partial", out_dir.display());
    })?;

    let report = RunReport { n_frames: frames.len(), totals: sum_counts(&frames), frames };
    let report_path: PathBuf =
        report_path.map_or_else(|| out_dir.join("report.json"), Path::to_path_buf);
    write_bytes(&report_path, to_json_pretty(&report).as_bytes())?;

    log::info!(
        "labeled {} frames: {} labels from {} detections",
        report.n_frames,
        report.totals.n_emitted,
        report.totals.n_detections
    );
    println!(
        "lowcost: {} frames, {} detections in, {} labels out ({} empty-cluster, {} dimension-filtered)",
        report.n_frames,
        report.totals.n_detections,
        report.totals.n_emitted,
        report.totals.n_skipped_empty,
        report.totals.n_filtered_dims
    );
    Ok(())
}
