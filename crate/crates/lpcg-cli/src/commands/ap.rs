//! `ap`: average precision of a detection directory against a reference
//! directory, per difficulty bucket, with optional JSON output and a CSV
//! dump of the precision-recall curves.

use std::fmt::Write as _;
use std::path::Path;

use lpcg::error::write_bytes;
use lpcg::eval::{ap_rows, check_frame_sets, ApRow, EvalFrame, MatchOptions, RecallPoints};
use lpcg::kitti_io::read_label_file;

use crate::commands::to_json_pretty;
use crate::error::CliResult;

/// One CSV line per sampled recall point, all rows in difficulty order.
fn curves_csv(rows: &[ApRow]) -> String {
    let mut csv = String::from("class,difficulty,recall,precision\n");
    for row in rows {
        for [recall, precision] in &row.curve {
            writeln!(csv, "{},{},{recall:.6},{precision:.6}", row.class, row.difficulty)
                .expect("string write");
        }
    }
    csv
}

pub fn run(
    dets_dir: &Path,
    gt_dir: &Path,
    class: &str,
    opts: &MatchOptions,
    recall: RecallPoints,
    out_path: Option<&Path>,
    curves_path: Option<&Path>,
) -> CliResult {
    let det_stems = crate::commands::label_stems(dets_dir)?;
    let gt_stems = crate::commands::label_stems(gt_dir)?;
    let left: Vec<String> = det_stems.iter().map(|(s, _)| s.clone()).collect();
    let right: Vec<String> = gt_stems.iter().map(|(s, _)| s.clone()).collect();
    check_frame_sets(&left, &right)?;

    let mut frames = Vec::with_capacity(det_stems.len());
    for ((_, det_path), (_, gt_path)) in det_stems.iter().zip(&gt_stems) {
        frames.push(EvalFrame {
            gts: read_label_file(gt_path)?,
            dets: read_label_file(det_path)?,
        });
    }

    let rows = ap_rows(&frames, class, opts, recall);
    let grid = match recall {
        RecallPoints::R40 => "ap40",
        RecallPoints::R11 => "ap11",
    };
    for row in &rows {
        println!(
            "{grid}: {} {:<9} iou {:.2} {:?}  n_gt {:>5}   {:8.4}",
            row.class, row.difficulty, row.iou_min, row.space, row.n_gt, row.ap
        );
    }
    if let Some(path) = out_path {
        write_bytes(path, to_json_pretty(&rows).as_bytes())?;
    }
    if let Some(path) = curves_path {
        write_bytes(path, curves_csv(&rows).as_bytes())?;
    }
    Ok(())
}
