//! `eval`: score a directory of pseudo labels against a directory of
//! reference labels with the same frame ids. Prints match totals and mean
//! relative errors, optionally sweeps average precision, and can write the
//! whole result as JSON.

use std::path::Path;

use lpcg::error::write_bytes;
use lpcg::eval::{
    ap_rows, check_frame_sets, match_labels, mean_relative_error, ApRow, EvalFrame, MatchOptions,
    MatchReport, MreReport, RecallPoints,
};
use lpcg::kitti_io::{read_label_file, LabelRecord};
use serde::{Deserialize, Serialize};

use crate::commands::to_json_pretty;
use crate::error::CliResult;

/// Match counts for one frame, without the pair list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameOutcome {
    pub frame_id: String,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub n_absorbed: usize,
}

/// The full evaluation: per-frame counts, their sums, error means over every
/// matched pair, and (when requested) the precision sweep. `mre` is null
/// when nothing matched, because a mean over zero pairs has no value to
/// report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub options: MatchOptions,
    pub n_frames: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub n_absorbed: usize,
    pub mre: Option<MreReport>,
    pub frames: Vec<FrameOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ap: Option<Vec<ApRow>>,
}

/// Matches every frame, then restates all pairs against the concatenated
/// record lists so one mean covers the whole run rather than averaging
/// per-frame averages (frames with more matches weigh more, as they should).
fn evaluate(
    frames: &[(String, Vec<LabelRecord>, Vec<LabelRecord>)],
    opts: &MatchOptions,
) -> (Vec<FrameOutcome>, MatchReport, Vec<LabelRecord>, Vec<LabelRecord>) {
    let mut outcomes = Vec::with_capacity(frames.len());
    let mut combined = MatchReport::default();
    let mut all_pseudo = Vec::new();
    let mut all_gt = Vec::new();
    for (frame_id, pseudo, gt) in frames {
        let report = match_labels(pseudo, gt, opts);
        outcomes.push(FrameOutcome {
            frame_id: frame_id.clone(),
            tp: report.tp,
            fp: report.fp,
            fn_: report.fn_,
            n_absorbed: report.n_absorbed,
        });
        combined.tp += report.tp;
        combined.fp += report.fp;
        combined.fn_ += report.fn_;
        combined.n_absorbed += report.n_absorbed;
        for pair in &report.matches {
            combined.matches.push(lpcg::eval::MatchedPair {
                pseudo_idx: all_pseudo.len() + pair.pseudo_idx,
                gt_idx: all_gt.len() + pair.gt_idx,
                iou: pair.iou,
            });
        }
        all_pseudo.extend_from_slice(pseudo);
        all_gt.extend_from_slice(gt);
    }
    (outcomes, combined, all_pseudo, all_gt)
}

fn print_report(report: &EvalReport) {
    println!(
        "eval: {} frames   tp {}   fp {}   fn {}   absorbed {}",
        report.n_frames, report.tp, report.fp, report.fn_, report.n_absorbed
    );
    match &report.mre {
        Some(mre) => {
            println!(
                "mre:  x {:.4}  y {:.4}  z {:.4}  h {:.4}  w {:.4}  l {:.4}  ry {:.4}  |ry| {:.4} rad",
                mre.loc_mre[0],
                mre.loc_mre[1],
                mre.loc_mre[2],
                mre.dim_mre[0],
                mre.dim_mre[1],
                mre.dim_mre[2],
                mre.orient_mre,
                mre.orient_abs_err
            );
        }
        None => println!("mre:  no matched pairs"),
    }
    if let Some(rows) = &report.ap {
        for row in rows {
            println!(
                "ap40: {} {:<9} n_gt {:>5}   {:8.4}",
                row.class, row.difficulty, row.n_gt, row.ap
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    pseudo_dir: &Path,
    gt_dir: &Path,
    out_path: Option<&Path>,
    opts: &MatchOptions,
    sweep: bool,
    sweep_class: &str,
) -> CliResult {
    let pseudo_stems = crate::commands::label_stems(pseudo_dir)?;
    let gt_stems = crate::commands::label_stems(gt_dir)?;
    let left: Vec<String> = pseudo_stems.iter().map(|(s, _)| s.clone()).collect();
    let right: Vec<String> = gt_stems.iter().map(|(s, _)| s.clone()).collect();
    check_frame_sets(&left, &right)?;

    let mut frames = Vec::with_capacity(pseudo_stems.len());
    for ((stem, pseudo_path), (_, gt_path)) in pseudo_stems.iter().zip(&gt_stems) {
        frames.push((stem.clone(), read_label_file(pseudo_path)?, read_label_file(gt_path)?));
    }

    let (outcomes, combined, all_pseudo, all_gt) = evaluate(&frames, opts);
    let mre = match mean_relative_error(&combined, &all_pseudo, &all_gt) {
        Ok(mre) => Some(mre),
        Err(lpcg::Error::EmptyMatchSet) => None,
        Err(e) => return Err(e.into()),
    };
    let ap = sweep.then(|| {
        let eval_frames: Vec<EvalFrame> = frames
            .iter()
            .map(|(_, pseudo, gt)| EvalFrame { gts: gt.clone(), dets: pseudo.clone() })
            .collect();
        ap_rows(&eval_frames, sweep_class, opts, RecallPoints::R40)
    });

    let report = EvalReport {
        options: *opts,
        n_frames: frames.len(),
        tp: combined.tp,
        fp: combined.fp,
        fn_: combined.fn_,
        n_absorbed: combined.n_absorbed,
        mre,
        frames: outcomes,
        ap,
    };
    print_report(&report);
    if let Some(path) = out_path {
        write_bytes(path, to_json_pretty(&report).as_bytes())?;
    }
    Ok(())
}
