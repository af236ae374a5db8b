//! Average precision over a detection set, scored per difficulty bucket with
//! interpolated precision sampled at fixed recall points.

use serde::{Deserialize, Serialize};

use crate::eval::difficulty::{assign_difficulty, Difficulty};
use crate::eval::matching::{MatchOptions, MatchSpace};
use crate::geom::Box3D;
use crate::kitti_io::LabelRecord;

/// One frame's reference labels and the detections to score against them.
#[derive(Debug, Clone, Default)]
pub struct EvalFrame {
    pub gts: Vec<LabelRecord>,
    pub dets: Vec<LabelRecord>,
}

/// Recall grid the interpolated precision is averaged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RecallPoints {
    /// Forty points 1/40 .. 1, skipping zero.
    #[default]
    #[serde(rename = "r40")]
    R40,
    /// Eleven points 0, 0.1 .. 1.
    #[serde(rename = "r11")]
    R11,
}

impl RecallPoints {
    pub fn samples(&self) -> Vec<f64> {
        match self {
            RecallPoints::R40 => (1..=40).map(|i| i as f64 / 40.0).collect(),
            RecallPoints::R11 => (0..=10).map(|i| i as f64 / 10.0).collect(),
        }
    }
}

/// AP for one class at one difficulty, with the sampled precision curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApRow {
    pub class: String,
    pub difficulty: Difficulty,
    pub space: MatchSpace,
    pub iou_min: f64,
    pub n_gt: usize,
    /// Percentage in [0, 100].
    pub ap: f64,
    /// `[recall, interpolated precision]` at each grid point.
    pub curve: Vec<[f64; 2]>,
}

/// Classes close enough that boxes of one are not penalized when scoring the
/// other.
fn neighbor_class(class: &str) -> Option<&'static str> {
    match class {
        "Car" => Some("Van"),
        "Van" => Some("Car"),
        "Pedestrian" => Some("Person_sitting"),
        "Person_sitting" => Some("Pedestrian"),
        _ => None,
    }
}

/// Fraction of `det` covered by `zone`, both as 2D image boxes.
fn covered_fraction(det: &[f64; 4], zone: &[f64; 4]) -> f64 {
    let ix = (det[2].min(zone[2]) - det[0].max(zone[0])).max(0.0);
    let iy = (det[3].min(zone[3]) - det[1].max(zone[1])).max(0.0);
    let area = (det[2] - det[0]).max(0.0) * (det[3] - det[1]).max(0.0);
    if area <= 0.0 {
        0.0
    } else {
        ix * iy / area
    }
}

/// Per-frame scoring state for the sweep.
struct FrameState {
    /// Boxes that count toward recall, with a taken flag.
    valid: Vec<(Box3D, bool)>,
    /// Boxes a detection may land on without being counted either way:
    /// harder buckets than the one under evaluation, plus neighbor classes.
    ignored: Vec<(Box3D, bool)>,
    /// DontCare image regions.
    zones: Vec<[f64; 4]>,
}

/// Scores `class` at every difficulty. Detections of other classes or with
/// no score are dropped up front; reference boxes of unrelated classes are
/// invisible to the sweep.
pub fn ap_rows(
    frames: &[EvalFrame],
    class: &str,
    opts: &MatchOptions,
    recall: RecallPoints,
) -> Vec<ApRow> {
    [Difficulty::Easy, Difficulty::Moderate, Difficulty::Hard]
        .into_iter()
        .map(|difficulty| ap_at(frames, class, difficulty, opts, recall))
        .collect()
}

fn ap_at(
    frames: &[EvalFrame],
    class: &str,
    difficulty: Difficulty,
    opts: &MatchOptions,
    recall: RecallPoints,
) -> ApRow {
    let neighbor = neighbor_class(class);
    let mut states = Vec::with_capacity(frames.len());
    // Detections across all frames, ranked by score.
    let mut dets: Vec<(f64, usize, Box3D, [f64; 4])> = Vec::new();
    for (f_idx, frame) in frames.iter().enumerate() {
        let mut state = FrameState { valid: Vec::new(), ignored: Vec::new(), zones: Vec::new() };
        for g in &frame.gts {
            if g.is_dontcare() {
                state.zones.push(g.bbox2d);
            } else if g.class == class {
                if assign_difficulty(g) <= difficulty {
                    state.valid.push((Box3D::from_record(g), false));
                } else {
                    state.ignored.push((Box3D::from_record(g), false));
                }
            } else if Some(g.class.as_str()) == neighbor {
                state.ignored.push((Box3D::from_record(g), false));
            }
        }
        states.push(state);
        for d in &frame.dets {
            if d.class != class {
                continue;
            }
            let Some(score) = d.score else { continue };
            dets.push((score, f_idx, Box3D::from_record(d), d.bbox2d));
        }
    }
    dets.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let n_gt: usize = states.iter().map(|s| s.valid.len()).sum();
    let mut tp = 0usize;
    let mut fp = 0usize;
    // (recall, precision) after each counted detection.
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (_, f_idx, det_box, det_bbox) in &dets {
        let state = &mut states[*f_idx];
        let best = state
            .valid
            .iter()
            .enumerate()
            .filter(|(_, (_, taken))| !taken)
            .map(|(i, (g, _))| (i, opts.space.iou(det_box, g)))
            .filter(|(_, iou)| *iou >= opts.iou_min)
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if let Some((i, _)) = best {
            state.valid[i].1 = true;
            tp += 1;
        } else {
            let shadow = state
                .ignored
                .iter()
                .enumerate()
                .filter(|(_, (_, taken))| !taken)
                .map(|(i, (g, _))| (i, opts.space.iou(det_box, g)))
                .filter(|(_, iou)| *iou >= opts.iou_min)
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            if let Some((i, _)) = shadow {
                state.ignored[i].1 = true;
                continue;
            }
            if state.zones.iter().any(|z| covered_fraction(det_bbox, z) > 0.5) {
                continue;
            }
            fp += 1;
        }
        if n_gt > 0 {
            points.push((tp as f64 / n_gt as f64, tp as f64 / (tp + fp) as f64));
        }
    }

    // Interpolated precision: best precision at any recall not below r.
    let p_interp = |r: f64| {
        points
            .iter()
            .filter(|(rec, _)| *rec >= r)
            .map(|(_, p)| *p)
            .fold(0.0, f64::max)
    };
    let curve: Vec<[f64; 2]> = recall.samples().iter().map(|&r| [r, p_interp(r)]).collect();
    let ap = 100.0 * curve.iter().map(|rp| rp[1]).sum::<f64>() / curve.len() as f64;
    ApRow {
        class: class.to_string(),
        difficulty,
        space: opts.space,
        iou_min: opts.iou_min,
        n_gt,
        ap,
        curve,
    }
}
