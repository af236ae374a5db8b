//! Greedy per-frame matching of generated labels against reference labels,
//! plus mean-relative-error summaries over the matched pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{bev_iou, iou_3d, wrap_to_pi, Box3D};
use crate::kitti_io::LabelRecord;

/// Denominator floor for relative errors, so near-zero reference values do
/// not blow up the mean.
const MRE_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MatchSpace {
    /// Overlap of ground-plane footprints.
    #[default]
    #[serde(rename = "bev")]
    Bev,
    /// Volume overlap.
    #[serde(rename = "3d")]
    ThreeD,
}

impl MatchSpace {
    pub(crate) fn iou(&self, a: &Box3D, b: &Box3D) -> f64 {
        match self {
            MatchSpace::Bev => bev_iou(&a.bev_rect(), &b.bev_rect()),
            MatchSpace::ThreeD => iou_3d(a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchOptions {
    pub iou_min: f64,
    pub space: MatchSpace,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { iou_min: 0.5, space: MatchSpace::Bev }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub pseudo_idx: usize,
    pub gt_idx: usize,
    pub iou: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MatchReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub matches: Vec<MatchedPair>,
    /// Would-be false positives swallowed by DontCare regions.
    pub n_absorbed: usize,
}

/// Fraction of `det`'s 2D box covered by `zone`.
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

/// Greedy one-to-one matching, highest pseudo score first: each pseudo label
/// claims the unclaimed same-class reference label it overlaps most, if that
/// overlap reaches `opts.iou_min`.
///
/// DontCare reference entries never count as false negatives; an unmatched
/// pseudo label whose 2D box is more than half covered by a DontCare region
/// is absorbed instead of counted as a false positive.
pub fn match_labels(
    pseudo: &[LabelRecord],
    gt: &[LabelRecord],
    opts: &MatchOptions,
) -> MatchReport {
    let gt_boxes: Vec<Option<Box3D>> =
        gt.iter().map(|g| (!g.is_dontcare()).then(|| Box3D::from_record(g))).collect();
    let dontcare: Vec<&LabelRecord> = gt.iter().filter(|g| g.is_dontcare()).collect();
    let n_gt = gt_boxes.iter().filter(|b| b.is_some()).count();

    let mut order: Vec<usize> = (0..pseudo.len()).collect();
    order.sort_by(|&a, &b| {
        let sa = pseudo[a].score.unwrap_or(1.0);
        let sb = pseudo[b].score.unwrap_or(1.0);
        sb.partial_cmp(&sa).unwrap()
    });

    let mut report = MatchReport::default();
    let mut gt_taken = vec![false; gt.len()];
    for p_idx in order {
        let p_box = Box3D::from_record(&pseudo[p_idx]);
        let mut best: Option<(usize, f64)> = None;
        for (g_idx, g_box) in gt_boxes.iter().enumerate() {
            let Some(g_box) = g_box else { continue };
            if gt_taken[g_idx] || gt[g_idx].class != pseudo[p_idx].class {
                continue;
            }
            let iou = opts.space.iou(&p_box, g_box);
            if iou >= opts.iou_min && best.map_or(true, |(_, b)| iou > b) {
                best = Some((g_idx, iou));
            }
        }
        match best {
            Some((g_idx, iou)) => {
                gt_taken[g_idx] = true;
                report.matches.push(MatchedPair { pseudo_idx: p_idx, gt_idx: g_idx, iou });
            }
            None => {
                let absorbed = dontcare
                    .iter()
                    .any(|dc| covered_fraction(&pseudo[p_idx].bbox2d, &dc.bbox2d) > 0.5);
                if absorbed {
                    report.n_absorbed += 1;
                } else {
                    report.fp += 1;
                }
            }
        }
    }
    report.matches.sort_by_key(|m| m.pseudo_idx);
    report.tp = report.matches.len();
    report.fn_ = n_gt - report.tp;
    report
}

/// Component-wise mean relative errors over a match set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MreReport {
    /// x, y, z.
    pub loc_mre: [f64; 3],
    /// h, w, l.
    pub dim_mre: [f64; 3],
    /// Wrapped angular difference over the reference angle magnitude.
    pub orient_mre: f64,
    /// Mean absolute wrapped angular difference in radians, reported
    /// alongside because the relative form degenerates near zero reference
    /// angles.
    pub orient_abs_err: f64,
}

/// Averages `|pred - reference| / max(|reference|, 1e-3)` per component over
/// the matched pairs; the orientation numerator wraps into a half turn each
/// way.
pub fn mean_relative_error(
    report: &MatchReport,
    pseudo: &[LabelRecord],
    gt: &[LabelRecord],
) -> Result<MreReport> {
    if report.matches.is_empty() {
        return Err(Error::EmptyMatchSet);
    }
    let rel = |p: f64, g: f64| (p - g).abs() / g.abs().max(MRE_EPS);
    let mut loc = [0.0; 3];
    let mut dim = [0.0; 3];
    let mut orient = 0.0;
    let mut orient_abs = 0.0;
    for m in &report.matches {
        let p = &pseudo[m.pseudo_idx];
        let g = &gt[m.gt_idx];
        for c in 0..3 {
            loc[c] += rel(p.loc[c], g.loc[c]);
        }
        dim[0] += rel(p.h, g.h);
        dim[1] += rel(p.w, g.w);
        dim[2] += rel(p.l, g.l);
        let delta = wrap_to_pi(p.ry - g.ry).abs();
        orient += delta / g.ry.abs().max(MRE_EPS);
        orient_abs += delta;
    }
    let n = report.matches.len() as f64;
    Ok(MreReport {
        loc_mre: loc.map(|v| v / n),
        dim_mre: dim.map(|v| v / n),
        orient_mre: orient / n,
        orient_abs_err: orient_abs / n,
    })
}
