//! Pseudo-label generation from 2D detections over a LiDAR sweep: frustum
//! point selection, density clustering, minimum-area box fitting, and a
//! dimension sanity filter.

use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use crate::cluster::{dbscan, largest_cluster, ClusterParams};
use crate::error::{Error, Result};
use crate::geom::{
    bev_iou, cloud_to_rect, frustum_select, min_area_rect, project_to_image, wrap_to_pi, BevPoint,
    Box3D,
};
use crate::kitti_io::{CalibBundle, Detection2D, LabelRecord, PointCloud};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LowCostConfig {
    /// Minimum 2D detection confidence to consider a box at all.
    pub det2d_score_min: f64,
    /// Accepted fitted-box width interval in meters (inclusive).
    pub width_range: (f64, f64),
    /// Accepted fitted-box length interval in meters (inclusive).
    pub length_range: (f64, f64),
    pub cluster: ClusterParams,
    /// Overlap above which the lower-scored of two fitted boxes is dropped.
    pub nms_bev_iou: f64,
    /// Minimum frustum population; detections with fewer points are skipped.
    pub min_roi_points: usize,
    /// Detection classes that produce labels.
    pub target_classes: Vec<String>,
    /// Optional vertical crop: frustum points whose camera-frame y exceeds
    /// this value (y points down, so: points close to the ground) are
    /// discarded before clustering.
    pub roi_y_crop: Option<f64>,
}

impl Default for LowCostConfig {
    fn default() -> Self {
        LowCostConfig {
            det2d_score_min: 0.9,
            width_range: (1.2, 1.8),
            length_range: (3.2, 4.2),
            cluster: ClusterParams::default(),
            nms_bev_iou: 0.3,
            min_roi_points: 1,
            target_classes: vec!["Car".to_string()],
            roi_y_crop: None,
        }
    }
}

impl LowCostConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("det2d_score_min", self.det2d_score_min), ("nms_bev_iou", self.nms_bev_iou)]
        {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        for (name, (lo, hi)) in [("width_range", self.width_range), ("length_range", self.length_range)]
        {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi || lo < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a nonempty interval of nonnegative meters, got ({lo}, {hi})"
                )));
            }
        }
        if self.min_roi_points < 1 {
            return Err(Error::InvalidConfig("min_roi_points must be at least 1".into()));
        }
        if self.target_classes.is_empty() {
            return Err(Error::InvalidConfig("target_classes must not be empty".into()));
        }
        self.cluster.validate()
    }
}

/// Per-frame bookkeeping of what happened to each considered detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FrameCounts {
    /// Detections in the input file (any class, any score).
    pub n_detections: usize,
    /// Eligible detections dropped because their frustum held too few points
    /// or clustering found only noise.
    pub n_skipped_empty: usize,
    /// Fitted boxes dropped by the width/length filter.
    pub n_filtered_dims: usize,
    /// Labels surviving the overlap suppression, as written out.
    pub n_emitted: usize,
}

/// [`FrameCounts`] tagged with its frame for the aggregate JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub frame_id: String,
    #[serde(flatten)]
    pub counts: FrameCounts,
}

/// Fits one upright box to a set of camera-frame points: the minimum-area
/// rectangle of the ground-plane footprint, height from the vertical spread,
/// and the bottom face placed half a height below the vertical mean.
fn fit_box(points: &[Point3<f64>], score: f64) -> Box3D {
    let bev: Vec<BevPoint> = points.iter().map(|p| BevPoint::new(p.x, p.z)).collect();
    let rect = min_area_rect(&bev).expect("cluster is nonempty");
    let (mut min_y, mut max_y, mut sum_y) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for p in points {
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
        sum_y += p.y;
    }
    let h = max_y - min_y;
    let y_bottom = sum_y / points.len() as f64 + h / 2.0;
    Box3D {
        loc: [rect.center.x, y_bottom, rect.center.z],
        h,
        w: rect.width,
        l: rect.length,
        ry: -rect.yaw,
        score,
    }
}

/// Renders a fitted box as a full label record: the 2D box is the image
/// bounding box of the projected corners, and the observation angle follows
/// the usual relation `alpha = ry - atan2(x, z)`.
pub fn to_label_record(box3d: &Box3D, class: &str, calib: &CalibBundle) -> LabelRecord {
    let (mut u1, mut v1) = (f64::INFINITY, f64::INFINITY);
    let (mut u2, mut v2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for c in box3d.corners8() {
        let (u, v, _) = project_to_image(&Point3::new(c[0], c[1], c[2]), &calib.p2);
        u1 = u1.min(u);
        v1 = v1.min(v);
        u2 = u2.max(u);
        v2 = v2.max(v);
    }
    LabelRecord {
        class: class.to_string(),
        truncation: 0.0,
        occlusion: 0,
        alpha: wrap_to_pi(box3d.ry - box3d.loc[0].atan2(box3d.loc[2])),
        bbox2d: [u1, v1, u2, v2],
        h: box3d.h,
        w: box3d.w,
        l: box3d.l,
        loc: box3d.loc,
        ry: box3d.ry,
        score: Some(box3d.score),
    }
}

/// Greedy overlap suppression: keep in descending score, drop any candidate
/// whose footprint overlaps an already-kept one by more than `iou_min`.
/// Returns indices into `boxes` in their original order.
fn nms_bev(boxes: &[Box3D], iou_min: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[b].score.partial_cmp(&boxes[a].score).unwrap());
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let rect = boxes[i].bev_rect();
        if kept.iter().all(|&k| bev_iou(&boxes[k].bev_rect(), &rect) <= iou_min) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept
}

/// Labels one frame: every sufficiently confident detection of a target class
/// selects its frustum points, the densest cluster is boxed, and boxes with
/// implausible footprints are discarded. Emitted labels inherit the source
/// detection's score.
pub fn low_cost_label_frame(
    cloud: &PointCloud,
    calib: &CalibBundle,
    detections: &[Detection2D],
    cfg: &LowCostConfig,
) -> (Vec<LabelRecord>, FrameCounts) {
    let mut counts = FrameCounts { n_detections: detections.len(), ..FrameCounts::default() };
    let rect_points = cloud_to_rect(cloud, calib);

    let mut candidates: Vec<(Box3D, &str)> = Vec::new();
    for det in detections {
        if det.score < cfg.det2d_score_min
            || !cfg.target_classes.iter().any(|c| c == &det.class)
        {
            continue;
        }
        let mut roi: Vec<Point3<f64>> = frustum_select(cloud, calib, det)
            .into_iter()
            .map(|i| rect_points[i])
            .collect();
        if let Some(y_max) = cfg.roi_y_crop {
            roi.retain(|p| p.y <= y_max);
        }
        if roi.len() < cfg.min_roi_points {
            counts.n_skipped_empty += 1;
            continue;
        }
        let clustering = dbscan(&roi, &cfg.cluster);
        let target = largest_cluster(&clustering, &roi);
        if target.is_empty() {
            counts.n_skipped_empty += 1;
            continue;
        }
        let fitted = fit_box(&target, det.score);
        let width_ok = fitted.w >= cfg.width_range.0 && fitted.w <= cfg.width_range.1;
        let length_ok = fitted.l >= cfg.length_range.0 && fitted.l <= cfg.length_range.1;
        if !(width_ok && length_ok) {
            counts.n_filtered_dims += 1;
            continue;
        }
        candidates.push((fitted, &det.class));
    }

    let boxes: Vec<Box3D> = candidates.iter().map(|(b, _)| *b).collect();
    let labels: Vec<LabelRecord> = nms_bev(&boxes, cfg.nms_bev_iou)
        .into_iter()
        .map(|i| to_label_record(&candidates[i].0, candidates[i].1, calib))
        .collect();
    counts.n_emitted = labels.len();
    (labels, counts)
}
