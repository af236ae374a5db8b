//! Synthetic scene generator: ground-truth boxes with surface-sampled range
//! points, background clutter, and projected 2D detections, so the labeling
//! pipeline can be scored end to end against a known answer.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use nalgebra::{Matrix3, Matrix3x4, Point3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{write_bytes, Error, Result};
use crate::eval::{match_labels, MatchOptions};
use crate::geom::{project_to_image, wrap_to_pi, BevPoint, Box3D};
use crate::kitti_io::{
    encode_velodyne, write_calib, write_detections, write_label_file, CalibBundle, Detection2D,
    FrameEntry, LabelRecord, LidarPoint, PointCloud,
};
use crate::label::{to_label_record, LowCostConfig};
use crate::seed::stream_rng;

/// Image bounds every placed object must project into.
pub const IMAGE_WIDTH_PX: f64 = 1200.0;
pub const IMAGE_HEIGHT_PX: f64 = 370.0;

/// Minimum gap between footprint bounding circles, so clusters of distinct
/// objects can never bridge.
const BEV_CLEARANCE_M: f64 = 1.0;
/// Minimum gap between a clutter point and any footprint, comfortably wider
/// than the clustering radius.
const CLUTTER_CLEARANCE_M: f64 = 1.5;
/// Range noise is clamped at this many standard deviations, which keeps every
/// surface point inside a predictably inflated copy of its box.
const NOISE_CLAMP_SIGMAS: f64 = 3.0;

/// Stream ids keeping object poses, surface sampling, and clutter on
/// independent substreams of the scene seed.
const STREAM_POSE: u64 = 0;
const STREAM_SURFACE: u64 = 1;
const STREAM_CLUTTER: u64 = 2;

/// Which box faces emit surface points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceMode {
    /// Every face whose outward normal points back toward the sensor,
    /// including the roof when the sensor sits above it.
    #[default]
    AllVisible,
    /// Sensor-facing vertical faces only — the L-shape regime.
    SidesOnly,
    /// Only the most sensor-facing vertical face — the degenerate regime
    /// where the footprint collapses to a thin slab.
    SingleFace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SceneSpec {
    pub seed: u64,
    pub n_objects: usize,
    /// Sampled box dimensions, kept inside the plausibility filter's ranges.
    pub width_range: (f64, f64),
    pub length_range: (f64, f64),
    pub height_range: (f64, f64),
    /// Placement region on the ground plane.
    pub x_range: (f64, f64),
    pub z_range: (f64, f64),
    pub points_per_face: usize,
    pub n_clutter: usize,
    /// Standard deviation of range noise along the sensor ray, meters.
    pub noise_sigma: f64,
    /// Height of the sensor above the ground plane; the ground sits at
    /// `y = sensor_height` in the camera frame.
    pub sensor_height: f64,
    pub face_mode: FaceMode,
    /// Padding added around each projected box to form its 2D detection.
    pub bbox_pad_px: f64,
    pub placement_retries: usize,
}

impl Default for SceneSpec {
    fn default() -> Self {
        SceneSpec {
            seed: 0,
            n_objects: 5,
            width_range: (1.3, 1.7),
            length_range: (3.4, 4.1),
            height_range: (1.35, 1.6),
            x_range: (-14.0, 14.0),
            z_range: (8.0, 40.0),
            points_per_face: 140,
            n_clutter: 150,
            noise_sigma: 0.01,
            sensor_height: 1.73,
            face_mode: FaceMode::AllVisible,
            bbox_pad_px: 4.0,
            placement_retries: 100,
        }
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        let ordered = |name: &str, (lo, hi): (f64, f64)| {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a finite (low, high) pair, got ({lo}, {hi})"
                )));
            }
            Ok(())
        };
        ordered("width_range", self.width_range)?;
        ordered("length_range", self.length_range)?;
        ordered("height_range", self.height_range)?;
        ordered("x_range", self.x_range)?;
        ordered("z_range", self.z_range)?;
        if self.width_range.0 <= 0.0 || self.length_range.0 <= 0.0 || self.height_range.0 <= 0.0 {
            return Err(Error::InvalidConfig("box dimensions must be positive".into()));
        }
        if self.z_range.0 <= 0.0 {
            return Err(Error::InvalidConfig("z_range must stay in front of the camera".into()));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "noise_sigma must be finite and non-negative, got {}",
                self.noise_sigma
            )));
        }
        if self.placement_retries == 0 {
            return Err(Error::InvalidConfig("placement_retries must be at least 1".into()));
        }
        if !self.sensor_height.is_finite() || self.sensor_height <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sensor_height must be positive, got {}",
                self.sensor_height
            )));
        }
        Ok(())
    }
}

/// Calibration used for every generated scene: identity rotations and a
/// 700 px focal length with principal point (600, 180).
pub fn canonical_calib() -> CalibBundle {
    CalibBundle {
        p2: Matrix3x4::new(
            700.0, 0.0, 600.0, 0.0, //
            0.0, 700.0, 180.0, 0.0, //
            0.0, 0.0, 1.0, 0.0,
        ),
        r0_rect: Matrix3::identity(),
        tr_velo_to_cam: Matrix3x4::new(
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0,
        ),
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub calib: CalibBundle,
    pub cloud: PointCloud,
    pub gt: Vec<Box3D>,
    pub detections: Vec<Detection2D>,
}

/// One box face in the box's local frame: origin-relative center, two
/// in-plane half-axes, and the outward normal.
struct Face {
    center: [f64; 3],
    axis1: [f64; 3],
    half1: f64,
    axis2: [f64; 3],
    half2: f64,
    normal: [f64; 3],
}

fn side_faces(b: &Box3D) -> Vec<Face> {
    let (hl, hw, hh) = (b.l / 2.0, b.w / 2.0, b.h / 2.0);
    vec![
        Face {
            center: [hl, -hh, 0.0],
            axis1: [0.0, 0.0, 1.0],
            half1: hw,
            axis2: [0.0, 1.0, 0.0],
            half2: hh,
            normal: [1.0, 0.0, 0.0],
        },
        Face {
            center: [-hl, -hh, 0.0],
            axis1: [0.0, 0.0, 1.0],
            half1: hw,
            axis2: [0.0, 1.0, 0.0],
            half2: hh,
            normal: [-1.0, 0.0, 0.0],
        },
        Face {
            center: [0.0, -hh, hw],
            axis1: [1.0, 0.0, 0.0],
            half1: hl,
            axis2: [0.0, 1.0, 0.0],
            half2: hh,
            normal: [0.0, 0.0, 1.0],
        },
        Face {
            center: [0.0, -hh, -hw],
            axis1: [1.0, 0.0, 0.0],
            half1: hl,
            axis2: [0.0, 1.0, 0.0],
            half2: hh,
            normal: [0.0, 0.0, -1.0],
        },
    ]
}

fn roof_face(b: &Box3D) -> Face {
    Face {
        center: [0.0, -b.h, 0.0],
        axis1: [1.0, 0.0, 0.0],
        half1: b.l / 2.0,
        axis2: [0.0, 0.0, 1.0],
        half2: b.w / 2.0,
        normal: [0.0, -1.0, 0.0],
    }
}

/// Rotates a local direction into the camera frame (rotation about the
/// downward y-axis by the box yaw).
fn rotate_dir(b: &Box3D, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = b.ry.sin_cos();
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

fn local_to_world(b: &Box3D, p: [f64; 3]) -> [f64; 3] {
    let r = rotate_dir(b, p);
    [b.loc[0] + r[0], b.loc[1] + r[1], b.loc[2] + r[2]]
}

/// A face emits points when its outward normal points back at the sensor at
/// the origin.
fn faces_sensor(b: &Box3D, face: &Face) -> bool {
    let n = rotate_dir(b, face.normal);
    let c = local_to_world(b, face.center);
    n[0] * c[0] + n[1] * c[1] + n[2] * c[2] < 0.0
}

fn visible_faces(b: &Box3D, mode: FaceMode) -> Vec<Face> {
    let mut sides: Vec<Face> = side_faces(b).into_iter().filter(|f| faces_sensor(b, f)).collect();
    match mode {
        FaceMode::AllVisible => {
            let roof = roof_face(b);
            if faces_sensor(b, &roof) {
                sides.push(roof);
            }
            sides
        }
        FaceMode::SidesOnly => sides,
        FaceMode::SingleFace => {
            let most_facing = sides.into_iter().min_by(|a, b2| {
                let facing = |f: &Face| {
                    let n = rotate_dir(b, f.normal);
                    let c = local_to_world(b, f.center);
                    let len = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
                    (n[0] * c[0] + n[1] * c[1] + n[2] * c[2]) / len
                };
                facing(a).partial_cmp(&facing(b2)).unwrap()
            });
            most_facing.into_iter().collect()
        }
    }
}

/// Draws from a closed range, tolerating a degenerate `(a, a)` pin.
fn draw(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..range.1)
    }
}

/// Tight image-plane bounding box of the projected box corners.
fn projected_aabb(b: &Box3D, calib: &CalibBundle) -> [f64; 4] {
    let (mut u1, mut v1) = (f64::INFINITY, f64::INFINITY);
    let (mut u2, mut v2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for c in b.corners8() {
        let (u, v, _) = project_to_image(&Point3::new(c[0], c[1], c[2]), &calib.p2);
        u1 = u1.min(u);
        v1 = v1.min(v);
        u2 = u2.max(u);
        v2 = v2.max(v);
    }
    [u1, v1, u2, v2]
}

fn pad_bbox(bbox: [f64; 4], pad: f64) -> [f64; 4] {
    [bbox[0] - pad, bbox[1] - pad, bbox[2] + pad, bbox[3] + pad]
}

fn bboxes_disjoint(a: &[f64; 4], b: &[f64; 4]) -> bool {
    a[2] <= b[0] || b[2] <= a[0] || a[3] <= b[1] || b[3] <= a[1]
}

/// Distance from a point to a footprint rectangle (zero inside).
fn footprint_clearance(b: &Box3D, p: BevPoint) -> f64 {
    let (u, v) = b.bev_rect().local(p);
    let du = (u.abs() - b.l / 2.0).max(0.0);
    let dv = (v.abs() - b.w / 2.0).max(0.0);
    (du * du + dv * dv).sqrt()
}

/// Generates a scene: objects are placed by rejection sampling so their
/// padded projections stay inside the image and apart from each other and
/// their footprints keep a clearance in the ground plane; each visible face
/// then emits uniformly sampled points with clamped Gaussian range noise, and
/// clutter fills the rest of the region away from every object.
pub fn generate_scene(spec: &SceneSpec) -> Result<Scene> {
    spec.validate()?;
    let calib = canonical_calib();

    let mut gt: Vec<Box3D> = Vec::with_capacity(spec.n_objects);
    let mut padded: Vec<[f64; 4]> = Vec::new();
    for i in 0..spec.n_objects {
        let mut rng = stream_rng(spec.seed, &[STREAM_POSE, i as u64]);
        let mut placed = false;
        for _ in 0..spec.placement_retries {
            let w = draw(&mut rng, spec.width_range);
            let l = draw(&mut rng, spec.length_range);
            let h = draw(&mut rng, spec.height_range);
            let x = draw(&mut rng, spec.x_range);
            let z = draw(&mut rng, spec.z_range);
            let ry = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
            let candidate =
                Box3D { loc: [x, spec.sensor_height, z], h, w, l, ry, score: 1.0 };

            let bbox = pad_bbox(projected_aabb(&candidate, &calib), spec.bbox_pad_px);
            let in_image = bbox[0] >= 0.0
                && bbox[1] >= 0.0
                && bbox[2] <= IMAGE_WIDTH_PX
                && bbox[3] <= IMAGE_HEIGHT_PX;
            if !in_image {
                continue;
            }
            if !padded.iter().all(|other| bboxes_disjoint(&bbox, other)) {
                continue;
            }
            let radius = (l * l + w * w).sqrt() / 2.0;
            let clear = gt.iter().all(|o| {
                let o_radius = (o.l * o.l + o.w * o.w).sqrt() / 2.0;
                let d = ((o.loc[0] - x).powi(2) + (o.loc[2] - z).powi(2)).sqrt();
                d >= radius + o_radius + BEV_CLEARANCE_M
            });
            if !clear {
                continue;
            }
            gt.push(candidate);
            padded.push(bbox);
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::PlacementFailed(spec.placement_retries));
        }
    }

    let mut points: Vec<LidarPoint> = Vec::new();
    for (i, b) in gt.iter().enumerate() {
        let mut rng = stream_rng(spec.seed, &[STREAM_SURFACE, i as u64]);
        let noise = Normal::new(0.0, spec.noise_sigma).expect("sigma validated non-negative");
        let clamp = NOISE_CLAMP_SIGMAS * spec.noise_sigma;
        for face in visible_faces(b, spec.face_mode) {
            for _ in 0..spec.points_per_face {
                let u1 = rng.random_range(-1.0..1.0);
                let u2 = rng.random_range(-1.0..1.0);
                let local = [
                    face.center[0] + u1 * face.half1 * face.axis1[0] + u2 * face.half2 * face.axis2[0],
                    face.center[1] + u1 * face.half1 * face.axis1[1] + u2 * face.half2 * face.axis2[1],
                    face.center[2] + u1 * face.half1 * face.axis1[2] + u2 * face.half2 * face.axis2[2],
                ];
                let p = local_to_world(b, local);
                let eps = noise.sample(&mut rng).clamp(-clamp, clamp);
                let range = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                let scale = if range > 0.0 { 1.0 + eps / range } else { 1.0 };
                let reflectance = rng.random::<f32>();
                points.push(LidarPoint {
                    x: (p[0] * scale) as f32,
                    y: (p[1] * scale) as f32,
                    z: (p[2] * scale) as f32,
                    reflectance,
                });
            }
        }
    }

    let mut rng = stream_rng(spec.seed, &[STREAM_CLUTTER]);
    for _ in 0..spec.n_clutter {
        let mut placed = false;
        for _ in 0..1000 {
            let x = draw(&mut rng, spec.x_range);
            let z = draw(&mut rng, spec.z_range);
            let y = rng.random_range(0.0..spec.sensor_height);
            let reflectance = rng.random::<f32>();
            let clear = gt
                .iter()
                .all(|b| footprint_clearance(b, BevPoint::new(x, z)) >= CLUTTER_CLEARANCE_M);
            if clear {
                points.push(LidarPoint { x: x as f32, y: y as f32, z: z as f32, reflectance });
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::PlacementFailed(1000));
        }
    }

    let detections: Vec<Detection2D> = gt
        .iter()
        .map(|b| Detection2D {
            bbox: pad_bbox(projected_aabb(b, &calib), spec.bbox_pad_px),
            score: 1.0,
            class: "Car".to_string(),
            mask: None,
        })
        .collect();

    Ok(Scene { calib, cloud: PointCloud { points, dropped_nonfinite: 0 }, gt, detections })
}

/// Ground-truth label records for a scene: plain unscored entries, one per
/// object.
pub fn gt_records(scene: &Scene) -> Vec<LabelRecord> {
    scene
        .gt
        .iter()
        .map(|b| LabelRecord { score: None, ..to_label_record(b, "Car", &scene.calib) })
        .collect()
}

/// Writes a scene to `root` in the dataset layout (`velodyne/`, `calib/`,
/// `label_2/`, `detections/`) and returns the manifest entry with paths
/// relative to `root`.
pub fn dump_scene(scene: &Scene, root: &Path, frame_id: &str) -> Result<FrameEntry> {
    for sub in ["velodyne", "calib", "label_2", "detections"] {
        let dir = root.join(sub);
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
    }
    let cloud_rel = format!("velodyne/{frame_id}.bin");
    let calib_rel = format!("calib/{frame_id}.txt");
    let label_rel = format!("label_2/{frame_id}.txt");
    let det_rel = format!("detections/{frame_id}.json");
    write_bytes(&root.join(&cloud_rel), &encode_velodyne(&scene.cloud))?;
    write_bytes(&root.join(&calib_rel), write_calib(&scene.calib).as_bytes())?;
    write_bytes(&root.join(&label_rel), write_label_file(&gt_records(scene)).as_bytes())?;
    write_bytes(&root.join(&det_rel), write_detections(&scene.detections).as_bytes())?;
    Ok(FrameEntry {
        frame_id: frame_id.to_string(),
        has_annotation: true,
        cloud: cloud_rel.into(),
        calib: calib_rel.into(),
        label: Some(label_rel.into()),
        detections: Some(det_rel.into()),
        image: None,
    })
}

/// How well one ground-truth object was recovered. Unmatched objects keep
/// NaN errors, so tolerance comparisons on them are always false.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectRecovery {
    pub gt_idx: usize,
    pub matched: bool,
    /// Yaw error modulo a half turn (the footprint is symmetric under
    /// reversal), in degrees.
    pub yaw_err_deg: f64,
    /// Ground-plane center distance, meters.
    pub center_err_m: f64,
    /// Worst relative error across the three dimensions.
    pub dim_err_rel: f64,
}

impl ObjectRecovery {
    pub fn within(&self, yaw_deg: f64, center_m: f64, dim_rel: f64) -> bool {
        self.matched
            && self.yaw_err_deg <= yaw_deg
            && self.center_err_m <= center_m
            && self.dim_err_rel <= dim_rel
    }
}

/// Undirected angular difference: the footprint cannot distinguish a box
/// from its half-turn reversal, so errors fold into `[0, π/2]`.
fn yaw_error_mod_pi(a: f64, b: f64) -> f64 {
    let e = wrap_to_pi(a - b).abs();
    if e > FRAC_PI_2 {
        std::f64::consts::PI - e
    } else {
        e
    }
}

/// Generates a scene, labels it with the low-cost pipeline, and scores the
/// output against the ground truth by footprint overlap at 0.5.
pub fn recovery_trial(spec: &SceneSpec, cfg: &LowCostConfig) -> Result<Vec<ObjectRecovery>> {
    let scene = generate_scene(spec)?;
    let (pseudo, _) = crate::label::low_cost_label_frame(
        &scene.cloud,
        &scene.calib,
        &scene.detections,
        cfg,
    );
    let gt = gt_records(&scene);
    let report = match_labels(&pseudo, &gt, &MatchOptions::default());

    let mut out: Vec<ObjectRecovery> = (0..scene.gt.len())
        .map(|gt_idx| ObjectRecovery {
            gt_idx,
            matched: false,
            yaw_err_deg: f64::NAN,
            center_err_m: f64::NAN,
            dim_err_rel: f64::NAN,
        })
        .collect();
    for m in &report.matches {
        let p = Box3D::from_record(&pseudo[m.pseudo_idx]);
        let g = &scene.gt[m.gt_idx];
        out[m.gt_idx] = ObjectRecovery {
            gt_idx: m.gt_idx,
            matched: true,
            yaw_err_deg: yaw_error_mod_pi(p.ry, g.ry).to_degrees(),
            center_err_m: ((p.loc[0] - g.loc[0]).powi(2) + (p.loc[2] - g.loc[2]).powi(2)).sqrt(),
            dim_err_rel: [(p.h - g.h) / g.h, (p.w - g.w) / g.w, (p.l - g.l) / g.l]
                .iter()
                .fold(0.0, |acc, d| acc.max(d.abs())),
        };
    }
    Ok(out)
}
