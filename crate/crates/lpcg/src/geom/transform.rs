//! Frame changes between the LiDAR and rectified camera coordinate systems,
//! pinhole projection, and frustum point selection behind a 2D detection.

use nalgebra::{Matrix3x4, Point3, Vector4};

use crate::kitti_io::{CalibBundle, Detection2D, PointCloud};

/// Maps one LiDAR-frame point into the rectified camera frame.
pub fn lidar_to_rect(p: Point3<f64>, calib: &CalibBundle) -> Point3<f64> {
    calib.velo_to_rect().transform_point(&p)
}

/// Maps a whole sweep into the rectified camera frame.
pub fn cloud_to_rect(cloud: &PointCloud, calib: &CalibBundle) -> Vec<Point3<f64>> {
    let m = calib.velo_to_rect();
    cloud
        .points
        .iter()
        .map(|p| m.transform_point(&Point3::new(p.x as f64, p.y as f64, p.z as f64)))
        .collect()
}

/// Inverse of [`lidar_to_rect`].
pub fn rect_to_lidar(p: Point3<f64>, calib: &CalibBundle) -> Point3<f64> {
    calib.rect_to_velo().transform_point(&p)
}

/// Pinhole projection of a rectified-frame point: pixel `(u, v)` plus the
/// depth (the third homogeneous coordinate before division). Points at or
/// behind the image plane yield non-positive depth; callers filter on it.
pub fn project_to_image(p: &Point3<f64>, p2: &Matrix3x4<f64>) -> (f64, f64, f64) {
    let h = p2 * Vector4::new(p.x, p.y, p.z, 1.0);
    (h.x / h.z, h.y / h.z, h.z)
}

/// Even-odd ray-casting membership test for an arbitrary (possibly concave)
/// pixel polygon.
pub fn point_in_polygon(poly: &[[f64; 2]], u: f64, v: f64) -> bool {
    if poly.len() < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let [xi, yi] = poly[i];
        let [xj, yj] = poly[j];
        if (yi > v) != (yj > v) && u < xi + (v - yi) * (xj - xi) / (yj - yi) {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Indices of cloud points that fall inside the detection's frustum: positive
/// depth, and the projection lies in the instance mask when one is present,
/// else in the 2D box. An empty result is valid (the caller skips such
/// detections).
pub fn frustum_select(cloud: &PointCloud, calib: &CalibBundle, det: &Detection2D) -> Vec<usize> {
    let m = calib.velo_to_rect();
    let [x1, y1, x2, y2] = det.bbox;
    let mut selected = Vec::new();
    for (i, p) in cloud.points.iter().enumerate() {
        let rect = m.transform_point(&Point3::new(p.x as f64, p.y as f64, p.z as f64));
        let (u, v, depth) = project_to_image(&rect, &calib.p2);
        if depth <= 0.0 {
            continue;
        }
        let inside = match &det.mask {
            Some(poly) => point_in_polygon(poly, u, v),
            None => (x1..=x2).contains(&u) && (y1..=y2).contains(&v),
        };
        if inside {
            selected.push(i);
        }
    }
    selected
}
