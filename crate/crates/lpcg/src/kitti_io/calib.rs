//! Calibration files: plain text, one `KEY: v0 v1 ...` entry per line.
//!
//! `P2` (3x4 camera projection), `R0_rect` (3x3 rectifying rotation), and
//! `Tr_velo_to_cam` (3x4 rigid LiDAR-to-camera transform) are required, all
//! row-major. Unknown keys (`P0`, `Tr_imu_to_velo`, ...) are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::{Matrix3, Matrix3x4, Matrix4};

use crate::error::{Error, Result};

/// How far from orthonormal a stored rotation may be. Values come straight
/// from the file; no re-orthonormalization is applied.
const ROTATION_TOL: f64 = 1e-3;

/// Camera projection and sensor alignment for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibBundle {
    /// Camera projection (left color camera), row-major.
    pub p2: Matrix3x4<f64>,
    /// Rectifying rotation applied after the LiDAR-to-camera transform.
    pub r0_rect: Matrix3<f64>,
    /// Rigid transform from LiDAR to unrectified camera coordinates.
    pub tr_velo_to_cam: Matrix3x4<f64>,
}

impl CalibBundle {
    /// Homogeneous map from LiDAR coordinates to rectified camera coordinates:
    /// `p_rect = R0_rect * (Tr_velo_to_cam * [p; 1])`.
    pub fn velo_to_rect(&self) -> Matrix4<f64> {
        let mut tr = Matrix4::identity();
        tr.fixed_view_mut::<3, 4>(0, 0).copy_from(&self.tr_velo_to_cam);
        let mut r0 = Matrix4::identity();
        r0.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.r0_rect);
        r0 * tr
    }

    /// Inverse of [`CalibBundle::velo_to_rect`].
    pub fn rect_to_velo(&self) -> Matrix4<f64> {
        self.velo_to_rect()
            .try_inverse()
            .expect("rigid sensor transform is invertible")
    }
}

pub fn parse_calib(text: &str) -> Result<CalibBundle> {
    let mut entries: HashMap<String, Vec<f64>> = HashMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| {
            Error::MalformedCalib(format!("line without `key:` prefix: `{line}`"))
        })?;
        let key = key.trim();
        let values = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| {
                    Error::MalformedCalib(format!("{key}: non-numeric value `{tok}`"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        entries.insert(key.to_string(), values);
    }

    let p2 = take(&entries, "P2", 12)?;
    let r0 = take(&entries, "R0_rect", 9)?;
    let tr = take(&entries, "Tr_velo_to_cam", 12)?;

    let bundle = CalibBundle {
        p2: Matrix3x4::from_row_slice(&p2),
        r0_rect: Matrix3::from_row_slice(&r0),
        tr_velo_to_cam: Matrix3x4::from_row_slice(&tr),
    };

    let ortho_dev = (bundle.r0_rect * bundle.r0_rect.transpose() - Matrix3::identity()).amax();
    if ortho_dev > ROTATION_TOL {
        return Err(Error::MalformedCalib(format!(
            "R0_rect is not orthonormal (max deviation {ortho_dev:.3e})"
        )));
    }
    let rot = bundle.tr_velo_to_cam.fixed_view::<3, 3>(0, 0).into_owned();
    let det = rot.determinant();
    if (det - 1.0).abs() > ROTATION_TOL {
        return Err(Error::MalformedCalib(format!(
            "Tr_velo_to_cam rotation determinant {det:.6} is not 1"
        )));
    }
    Ok(bundle)
}

fn take(entries: &HashMap<String, Vec<f64>>, key: &str, want: usize) -> Result<Vec<f64>> {
    let values = entries
        .get(key)
        .ok_or_else(|| Error::MissingCalibKey(key.to_string()))?;
    if values.len() != want {
        return Err(Error::MalformedCalib(format!(
            "{key}: expected {want} values, got {}",
            values.len()
        )));
    }
    Ok(values.clone())
}

/// Serialize a bundle back to calibration text. Values are written with 16
/// fractional digits so parse -> write -> parse is lossless.
pub fn write_calib(calib: &CalibBundle) -> String {
    let mut out = String::new();
    write_row(&mut out, "P2", calib.p2.transpose().as_slice());
    write_row(&mut out, "R0_rect", calib.r0_rect.transpose().as_slice());
    write_row(
        &mut out,
        "Tr_velo_to_cam",
        calib.tr_velo_to_cam.transpose().as_slice(),
    );
    out
}

fn write_row(out: &mut String, key: &str, row_major: &[f64]) {
    out.push_str(key);
    out.push(':');
    for v in row_major {
        write!(out, " {v:.16e}").expect("string write");
    }
    out.push('\n');
}
