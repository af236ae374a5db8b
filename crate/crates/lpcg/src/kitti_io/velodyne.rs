//! Packed LiDAR sweeps: little-endian `f32` quadruples (x, y, z, reflectance),
//! 16 bytes per point, no header.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LidarPoint {
    pub x: f32,
    pub y: f32,
    pub z: f32,
    pub reflectance: f32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<LidarPoint>,
    /// Points discarded at parse time because a coordinate was NaN or infinite.
    pub dropped_nonfinite: usize,
}

pub fn parse_velodyne(bytes: &[u8]) -> Result<PointCloud> {
    if bytes.len() % 16 != 0 {
        return Err(Error::MalformedCloud(bytes.len()));
    }
    let mut cloud = PointCloud {
        points: Vec::with_capacity(bytes.len() / 16),
        dropped_nonfinite: 0,
    };
    for chunk in bytes.chunks_exact(16) {
        let f = |i: usize| f32::from_le_bytes([chunk[i], chunk[i + 1], chunk[i + 2], chunk[i + 3]]);
        let p = LidarPoint {
            x: f(0),
            y: f(4),
            z: f(8),
            reflectance: f(12),
        };
        if p.x.is_finite() && p.y.is_finite() && p.z.is_finite() && p.reflectance.is_finite() {
            cloud.points.push(p);
        } else {
            cloud.dropped_nonfinite += 1;
        }
    }
    Ok(cloud)
}

pub fn encode_velodyne(cloud: &PointCloud) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(cloud.points.len() * 16);
    for p in &cloud.points {
        bytes.extend_from_slice(&p.x.to_le_bytes());
        bytes.extend_from_slice(&p.y.to_le_bytes());
        bytes.extend_from_slice(&p.z.to_le_bytes());
        bytes.extend_from_slice(&p.reflectance.to_le_bytes());
    }
    bytes
}
