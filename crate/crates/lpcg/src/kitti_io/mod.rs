//! KITTI-style dataset formats: calibration text, object label files,
//! packed point clouds, 2D detection JSON, and dataset manifests.

mod calib;
mod detections;
mod label;
mod manifest;
mod velodyne;

pub use calib::{parse_calib, write_calib, CalibBundle};
pub use detections::{parse_detections, write_detections, Detection2D};
pub use label::{parse_label_file, write_label_file, LabelRecord};
pub use manifest::{DatasetManifest, FrameEntry};
pub use velodyne::{encode_velodyne, parse_velodyne, LidarPoint, PointCloud};

use crate::error::{read_bytes, read_to_string, Result};
use std::path::Path;

/// Parse a calibration file from disk.
pub fn read_calib_file(path: &Path) -> Result<CalibBundle> {
    parse_calib(&read_to_string(path)?)
}

/// Parse a label file from disk.
pub fn read_label_file(path: &Path) -> Result<Vec<LabelRecord>> {
    parse_label_file(&read_to_string(path)?)
}

/// Parse a packed point cloud from disk.
pub fn read_velodyne_file(path: &Path) -> Result<PointCloud> {
    parse_velodyne(&read_bytes(path)?)
}

/// Parse a detection JSON file from disk.
pub fn read_detections_file(path: &Path) -> Result<Vec<Detection2D>> {
    parse_detections(&read_to_string(path)?)
}
