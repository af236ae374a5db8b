//! Auto-labeling toolkit for KITTI-style 3D object datasets.
//!
//! The crate turns raw LiDAR sweeps plus cheap 2D detections into 3D
//! pseudo labels, merges externally produced high-quality detections into
//! training manifests, perturbs labels for robustness studies, and scores
//! label sets with KITTI-style matching, relative-error, and average-precision
//! metrics. A deterministic synthetic scene generator provides ground truth
//! for end-to-end checks of the whole chain.
//!
//! Modules:
//! - [`kitti_io`]: calibration, label, point-cloud, detection, and manifest
//!   formats.
//! - [`geom`]: sensor-frame transforms, projection, frustum selection, convex
//!   hulls, minimum-area rectangles, and rotated-box IoU.
//! - [`cluster`]: density clustering of frustum points.
//! - [`label`]: the low-cost labeling pipeline, high-accuracy dataset
//!   assembly, and label disturbance.
//! - [`eval`]: matching, mean relative error, difficulty buckets, and AP.
//! - [`synth`]: seeded synthetic scenes and recovery trials.

pub mod cluster;
pub mod error;
pub mod eval;
pub mod geom;
pub mod kitti_io;
pub mod label;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};
