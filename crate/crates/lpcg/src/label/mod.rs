//! Label production: frustum-and-cluster pseudo labels from 2D detections
//! (low cost), dataset assembly from externally detected 3D boxes (high
//! accuracy), and controlled label disturbance.

pub mod disturb;
pub mod highacc;
pub mod lowcost;

pub use disturb::{disturb_labels, DisturbConfig, DisturbGroup};
pub use highacc::{high_acc_assemble, HighAccConfig, MergeReport};
pub use lowcost::{low_cost_label_frame, to_label_record, FrameCounts, FrameReport, LowCostConfig};
