//! Geometry for box fitting and evaluation: coordinate transforms, image
//! projection, frustum membership, convex hulls in the ground plane, the
//! minimum-area enclosing rectangle, and rotated-box overlap.

pub mod box3;
pub mod hull;
pub mod iou;
pub mod rect;
pub mod transform;

pub use box3::Box3D;
pub use hull::{convex_hull_2d, cross, min_signed_edge_distance, BevPoint};
pub use iou::{bev_iou, clip_convex, iou_3d, polygon_area};
pub use rect::{fold_yaw, min_area_rect, wrap_to_pi, BevRect};
pub use transform::{
    cloud_to_rect, frustum_select, lidar_to_rect, point_in_polygon, project_to_image,
    rect_to_lidar,
};
