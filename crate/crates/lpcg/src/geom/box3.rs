//! Oriented 3D boxes in the rectified camera frame.

use crate::geom::hull::BevPoint;
use crate::geom::rect::BevRect;
use crate::kitti_io::LabelRecord;

/// An upright 3D box: `loc` is the bottom-face center in the rectified camera
/// frame (y down), `ry` the rotation around the y-axis, `h`/`w`/`l` the
/// extents along the vertical, short, and long axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3D {
    pub loc: [f64; 3],
    pub h: f64,
    pub w: f64,
    pub l: f64,
    pub ry: f64,
    pub score: f64,
}

impl Box3D {
    /// Geometry of a label record; unscored (ground-truth) records default to
    /// full confidence.
    pub fn from_record(r: &LabelRecord) -> Self {
        Box3D {
            loc: r.loc,
            h: r.h,
            w: r.w,
            l: r.l,
            ry: r.ry,
            score: r.score.unwrap_or(1.0),
        }
    }

    /// Ground-plane footprint. A rotation of `ry` around the downward y-axis
    /// turns the length axis to direction `(cos ry, -sin ry)` in the `(x, z)`
    /// plane, so the footprint yaw is `-ry` folded onto the undirected range.
    pub fn bev_rect(&self) -> BevRect {
        BevRect::new(BevPoint::new(self.loc[0], self.loc[2]), self.l, self.w, -self.ry)
    }

    /// Footprint corners via the y-rotation applied to the local corner
    /// offsets `(±l/2, ±w/2)`.
    pub fn bev_corners(&self) -> [BevPoint; 4] {
        let (s, c) = self.ry.sin_cos();
        let hl = self.l / 2.0;
        let hw = self.w / 2.0;
        [(hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw)].map(|(x, z)| BevPoint {
            x: self.loc[0] + c * x + s * z,
            z: self.loc[2] - s * x + c * z,
        })
    }

    /// All eight corners: the footprint at the bottom face (`y = loc.y`) and
    /// again shifted up by the height (`y = loc.y - h`).
    pub fn corners8(&self) -> [[f64; 3]; 8] {
        let bev = self.bev_corners();
        let mut out = [[0.0; 3]; 8];
        for (i, c) in bev.iter().enumerate() {
            out[i] = [c.x, self.loc[1], c.z];
            out[i + 4] = [c.x, self.loc[1] - self.h, c.z];
        }
        out
    }
}
