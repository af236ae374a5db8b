//! Rotated rectangles in the bird's-eye-view plane and the minimum-area
//! enclosing rectangle of a point set.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::geom::hull::{convex_hull_2d, BevPoint};

/// Relative area slack below which two candidate rectangles count as tied.
const AREA_TIE_TOL: f64 = 1e-9;

/// Maps an angle onto `[-pi/2, pi/2)`, identifying directions that differ by
/// a half turn (an undirected axis has no front or back).
pub fn fold_yaw(angle: f64) -> f64 {
    let r = angle.rem_euclid(PI);
    if r >= FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

/// Maps an angle onto `[-pi, pi)` without collapsing direction.
pub fn wrap_to_pi(angle: f64) -> f64 {
    (angle + PI).rem_euclid(2.0 * PI) - PI
}

/// A rotated rectangle in the bird's-eye-view plane.
///
/// `yaw` is the angle of the long axis against the camera x-axis, folded into
/// `[-pi/2, pi/2)`; `length >= width` always holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BevRect {
    pub center: BevPoint,
    pub length: f64,
    pub width: f64,
    pub yaw: f64,
}

impl BevRect {
    /// Builds a rectangle from one side direction and both extents,
    /// canonicalizing so the stated invariants hold: the longer extent becomes
    /// `length` and `yaw` tracks whichever axis that is.
    pub fn new(center: BevPoint, along: f64, across: f64, yaw_along: f64) -> Self {
        if along >= across {
            BevRect { center, length: along, width: across, yaw: fold_yaw(yaw_along) }
        } else {
            BevRect {
                center,
                length: across,
                width: along,
                yaw: fold_yaw(yaw_along + FRAC_PI_2),
            }
        }
    }

    pub fn area(&self) -> f64 {
        self.length * self.width
    }

    /// Position of `p` in the rectangle's own frame: `u` along the long axis,
    /// `v` across it.
    pub fn local(&self, p: BevPoint) -> (f64, f64) {
        let (s, c) = self.yaw.sin_cos();
        let dx = p.x - self.center.x;
        let dz = p.z - self.center.z;
        (c * dx + s * dz, -s * dx + c * dz)
    }

    pub fn contains(&self, p: BevPoint, slack: f64) -> bool {
        let (u, v) = self.local(p);
        u.abs() <= self.length / 2.0 + slack && v.abs() <= self.width / 2.0 + slack
    }

    /// Corner positions, counter-clockwise.
    pub fn corners(&self) -> [BevPoint; 4] {
        let (s, c) = self.yaw.sin_cos();
        let hl = self.length / 2.0;
        let hw = self.width / 2.0;
        [(hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)].map(|(u, v)| BevPoint {
            x: self.center.x + c * u - s * v,
            z: self.center.z + s * u + c * v,
        })
    }
}

/// Minimum-area rectangle enclosing all input points.
///
/// Some minimal rectangle is flush with an edge of the convex hull, so the
/// search enumerates hull edges and takes the axis-aligned bounding box in
/// each edge's frame — exact, no angular discretization. Area ties within
/// [`AREA_TIE_TOL`] (relative) are broken toward the smallest yaw magnitude,
/// which keeps the output deterministic for squares and similar hulls.
///
/// Degenerate inputs follow the hull: collinear points yield a zero-width
/// rectangle along their extent, a single point a zero-size rectangle at it.
pub fn min_area_rect(points: &[BevPoint]) -> Result<BevRect> {
    let hull = convex_hull_2d(points)?;
    match hull.len() {
        1 => return Ok(BevRect::new(hull[0], 0.0, 0.0, 0.0)),
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let center = BevPoint::new((a.x + b.x) / 2.0, (a.z + b.z) / 2.0);
            return Ok(BevRect::new(center, a.distance(b), 0.0, (b.z - a.z).atan2(b.x - a.x)));
        }
        _ => {}
    }

    let mut best: Option<(f64, BevRect)> = None;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let theta = (b.z - a.z).atan2(b.x - a.x);
        let (s, c) = theta.sin_cos();

        let (mut min_u, mut max_u) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_v, mut max_v) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &hull {
            let u = c * p.x + s * p.z;
            let v = -s * p.x + c * p.z;
            min_u = min_u.min(u);
            max_u = max_u.max(u);
            min_v = min_v.min(v);
            max_v = max_v.max(v);
        }
        let area = (max_u - min_u) * (max_v - min_v);
        let (cu, cv) = ((min_u + max_u) / 2.0, (min_v + max_v) / 2.0);
        let center = BevPoint::new(c * cu - s * cv, s * cu + c * cv);
        let rect = BevRect::new(center, max_u - min_u, max_v - min_v, theta);

        best = match best {
            None => Some((area, rect)),
            Some((best_area, best_rect)) => {
                let tol = AREA_TIE_TOL * best_area.max(area);
                if area < best_area - tol
                    || ((area - best_area).abs() <= tol && rect.yaw.abs() < best_rect.yaw.abs())
                {
                    Some((area, rect))
                } else {
                    Some((best_area, best_rect))
                }
            }
        };
    }
    Ok(best.expect("hull with >= 3 vertices has edges").1)
}
