//! Convex hulls of point sets in the bird's-eye-view plane.

use crate::error::{Error, Result};

/// A point in the bird's-eye-view plane: camera `x` (right) and `z` (forward).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BevPoint {
    pub x: f64,
    pub z: f64,
}

impl BevPoint {
    pub fn new(x: f64, z: f64) -> Self {
        BevPoint { x, z }
    }

    pub fn distance(self, other: BevPoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }
}

/// Cross product `(a - o) x (b - o)`: positive when `o -> a -> b` turns left.
pub fn cross(o: BevPoint, a: BevPoint, b: BevPoint) -> f64 {
    (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise.
///
/// Collinear points along hull edges are discarded, so no three retained
/// vertices are collinear. Degenerate inputs shrink the result: a collinear
/// set yields its two extreme points, a single (possibly repeated) point
/// yields that point alone.
pub fn convex_hull_2d(points: &[BevPoint]) -> Result<Vec<BevPoint>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.z.total_cmp(&b.z)));
    pts.dedup_by(|a, b| a.x == b.x && a.z == b.z);
    if pts.len() == 1 {
        return Ok(pts);
    }

    let mut hull: Vec<BevPoint> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Ok(hull)
}

/// Minimum over all polygon edges of the signed perpendicular distance from
/// `p` to the edge's line: positive inside a counter-clockwise convex
/// polygon, negative outside. Degenerate polygons (1 or 2 vertices) have no
/// interior, so the result is the negated distance to the point or segment.
pub fn min_signed_edge_distance(poly: &[BevPoint], p: BevPoint) -> f64 {
    match poly.len() {
        0 => f64::NEG_INFINITY,
        1 => -p.distance(poly[0]),
        2 => -segment_distance(poly[0], poly[1], p),
        n => {
            let mut min = f64::INFINITY;
            for i in 0..n {
                let a = poly[i];
                let b = poly[(i + 1) % n];
                let d = cross(a, b, p) / a.distance(b);
                min = min.min(d);
            }
            min
        }
    }
}

fn segment_distance(a: BevPoint, b: BevPoint, p: BevPoint) -> f64 {
    let len2 = (b.x - a.x).powi(2) + (b.z - a.z).powi(2);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * (b.x - a.x) + (p.z - a.z) * (b.z - a.z)) / len2).clamp(0.0, 1.0);
    p.distance(BevPoint::new(a.x + t * (b.x - a.x), a.z + t * (b.z - a.z)))
}
