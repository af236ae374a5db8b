//! Overlap of rotated boxes: convex polygon clipping in the bird's-eye-view
//! plane, extended to volumes by the vertical extent.

use crate::geom::box3::Box3D;
use crate::geom::hull::{cross, BevPoint};
use crate::geom::rect::BevRect;

/// Signed shoelace area; positive for counter-clockwise polygons, zero for
/// fewer than three vertices.
pub fn polygon_area(poly: &[BevPoint]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        twice += a.x * b.z - b.x * a.z;
    }
    twice / 2.0
}

/// Sutherland-Hodgman clip of a convex counter-clockwise `subject` polygon
/// against a convex counter-clockwise `clip` polygon. Returns the (possibly
/// empty) intersection polygon.
pub fn clip_convex(subject: &[BevPoint], clip: &[BevPoint]) -> Vec<BevPoint> {
    let mut output = subject.to_vec();
    for i in 0..clip.len() {
        if output.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % clip.len()];
        let input = std::mem::take(&mut output);
        for j in 0..input.len() {
            let p = input[j];
            let q = input[(j + 1) % input.len()];
            let p_in = cross(a, b, p) >= 0.0;
            let q_in = cross(a, b, q) >= 0.0;
            match (p_in, q_in) {
                (true, true) => output.push(q),
                (true, false) => output.push(edge_intersection(a, b, p, q)),
                (false, true) => {
                    output.push(edge_intersection(a, b, p, q));
                    output.push(q);
                }
                (false, false) => {}
            }
        }
    }
    output
}

/// Intersection of segment `p`-`q` with the infinite line through `a`-`b`;
/// callers guarantee the endpoints straddle the line.
fn edge_intersection(a: BevPoint, b: BevPoint, p: BevPoint, q: BevPoint) -> BevPoint {
    let dp = cross(a, b, p);
    let dq = cross(a, b, q);
    let t = dp / (dp - dq);
    BevPoint::new(p.x + t * (q.x - p.x), p.z + t * (q.z - p.z))
}

/// Intersection-over-union of two rotated rectangles in the bird's-eye-view
/// plane. Zero-area rectangles overlap nothing by convention.
pub fn bev_iou(a: &BevRect, b: &BevRect) -> f64 {
    let (area_a, area_b) = (a.area(), b.area());
    if area_a <= 0.0 || area_b <= 0.0 {
        return 0.0;
    }
    let inter = polygon_area(&clip_convex(&a.corners(), &b.corners())).max(0.0);
    (inter / (area_a + area_b - inter)).clamp(0.0, 1.0)
}

/// Volume intersection-over-union: bird's-eye-view polygon overlap times the
/// overlap of the vertical spans `[y - h, y]` (the y-axis points down, so `y`
/// is the bottom face).
pub fn iou_3d(a: &Box3D, b: &Box3D) -> f64 {
    let vol_a = a.h * a.w * a.l;
    let vol_b = b.h * b.w * b.l;
    if vol_a <= 0.0 || vol_b <= 0.0 {
        return 0.0;
    }
    let bev_inter =
        polygon_area(&clip_convex(&a.bev_rect().corners(), &b.bev_rect().corners())).max(0.0);
    let y_overlap =
        (a.loc[1].min(b.loc[1]) - (a.loc[1] - a.h).max(b.loc[1] - b.h)).max(0.0);
    let inter = bev_inter * y_overlap;
    (inter / (vol_a + vol_b - inter)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    fn pt(x: f64, z: f64) -> BevPoint {
        BevPoint::new(x, z)
    }

    fn unit_square_at(x: f64, z: f64) -> BevRect {
        BevRect { center: pt(x, z), length: 1.0, width: 1.0, yaw: 0.0 }
    }

    #[test]
    fn shoelace_area_of_ccw_square_is_positive() {
        let sq = [pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 2.0), pt(0.0, 2.0)];
        assert_eq!(polygon_area(&sq), 4.0);
        assert_eq!(polygon_area(&sq[..2]), 0.0);
    }

    #[test]
    fn clip_of_overlapping_squares_has_expected_area() {
        let a = unit_square_at(0.0, 0.0).corners();
        let b = unit_square_at(0.5, 0.5).corners();
        let inter = clip_convex(&a, &b);
        assert_abs_diff_eq!(polygon_area(&inter), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn clip_of_disjoint_squares_is_empty() {
        let a = unit_square_at(0.0, 0.0).corners();
        let b = unit_square_at(5.0, 0.0).corners();
        assert_eq!(polygon_area(&clip_convex(&a, &b)), 0.0);
    }

    #[test]
    fn identical_rects_have_unit_overlap() {
        let r = BevRect { center: pt(4.0, 20.0), length: 3.9, width: 1.6, yaw: 0.7 };
        assert_abs_diff_eq!(bev_iou(&r, &r), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn disjoint_rects_have_zero_overlap() {
        assert_eq!(bev_iou(&unit_square_at(0.0, 0.0), &unit_square_at(10.0, 0.0)), 0.0);
    }

    #[test]
    fn half_shifted_unit_squares_overlap_one_third() {
        let iou = bev_iou(&unit_square_at(0.0, 0.0), &unit_square_at(0.5, 0.0));
        assert_abs_diff_eq!(iou, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_area_rect_overlaps_nothing() {
        let degenerate = BevRect { center: pt(0.0, 0.0), length: 2.0, width: 0.0, yaw: 0.0 };
        assert_eq!(bev_iou(&degenerate, &unit_square_at(0.0, 0.0)), 0.0);
    }

    #[test]
    fn symmetric_and_bounded_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let mut rect = || BevRect::new(
                pt(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
                rng.random_range(0.1..4.0),
                rng.random_range(0.1..4.0),
                rng.random_range(-2.0..2.0),
            );
            let (a, b) = (rect(), rect());
            let ab = bev_iou(&a, &b);
            let ba = bev_iou(&b, &a);
            assert_abs_diff_eq!(ab, ba, epsilon = 1e-12);
            assert!((0.0..=1.0).contains(&ab));
        }
    }

    #[test]
    fn joint_rigid_motion_preserves_overlap() {
        let a = BevRect { center: pt(1.0, 2.0), length: 4.0, width: 2.0, yaw: 0.3 };
        let b = BevRect { center: pt(1.5, 2.5), length: 3.0, width: 1.5, yaw: -0.4 };
        let before = bev_iou(&a, &b);

        let theta: f64 = 1.1;
        let (s, c) = theta.sin_cos();
        let (dx, dz) = (7.0, -3.0);
        let transform = |r: &BevRect| BevRect {
            center: pt(c * r.center.x - s * r.center.z + dx, s * r.center.x + c * r.center.z + dz),
            length: r.length,
            width: r.width,
            yaw: crate::geom::rect::fold_yaw(r.yaw + theta),
        };
        let after = bev_iou(&transform(&a), &transform(&b));
        assert_relative_eq!(before, after, max_relative = 1e-9);
    }

    fn boxed(y: f64, h: f64) -> Box3D {
        Box3D { loc: [0.0, y, 10.0], h, w: 1.6, l: 3.9, ry: 0.0, score: 1.0 }
    }

    #[test]
    fn identical_boxes_have_unit_volume_overlap() {
        assert_abs_diff_eq!(iou_3d(&boxed(1.7, 1.5), &boxed(1.7, 1.5)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vertically_disjoint_boxes_have_zero_volume_overlap() {
        assert_eq!(iou_3d(&boxed(0.0, 1.5), &boxed(10.0, 1.5)), 0.0);
    }

    #[test]
    fn half_height_offset_gives_one_third() {
        // Same footprint, bottoms h/2 apart: shared slab h/2, union 3h/2.
        let iou = iou_3d(&boxed(1.5, 1.5), &boxed(2.25, 1.5));
        assert_abs_diff_eq!(iou, 1.0 / 3.0, epsilon = 1e-12);
    }
}
