//! `render-bev`: draw a frame's point cloud and any number of label files
//! as a bird's-eye-view SVG for quick visual inspection.
//!
//! The viewport is fixed — 40 m to either side, 80 m ahead, 10 px/m — so
//! renders of different frames line up when flipped through, and identical
//! inputs produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use lpcg::error::write_bytes;
use lpcg::geom::{cloud_to_rect, Box3D};
use lpcg::kitti_io::{read_calib_file, read_label_file, read_velodyne_file, LabelRecord};
use nalgebra::Point3;

use crate::error::CliResult;

/// Half-width of the viewport in meters; the sensor sits bottom-center.
const X_HALF_M: f64 = 40.0;
/// Forward extent of the viewport in meters.
const Z_MAX_M: f64 = 80.0;
const PX_PER_M: f64 = 10.0;
const CANVAS_W: f64 = 2.0 * X_HALF_M * PX_PER_M;
const CANVAS_H: f64 = Z_MAX_M * PX_PER_M;

/// Stroke colors cycled through per label file.
const PALETTE: [&str; 5] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd"];

/// Lateral meters to pixels; x grows rightward.
fn px(x: f64) -> f64 {
    (x + X_HALF_M) * PX_PER_M
}

/// Forward meters to pixels; z grows away from the sensor, SVG y grows
/// downward, so the far edge is the top of the canvas.
fn py(z: f64) -> f64 {
    (Z_MAX_M - z) * PX_PER_M
}

fn in_window(x: f64, z: f64) -> bool {
    (-X_HALF_M..=X_HALF_M).contains(&x) && (0.0..=Z_MAX_M).contains(&z)
}

fn render(points: &[Point3<f64>], label_sets: &[Vec<LabelRecord>]) -> String {
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_W}" height="{CANVAS_H}" viewBox="0 0 {CANVAS_W} {CANVAS_H}">"#
    )
    .expect("string write");
    writeln!(svg, r##"<rect width="{CANVAS_W}" height="{CANVAS_H}" fill="#ffffff"/>"##)
        .expect("string write");

    // 10 m grid so distances read off directly.
    for i in 0..=8 {
        let x = f64::from(i) * 100.0;
        writeln!(
            svg,
            r##"<line x1="{x}" y1="0" x2="{x}" y2="{CANVAS_H}" stroke="#e8e8e8" stroke-width="1"/>"##
        )
        .expect("string write");
        writeln!(
            svg,
            r##"<line x1="0" y1="{x}" x2="{CANVAS_W}" y2="{x}" stroke="#e8e8e8" stroke-width="1"/>"##
        )
        .expect("string write");
    }
    // The sensor position.
    writeln!(
        svg,
        r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#202020"/>"##,
        px(0.0),
        py(0.0)
    )
    .expect("string write");

    for p in points {
        if !in_window(p.x, p.z) {
            continue;
        }
        writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="1" fill="#555555"/>"##,
            px(p.x),
            py(p.z)
        )
        .expect("string write");
    }

    for (set_idx, records) in label_sets.iter().enumerate() {
        let color = PALETTE[set_idx % PALETTE.len()];
        for rec in records {
            if rec.is_dontcare() {
                continue;
            }
            let corners = Box3D::from_record(rec).bev_corners();
            let pts = corners
                .iter()
                .map(|c| format!("{:.2},{:.2}", px(c.x), py(c.z)))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                svg,
                r#"<polygon points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
            )
            .expect("string write");
        }
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn run(
    cloud_path: Option<&Path>,
    calib_path: Option<&Path>,
    label_paths: &[std::path::PathBuf],
    out_path: &Path,
) -> CliResult {
    let points = match (cloud_path, calib_path) {
        (Some(cloud), Some(calib)) => {
            cloud_to_rect(&read_velodyne_file(cloud)?, &read_calib_file(calib)?)
        }
        _ => Vec::new(),
    };
    let mut label_sets = Vec::with_capacity(label_paths.len());
    for path in label_paths {
        label_sets.push(read_label_file(path)?);
    }
    write_bytes(out_path, render(&points, &label_sets).as_bytes())?;
    println!(
        "render-bev: {} points, {} label sets -> {}",
        points.len(),
        label_sets.len(),
        out_path.display()
    );
    Ok(())
}
