//! Object label files: one object per line, whitespace-separated.
//!
//! The 15 ground-truth fields are class, truncation, occlusion, alpha, 2D box
//! (x1 y1 x2 y2), dimensions (h w l), location (x y z, camera frame, y down,
//! location = bottom-face center), and yaw around the camera y axis. A 16th
//! field, when present, is a confidence score. Numbers serialize with two
//! decimals (score: four); `DontCare` lines carry sentinel values and are kept
//! verbatim.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LabelRecord {
    pub class: String,
    pub truncation: f64,
    pub occlusion: i32,
    pub alpha: f64,
    /// 2D image box [x1, y1, x2, y2] in pixels.
    pub bbox2d: [f64; 4],
    /// Height, width, length in meters.
    pub h: f64,
    pub w: f64,
    pub l: f64,
    /// Bottom-face center in rectified camera coordinates.
    pub loc: [f64; 3],
    /// Rotation around the camera y axis, radians.
    pub ry: f64,
    /// Detection confidence; absent in ground-truth files.
    pub score: Option<f64>,
}

impl LabelRecord {
    pub fn is_dontcare(&self) -> bool {
        self.class == "DontCare"
    }

    /// 2D box height in pixels; drives difficulty assignment.
    pub fn bbox_height(&self) -> f64 {
        self.bbox2d[3] - self.bbox2d[1]
    }
}

pub fn parse_label_file(text: &str) -> Result<Vec<LabelRecord>> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        records.push(parse_line(line, idx + 1)?);
    }
    Ok(records)
}

fn parse_line(line: &str, line_no: usize) -> Result<LabelRecord> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 15 && fields.len() != 16 {
        return Err(Error::MalformedLabelLine {
            line: line_no,
            reason: format!("expected 15 or 16 fields, got {}", fields.len()),
        });
    }
    let num = |idx: usize| -> Result<f64> {
        fields[idx].parse::<f64>().map_err(|_| Error::MalformedLabelLine {
            line: line_no,
            reason: format!("field {} is not a number: `{}`", idx + 1, fields[idx]),
        })
    };
    let occlusion = fields[2]
        .parse::<i32>()
        .map_err(|_| Error::MalformedLabelLine {
            line: line_no,
            reason: format!("occlusion is not an integer: `{}`", fields[2]),
        })?;
    Ok(LabelRecord {
        class: fields[0].to_string(),
        truncation: num(1)?,
        occlusion,
        alpha: num(3)?,
        bbox2d: [num(4)?, num(5)?, num(6)?, num(7)?],
        h: num(8)?,
        w: num(9)?,
        l: num(10)?,
        loc: [num(11)?, num(12)?, num(13)?],
        ry: num(14)?,
        score: if fields.len() == 16 { Some(num(15)?) } else { None },
    })
}

/// Serialize records in file order, two decimals per field (four for scores),
/// one trailing newline per line.
pub fn write_label_file(records: &[LabelRecord]) -> String {
    let mut out = String::new();
    for r in records {
        write!(
            out,
            "{} {:.2} {} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2}",
            r.class,
            r.truncation,
            r.occlusion,
            r.alpha,
            r.bbox2d[0],
            r.bbox2d[1],
            r.bbox2d[2],
            r.bbox2d[3],
            r.h,
            r.w,
            r.l,
            r.loc[0],
            r.loc[1],
            r.loc[2],
            r.ry
        )
        .expect("string write");
        if let Some(score) = r.score {
            write!(out, " {score:.4}").expect("string write");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAR: &str =
        "Car 0.00 0 -1.58 587.01 173.33 614.12 200.12 1.65 1.67 3.64 -0.65 1.71 46.70 -1.59";

    #[test]
    fn parses_ground_truth_line() {
        let recs = parse_label_file(CAR).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.class, "Car");
        assert_eq!(r.occlusion, 0);
        assert_eq!(r.loc, [-0.65, 1.71, 46.70]);
        assert_eq!(r.ry, -1.59);
        assert_eq!(r.h, 1.65);
        assert_eq!(r.score, None);
    }

    #[test]
    fn parses_scored_line() {
        let line = format!("{CAR} 0.9731");
        let r = &parse_label_file(&line).unwrap()[0];
        assert_eq!(r.score, Some(0.9731));
    }

    #[test]
    fn wrong_field_count_names_the_line() {
        let text = format!("{CAR}\nCar 0.00 0 -1.58\n");
        match parse_label_file(&text) {
            Err(Error::MalformedLabelLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected MalformedLabelLine, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_field_is_rejected() {
        let bad = CAR.replace("46.70", "deep");
        assert!(matches!(
            parse_label_file(&bad),
            Err(Error::MalformedLabelLine { line: 1, .. })
        ));
    }

    #[test]
    fn serialization_round_trips_bytes() {
        let text = format!("{CAR}\n");
        let recs = parse_label_file(&text).unwrap();
        assert_eq!(write_label_file(&recs), text);
    }

    #[test]
    fn score_uses_four_decimals() {
        let mut r = parse_label_file(CAR).unwrap().remove(0);
        r.score = Some(0.5);
        assert!(write_label_file(&[r]).trim_end().ends_with(" 0.5000"));
    }

    #[test]
    fn dontcare_round_trips() {
        let text = "DontCare -1.00 -1 -10.00 503.89 169.71 590.61 190.13 -1.00 -1.00 -1.00 -1000.00 -1000.00 -1000.00 -10.00\n";
        let recs = parse_label_file(text).unwrap();
        assert!(recs[0].is_dontcare());
        assert_eq!(write_label_file(&recs), text);
    }

    #[test]
    fn raw_integer_fields_parse() {
        // Upstream ground-truth files write sentinels without decimals.
        let text = "DontCare -1 -1 -10 503.89 169.71 590.61 190.13 -1 -1 -1 -1000 -1000 -1000 -10";
        let r = &parse_label_file(text).unwrap()[0];
        assert_eq!(r.loc, [-1000.0, -1000.0, -1000.0]);
    }

    #[test]
    fn empty_file_is_empty_frame() {
        assert!(parse_label_file("").unwrap().is_empty());
        assert_eq!(write_label_file(&[]), "");
    }
}
