//! 2-D detector output: a JSON array of boxes with scores and optional
//! instance-mask polygons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection2D {
    /// Pixel box `[x1, y1, x2, y2]` with `x1 <= x2` and `y1 <= y2`.
    pub bbox: [f64; 4],
    pub score: f64,
    pub class: String,
    /// Optional instance-mask polygon in pixel coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<Vec<[f64; 2]>>,
}

pub fn parse_detections(text: &str) -> Result<Vec<Detection2D>> {
    let dets: Vec<Detection2D> =
        serde_json::from_str(text).map_err(|e| Error::MalformedDetections(e.to_string()))?;
    for (i, det) in dets.iter().enumerate() {
        if !det.score.is_finite() || !(0.0..=1.0).contains(&det.score) {
            return Err(Error::InvalidScore(det.score));
        }
        let [x1, y1, x2, y2] = det.bbox;
        if !(x1.is_finite() && y1.is_finite() && x2.is_finite() && y2.is_finite()) || x1 > x2 || y1 > y2 {
            return Err(Error::MalformedDetections(format!(
                "detection {i}: bbox [{x1}, {y1}, {x2}, {y2}] is not an ordered rectangle"
            )));
        }
        if let Some(mask) = &det.mask {
            if mask.len() < 3 {
                return Err(Error::MalformedDetections(format!(
                    "detection {i}: mask polygon has {} vertices, need at least 3",
                    mask.len()
                )));
            }
        }
    }
    Ok(dets)
}

pub fn write_detections(dets: &[Detection2D]) -> String {
    let mut text = serde_json::to_string_pretty(dets).expect("detections serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_mask() {
        let text = r#"[
            {"bbox": [100.0, 120.0, 220.0, 190.0], "score": 0.93, "class": "Car",
             "mask": [[100.0, 120.0], [220.0, 120.0], [220.0, 190.0]]},
            {"bbox": [10.0, 20.0, 30.0, 40.0], "score": 0.5, "class": "Pedestrian"}
        ]"#;
        let dets = parse_detections(text).unwrap();
        assert_eq!(dets.len(), 2);
        assert_eq!(dets[0].mask.as_ref().unwrap().len(), 3);
        assert!(dets[1].mask.is_none());
    }

    #[test]
    fn score_outside_unit_interval_rejected() {
        let text = r#"[{"bbox": [0.0, 0.0, 1.0, 1.0], "score": 1.5, "class": "Car"}]"#;
        match parse_detections(text) {
            Err(Error::InvalidScore(s)) => assert_eq!(s, 1.5),
            other => panic!("expected InvalidScore, got {other:?}"),
        }
    }

    #[test]
    fn unordered_bbox_rejected() {
        let text = r#"[{"bbox": [30.0, 0.0, 10.0, 1.0], "score": 0.9, "class": "Car"}]"#;
        assert!(matches!(parse_detections(text), Err(Error::MalformedDetections(_))));
    }

    #[test]
    fn degenerate_mask_rejected() {
        let text = r#"[{"bbox": [0.0, 0.0, 1.0, 1.0], "score": 0.9, "class": "Car",
                        "mask": [[0.0, 0.0], [1.0, 1.0]]}]"#;
        assert!(matches!(parse_detections(text), Err(Error::MalformedDetections(_))));
    }

    #[test]
    fn invalid_json_rejected() {
        assert!(matches!(parse_detections("not json"), Err(Error::MalformedDetections(_))));
    }

    #[test]
    fn round_trip_preserves_records() {
        let dets = vec![
            Detection2D {
                bbox: [1.0, 2.0, 3.0, 4.0],
                score: 0.25,
                class: "Car".into(),
                mask: Some(vec![[1.0, 2.0], [3.0, 2.0], [3.0, 4.0], [1.0, 4.0]]),
            },
            Detection2D { bbox: [5.0, 6.0, 7.0, 8.0], score: 1.0, class: "Cyclist".into(), mask: None },
        ];
        let text = write_detections(&dets);
        assert_eq!(parse_detections(&text).unwrap(), dets);
    }
}
