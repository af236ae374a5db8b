//! Controlled multiplicative disturbance of label files: each selected scalar
//! is scaled by `1 + u` with `u` uniform in `[-p/2, p/2]`, drawn from a
//! stream keyed by (seed, record position, group, component) so every scalar
//! has its own reproducible randomness.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kitti_io::LabelRecord;
use crate::seed::stream_rng;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum DisturbGroup {
    /// x, y, z.
    Location,
    /// h, w, l.
    Dimension,
    /// ry.
    Orientation,
}

impl DisturbGroup {
    fn id(self) -> u64 {
        match self {
            DisturbGroup::Location => 0,
            DisturbGroup::Dimension => 1,
            DisturbGroup::Orientation => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisturbConfig {
    /// Disturbance magnitude as a fraction: scale factors land in
    /// `[1 - p/2, 1 + p/2]`.
    pub p: f64,
    pub groups: BTreeSet<DisturbGroup>,
    pub seed: u64,
}

impl DisturbConfig {
    pub fn new(p: f64, groups: impl IntoIterator<Item = DisturbGroup>, seed: u64) -> Self {
        DisturbConfig { p, groups: groups.into_iter().collect(), seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() || self.p < 0.0 {
            return Err(Error::InvalidConfig(format!("p must be >= 0, got {}", self.p)));
        }
        if self.groups.is_empty() {
            return Err(Error::InvalidConfig("disturbance groups must not be empty".into()));
        }
        Ok(())
    }
}

/// One disturbed scalar: `v * (1 + u)` with `u` the first draw of the stream
/// for this (record, group, component) slot.
fn disturb_scalar(v: f64, seed: u64, record: u64, group: DisturbGroup, component: u64, p: f64) -> f64 {
    let mut rng = stream_rng(seed, &[record, group.id(), component]);
    let u = (rng.random::<f64>() - 0.5) * p;
    v * (1.0 + u)
}

/// Applies the configured disturbance to every record. Groups not selected
/// pass through untouched, and `p = 0` reproduces the input exactly (the
/// scale factor is exactly 1.0).
pub fn disturb_labels(records: &[LabelRecord], cfg: &DisturbConfig) -> Vec<LabelRecord> {
    records
        .iter()
        .enumerate()
        .map(|(idx, rec)| {
            let mut out = rec.clone();
            let i = idx as u64;
            for &group in &cfg.groups {
                match group {
                    DisturbGroup::Location => {
                        for (c, v) in out.loc.iter_mut().enumerate() {
                            *v = disturb_scalar(*v, cfg.seed, i, group, c as u64, cfg.p);
                        }
                    }
                    DisturbGroup::Dimension => {
                        out.h = disturb_scalar(out.h, cfg.seed, i, group, 0, cfg.p);
                        out.w = disturb_scalar(out.w, cfg.seed, i, group, 1, cfg.p);
                        out.l = disturb_scalar(out.l, cfg.seed, i, group, 2, cfg.p);
                    }
                    DisturbGroup::Orientation => {
                        out.ry = disturb_scalar(out.ry, cfg.seed, i, group, 0, cfg.p);
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use DisturbGroup::{Dimension, Location, Orientation};

    fn sample_records() -> Vec<LabelRecord> {
        (0..6)
            .map(|i| LabelRecord {
                class: "Car".into(),
                truncation: 0.0,
                occlusion: 0,
                alpha: -1.2,
                bbox2d: [300.0, 150.0, 400.0, 220.0],
                h: 1.5,
                w: 1.6,
                l: 3.9,
                loc: [1.0 + i as f64, 1.7, 10.0 + 5.0 * i as f64],
                ry: -1.52 + 0.1 * i as f64,
                score: None,
            })
            .collect()
    }

    #[test]
    fn formula_scales_by_one_plus_offset() {
        // v' = v * (1 + u): a location value of 10.0 under u = +0.025 becomes
        // 10.25 exactly.
        let (v, u) = (10.0, 0.025);
        assert_eq!(v * (1.0 + u), 10.25);
    }

    #[test]
    fn zero_magnitude_is_the_identity() {
        let records = sample_records();
        let cfg = DisturbConfig::new(0.0, [Location, Dimension, Orientation], 7);
        let out = disturb_labels(&records, &cfg);
        assert_eq!(out, records);
    }

    #[test]
    fn same_seed_reproduces_different_seed_differs() {
        let records = sample_records();
        let cfg = DisturbConfig::new(0.2, [Location], 42);
        let a = disturb_labels(&records, &cfg);
        let b = disturb_labels(&records, &cfg);
        assert_eq!(a, b);

        let other = DisturbConfig::new(0.2, [Location], 43);
        assert_ne!(disturb_labels(&records, &other), a);
    }

    #[test]
    fn unselected_groups_pass_through() {
        let records = sample_records();
        let cfg = DisturbConfig::new(0.4, [Dimension], 1);
        let out = disturb_labels(&records, &cfg);
        for (orig, new) in records.iter().zip(&out) {
            assert_eq!(new.loc, orig.loc);
            assert_eq!(new.ry, orig.ry);
            assert_eq!(new.bbox2d, orig.bbox2d);
            assert_eq!(new.alpha, orig.alpha);
            assert_ne!((new.h, new.w, new.l), (orig.h, orig.w, orig.l));
        }
    }

    #[test]
    fn disjoint_groups_compose() {
        let records = sample_records();
        let both = disturb_labels(&records, &DisturbConfig::new(0.3, [Location, Dimension], 9));
        let staged = disturb_labels(
            &disturb_labels(&records, &DisturbConfig::new(0.3, [Location], 9)),
            &DisturbConfig::new(0.3, [Dimension], 9),
        );
        assert_eq!(both, staged);
    }

    #[test]
    fn factors_stay_inside_the_band_with_unit_mean() {
        let p = 0.4;
        let mut sum = 0.0;
        let n = 20_000;
        for i in 0..n {
            let f = disturb_scalar(1.0, 5, i, DisturbGroup::Location, 0, p);
            assert!((1.0 - p / 2.0..=1.0 + p / 2.0).contains(&f), "factor {f} escapes band");
            sum += f;
        }
        assert_abs_diff_eq!(sum / n as f64, 1.0, epsilon = 0.005);
    }

    #[test]
    fn records_are_disturbed_independently() {
        let records = sample_records();
        let cfg = DisturbConfig::new(0.4, [Orientation], 3);
        let out = disturb_labels(&records, &cfg);
        let factors: Vec<f64> =
            out.iter().zip(&records).map(|(n, o)| n.ry / o.ry).collect();
        let first = factors[0];
        assert!(factors.iter().any(|f| (f - first).abs() > 1e-6));
    }

    #[test]
    fn config_validation() {
        assert!(DisturbConfig::new(0.1, [Location], 0).validate().is_ok());
        assert!(DisturbConfig::new(-0.1, [Location], 0).validate().is_err());
        assert!(DisturbConfig::new(f64::NAN, [Location], 0).validate().is_err());
        assert!(DisturbConfig { p: 0.1, groups: BTreeSet::new(), seed: 0 }.validate().is_err());
    }

    #[test]
    fn group_names_serialize_lowercase() {
        let cfg = DisturbConfig::new(0.05, [Location, Orientation], 11);
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(json.contains("\"location\"") && json.contains("\"orientation\""));
        let back: DisturbConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
