//! KITTI-style difficulty buckets from occlusion, truncation, and projected
//! box height.

use serde::{Deserialize, Serialize};

use crate::kitti_io::LabelRecord;

/// Ordered easiest-first; a record is *valid at* difficulty `d` when its own
/// bucket is `<= d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Moderate,
    Hard,
    /// Too small, too occluded, or too truncated for any bucket.
    Ignored,
}

impl std::fmt::Display for Difficulty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Difficulty::Easy => "easy",
            Difficulty::Moderate => "moderate",
            Difficulty::Hard => "hard",
            Difficulty::Ignored => "ignored",
        };
        f.write_str(name)
    }
}

/// The easiest bucket whose limits the record satisfies.
pub fn assign_difficulty(rec: &LabelRecord) -> Difficulty {
    let height = rec.bbox2d[3] - rec.bbox2d[1];
    if height >= 40.0 && rec.occlusion == 0 && rec.truncation <= 0.15 {
        Difficulty::Easy
    } else if height >= 25.0 && rec.occlusion <= 1 && rec.truncation <= 0.30 {
        Difficulty::Moderate
    } else if height >= 25.0 && rec.occlusion <= 2 && rec.truncation <= 0.50 {
        Difficulty::Hard
    } else {
        Difficulty::Ignored
    }
}
