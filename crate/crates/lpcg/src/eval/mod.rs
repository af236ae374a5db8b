//! Label-quality evaluation: per-frame matching with relative-error
//! summaries, KITTI-style difficulty buckets, and average precision over
//! interpolated recall points.

pub mod ap;
pub mod difficulty;
pub mod matching;

pub use ap::{ap_rows, ApRow, EvalFrame, RecallPoints};
pub use difficulty::{assign_difficulty, Difficulty};
pub use matching::{
    match_labels, mean_relative_error, MatchOptions, MatchReport, MatchSpace, MatchedPair,
    MreReport,
};

use crate::error::{Error, Result};

/// Verifies two frame-id sets coincide, reporting the two one-sided
/// differences (sorted) otherwise.
pub fn check_frame_sets(left: &[String], right: &[String]) -> Result<()> {
    let l: std::collections::BTreeSet<&String> = left.iter().collect();
    let r: std::collections::BTreeSet<&String> = right.iter().collect();
    let only_left: Vec<String> = l.difference(&r).map(|s| s.to_string()).collect();
    let only_right: Vec<String> = r.difference(&l).map(|s| s.to_string()).collect();
    if only_left.is_empty() && only_right.is_empty() {
        Ok(())
    } else {
        Err(Error::FrameSetMismatch { only_left, only_right })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_sets_pass_regardless_of_order() {
        let a = ["b".to_string(), "a".to_string()];
        let b = ["a".to_string(), "b".to_string()];
        assert!(check_frame_sets(&a, &b).is_ok());
    }

    #[test]
    fn differences_are_reported_per_side() {
        let a = ["a".to_string(), "shared".to_string()];
        let b = ["shared".to_string(), "z".to_string()];
        match check_frame_sets(&a, &b) {
            Err(Error::FrameSetMismatch { only_left, only_right }) => {
                assert_eq!(only_left, vec!["a"]);
                assert_eq!(only_right, vec!["z"]);
            }
            other => panic!("expected FrameSetMismatch, got {other:?}"),
        }
    }
}
