//! `disturb`: rewrite a directory of label files with every selected scalar
//! scaled by its own seeded random factor.
//!
//! Each file's stream is keyed by the hash of its frame id, not by its
//! position in the directory walk, so adding or removing frames never
//! changes what the remaining ones get.

use std::collections::BTreeSet;
use std::path::Path;

use lpcg::error::write_bytes;
use lpcg::kitti_io::{read_label_file, write_label_file};
use lpcg::label::{disturb_labels, DisturbConfig, DisturbGroup};
use lpcg::seed::{label_hash, stream_seed};
use rayon::prelude::*;

use crate::commands::worker_pool;
use crate::error::CliResult;

/// Stream id reserved for the disturbance stage under the master seed.
const STREAM_DISTURB: u64 = 0xd157;

fn disturb_one(
    stem: &str,
    path: &Path,
    out_dir: &Path,
    p: f64,
    groups: &BTreeSet<DisturbGroup>,
    master_seed: u64,
) -> lpcg::Result<usize> {
    let records = read_label_file(path)?;
    let file_seed = stream_seed(master_seed, &[STREAM_DISTURB, label_hash(stem)]);
    let cfg = DisturbConfig::new(p, groups.iter().copied(), file_seed);
    cfg.validate()?;
    let disturbed = disturb_labels(&records, &cfg);
    write_bytes(&out_dir.join(format!("{stem}.txt")), write_label_file(&disturbed).as_bytes())?;
    Ok(disturbed.len())
}

pub fn run(
    labels_dir: &Path,
    out_dir: &Path,
    p: f64,
    groups: &BTreeSet<DisturbGroup>,
    master_seed: u64,
    jobs: usize,
) -> CliResult {
    // Validated against a placeholder seed first so a bad magnitude or an
    // empty group set fails before any output exists.
    DisturbConfig::new(p, groups.iter().copied(), 0).validate()?;
    let pool = worker_pool(jobs)?;
    let stems = crate::commands::label_stems(labels_dir)?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| lpcg::Error::Io { path: out_dir.to_path_buf(), source: e })?;
    let counts: Result<Vec<usize>, lpcg::Error> = pool.install(|| {
        stems
            .par_iter()
            .map(|(stem, path)| disturb_one(stem, path, out_dir, p, groups, master_seed))
            .collect()
    });
    let counts = counts?;

    log::info!("disturbed {} files at p = {p}", counts.len());
    let group_names: Vec<String> = groups
        .iter()
        .map(|g| format!("{g:?}").to_lowercase())
        .collect();
    println!(
        "disturb: {} files, {} records, p = {p}, groups = {}",
        counts.len(),
        counts.iter().sum::<usize>(),
        group_names.join(",")
    );
    Ok(())
}
