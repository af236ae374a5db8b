//! One module per subcommand, plus the directory and thread-pool helpers
//! they share.

pub mod ap;
pub mod disturb;
pub mod eval;
pub mod lowcost;
pub mod merge;
pub mod render_bev;
pub mod synth;

use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// All `.txt` files directly under `dir` as `(stem, path)` pairs, sorted by
/// stem so every caller walks frames in the same order regardless of how the
/// filesystem enumerates them.
pub fn label_stems(dir: &Path) -> CliResult<Vec<(String, PathBuf)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| {
        CliError::Domain(lpcg::Error::Io { path: dir.to_path_buf(), source: e })
    })?;
    let mut stems = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| {
            CliError::Domain(lpcg::Error::Io { path: dir.to_path_buf(), source: e })
        })?;
        let path = entry.path();
        if path.extension().is_some_and(|e| e == "txt") && path.is_file() {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                stems.push((stem.to_string(), path));
            }
        }
    }
    stems.sort();
    Ok(stems)
}

/// A rayon pool of exactly `jobs` workers, so parallelism follows the config
/// instead of the global default.
pub fn worker_pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build a {jobs}-worker pool: {e}")))
}

/// Pretty JSON with a trailing newline, the shape every report file uses.
pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialize");
    text.push('\n');
    text
}
