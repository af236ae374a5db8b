//! `synth`: generate a seeded synthetic dataset in the on-disk layout the
//! other commands consume — point clouds, calibrations, ground-truth labels,
//! 2D detections, and a manifest tying them together.

use std::path::Path;

use lpcg::error::write_bytes;
use lpcg::kitti_io::{DatasetManifest, FrameEntry};
use lpcg::seed::stream_seed;
use lpcg::synth::{dump_scene, generate_scene, SceneSpec};
use rayon::prelude::*;

use crate::commands::worker_pool;
use crate::error::CliResult;

/// Stream id reserved for scene generation under the master seed.
const STREAM_SCENE: u64 = 0x5ce4e;

fn dump_one(spec: &SceneSpec, master_seed: u64, index: u64, root: &Path) -> lpcg::Result<FrameEntry> {
    let frame_spec =
        SceneSpec { seed: stream_seed(master_seed, &[STREAM_SCENE, index]), ..spec.clone() };
    let scene = generate_scene(&frame_spec)?;
    dump_scene(&scene, root, &format!("{index:06}"))
}

pub fn run(out_dir: &Path, n_frames: usize, spec: &SceneSpec, master_seed: u64, jobs: usize) -> CliResult {
    spec.validate()?;
    let pool = worker_pool(jobs)?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| lpcg::Error::Io { path: out_dir.to_path_buf(), source: e })?;
    let frames: Result<Vec<FrameEntry>, lpcg::Error> = pool.install(|| {
        (0..n_frames as u64)
            .into_par_iter()
            .map(|index| dump_one(spec, master_seed, index, out_dir))
            .collect()
    });
    let frames = frames?;

    let manifest = DatasetManifest {
        sequence_id: Some(format!("synth-{master_seed}")),
        frames,
        base_dir: out_dir.to_path_buf(),
    };
    write_bytes(&out_dir.join("manifest.json"), manifest.to_json().as_bytes())?;

    log::info!("generated {n_frames} frames under {}", out_dir.display());
    println!(
        "synth: {n_frames} frames, {} objects each, seed {master_seed} -> {}",
        spec.n_objects,
        out_dir.display()
    );
    Ok(())
}
