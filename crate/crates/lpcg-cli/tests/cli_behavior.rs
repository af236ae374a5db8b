//! End-to-end behavior of the `lpcg` binary: exit codes, file layout,
//! determinism, and the flag/config/default precedence chain.

use std::path::{Path, PathBuf};
use std::process::Command;

use lpcg::kitti_io::{parse_label_file, write_label_file};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

/// Runs the binary with a clean log environment and returns its outcome.
fn lpcg<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_lpcg"))
        .args(args)
        .env_remove("LPCG_LOG")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf8 path")
}

/// Generates a small synthetic dataset and returns its root.
fn synth_dataset(dir: &Path, frames: usize, seed: u64) -> PathBuf {
    let root = dir.join(format!("data_{seed}"));
    let run = lpcg([
        "synth",
        "--out",
        path_str(&root),
        "--frames",
        &frames.to_string(),
        "--seed",
        &seed.to_string(),
    ]);
    assert_eq!(run.code, 0, "synth failed: {}", run.stderr);
    root
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("read json")).expect("parse json")
}

#[test]
fn synth_writes_the_full_layout_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 2, 41);

    for sub in ["velodyne", "calib", "label_2", "detections"] {
        assert!(root.join(sub).is_dir(), "missing {sub}/");
    }
    let manifest = read_json(&root.join("manifest.json"));
    let frames = manifest["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 2);
    assert_eq!(frames[0]["frame_id"], "000000");
    assert_eq!(frames[0]["has_annotation"], true);
    assert!(root.join("velodyne/000001.bin").is_file());
    assert!(root.join("label_2/000001.txt").is_file());
}

#[test]
fn lowcost_labels_every_frame_and_reports_consistent_totals() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 3, 7);
    let out = dir.path().join("pseudo");

    let run = lpcg([
        "lowcost",
        "--manifest",
        path_str(&root.join("manifest.json")),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(run.code, 0, "lowcost failed: {}", run.stderr);
    assert!(run.stdout.contains("lowcost: 3 frames"));

    let report = read_json(&out.join("report.json"));
    assert_eq!(report["n_frames"], 3);
    let frames = report["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 3);
    let sum =
        |key: &str| frames.iter().map(|f| f[key].as_u64().unwrap()).sum::<u64>();
    assert_eq!(report["totals"]["n_detections"].as_u64().unwrap(), sum("n_detections"));
    assert_eq!(report["totals"]["n_emitted"].as_u64().unwrap(), sum("n_emitted"));
    for i in 0..3 {
        let label = out.join(format!("00000{i}.txt"));
        assert!(label.is_file(), "missing label for frame {i}");
    }
    // Default spec scenes recover their objects, so labels are not empty.
    assert!(report["totals"]["n_emitted"].as_u64().unwrap() > 0);
}

#[test]
fn empty_manifest_yields_an_empty_report_and_success() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, "{\n  \"frames\": []\n}\n").unwrap();
    let out = dir.path().join("pseudo");

    let run = lpcg(["lowcost", "--manifest", path_str(&manifest), "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["n_frames"], 0);
    assert_eq!(report["totals"]["n_emitted"], 0);
}

#[test]
fn missing_calib_file_is_a_domain_error_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 1, 13);
    std::fs::remove_file(root.join("calib/000000.txt")).unwrap();

    let run = lpcg([
        "lowcost",
        "--manifest",
        path_str(&root.join("manifest.json")),
        "--out",
        path_str(&dir.path().join("pseudo")),
    ]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("missing file"), "stderr: {}", run.stderr);
    assert!(run.stderr.contains("calib/000000.txt"), "stderr: {}", run.stderr);
}

#[test]
fn unknown_flag_and_bad_config_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();

    let run = lpcg(["lowcost", "--no-such-flag"]);
    assert_eq!(run.code, 2);

    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"lowcsot": {}}"#).unwrap();
    let run = lpcg([
        "synth",
        "--out",
        path_str(&dir.path().join("d")),
        "--config",
        path_str(&config),
    ]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("lowcsot"), "stderr: {}", run.stderr);

    let run = lpcg([
        "synth",
        "--out",
        path_str(&dir.path().join("d")),
        "--config",
        path_str(&dir.path().join("absent.json")),
    ]);
    assert_eq!(run.code, 2);
}

#[test]
fn invalid_config_fails_before_any_output_exists() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 1, 19);
    let out = dir.path().join("disturbed");

    let run = lpcg([
        "disturb",
        "--labels",
        path_str(&root.join("label_2")),
        "--out",
        path_str(&out),
        "--p",
        "-1",
    ]);
    assert_eq!(run.code, 2, "stderr: {}", run.stderr);
    assert!(!out.exists(), "output directory created despite config error");

    let run = lpcg([
        "lowcost",
        "--manifest",
        path_str(&root.join("manifest.json")),
        "--out",
        path_str(&out),
        "--jobs",
        "0",
    ]);
    assert_eq!(run.code, 2);
    assert!(!out.exists());
}

#[test]
fn disturb_at_zero_magnitude_copies_bytes_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 2, 23);
    let out = dir.path().join("disturbed");

    let run = lpcg([
        "disturb",
        "--labels",
        path_str(&root.join("label_2")),
        "--out",
        path_str(&out),
        "--p",
        "0",
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    for i in 0..2 {
        let name = format!("00000{i}.txt");
        let before = std::fs::read(root.join("label_2").join(&name)).unwrap();
        let after = std::fs::read(out.join(&name)).unwrap();
        assert_eq!(before, after, "frame {i} changed under p = 0");
    }
}

#[test]
fn disturb_is_seed_deterministic_and_per_frame_stable() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 3, 29);
    let labels = root.join("label_2");

    let args = |out: &Path| {
        vec![
            "disturb".to_string(),
            "--labels".into(),
            path_str(&labels).into(),
            "--out".into(),
            path_str(out).into(),
            "--p".into(),
            "0.3".into(),
            "--seed".into(),
            "5".into(),
        ]
    };
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    assert_eq!(lpcg(args(&out_a)).code, 0);
    assert_eq!(lpcg(args(&out_b)).code, 0);
    for i in 0..3 {
        let name = format!("00000{i}.txt");
        assert_eq!(
            std::fs::read(out_a.join(&name)).unwrap(),
            std::fs::read(out_b.join(&name)).unwrap(),
            "same seed produced different bytes for frame {i}"
        );
        assert_ne!(
            std::fs::read(labels.join(&name)).unwrap(),
            std::fs::read(out_a.join(&name)).unwrap(),
            "p = 0.3 left frame {i} untouched"
        );
    }

    // Dropping a frame from the input must not change what the others get:
    // streams are keyed by frame id, not directory position.
    let subset = dir.path().join("subset");
    std::fs::create_dir(&subset).unwrap();
    for i in 1..3 {
        let name = format!("00000{i}.txt");
        std::fs::copy(labels.join(&name), subset.join(&name)).unwrap();
    }
    let out_c = dir.path().join("c");
    let mut subset_args = args(&out_c);
    subset_args[2] = path_str(&subset).into();
    assert_eq!(lpcg(subset_args).code, 0);
    for i in 1..3 {
        let name = format!("00000{i}.txt");
        assert_eq!(
            std::fs::read(out_a.join(&name)).unwrap(),
            std::fs::read(out_c.join(&name)).unwrap(),
            "frame {i} depends on which other frames were present"
        );
    }
}

#[test]
fn config_file_supplies_disturbance_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 1, 31);
    let labels = root.join("label_2");
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"disturb": {"p": 0.5}}"#).unwrap();

    // Config alone: p = 0.5 changes the file.
    let out_cfg = dir.path().join("from_config");
    let run = lpcg([
        "disturb",
        "--labels",
        path_str(&labels),
        "--out",
        path_str(&out_cfg),
        "--config",
        path_str(&config),
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert_ne!(
        std::fs::read(labels.join("000000.txt")).unwrap(),
        std::fs::read(out_cfg.join("000000.txt")).unwrap()
    );

    // Flag wins over config: p = 0 restores byte identity.
    let out_flag = dir.path().join("from_flag");
    let run = lpcg([
        "disturb",
        "--labels",
        path_str(&labels),
        "--out",
        path_str(&out_flag),
        "--config",
        path_str(&config),
        "--p",
        "0",
    ]);
    assert_eq!(run.code, 0);
    assert_eq!(
        std::fs::read(labels.join("000000.txt")).unwrap(),
        std::fs::read(out_flag.join("000000.txt")).unwrap()
    );
}

#[test]
fn eval_of_a_directory_against_itself_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 2, 37);
    let labels = root.join("label_2");
    let out = dir.path().join("eval.json");

    let run = lpcg([
        "eval",
        "--pseudo",
        path_str(&labels),
        "--gt",
        path_str(&labels),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);

    let report = read_json(&out);
    let n_gt: usize = (0..2)
        .map(|i| {
            let text =
                std::fs::read_to_string(labels.join(format!("00000{i}.txt"))).unwrap();
            parse_label_file(&text).unwrap().len()
        })
        .sum();
    assert_eq!(report["tp"].as_u64().unwrap() as usize, n_gt);
    assert_eq!(report["fp"], 0);
    assert_eq!(report["fn"], 0);
    let mre = &report["mre"];
    for key in ["loc_mre", "dim_mre"] {
        for v in mre[key].as_array().unwrap() {
            assert_eq!(v.as_f64().unwrap(), 0.0);
        }
    }
    assert_eq!(mre["orient_mre"].as_f64().unwrap(), 0.0);
    assert!(run.stdout.contains("fp 0"));
}

#[test]
fn eval_reports_mismatched_frame_sets_by_id() {
    let dir = tempfile::tempdir().unwrap();
    let left = dir.path().join("left");
    let right = dir.path().join("right");
    std::fs::create_dir_all(&left).unwrap();
    std::fs::create_dir_all(&right).unwrap();
    std::fs::write(left.join("000000.txt"), "").unwrap();
    std::fs::write(right.join("000001.txt"), "").unwrap();

    let run =
        lpcg(["eval", "--pseudo", path_str(&left), "--gt", path_str(&right)]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("frame sets differ"), "stderr: {}", run.stderr);
    assert!(run.stderr.contains("000000") && run.stderr.contains("000001"));
}

#[test]
fn eval_with_no_matches_reports_null_mre() {
    let dir = tempfile::tempdir().unwrap();
    let left = dir.path().join("left");
    let right = dir.path().join("right");
    std::fs::create_dir_all(&left).unwrap();
    std::fs::create_dir_all(&right).unwrap();
    std::fs::write(left.join("000000.txt"), "").unwrap();
    std::fs::write(right.join("000000.txt"), "").unwrap();
    let out = dir.path().join("eval.json");

    let run = lpcg([
        "eval",
        "--pseudo",
        path_str(&left),
        "--gt",
        path_str(&right),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert!(read_json(&out)["mre"].is_null());
    assert!(run.stdout.contains("no matched pairs"));
}

#[test]
fn ap_scores_a_perfect_scored_replay_at_one_hundred() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 2, 43);
    let labels = root.join("label_2");

    // Ground truth carries no scores, so replay it with full confidence.
    let scored = dir.path().join("scored");
    std::fs::create_dir(&scored).unwrap();
    for i in 0..2 {
        let name = format!("00000{i}.txt");
        let text = std::fs::read_to_string(labels.join(&name)).unwrap();
        let mut records = parse_label_file(&text).unwrap();
        for rec in &mut records {
            rec.score = Some(1.0);
        }
        std::fs::write(scored.join(&name), write_label_file(&records)).unwrap();
    }

    let rows_path = dir.path().join("rows.json");
    let curves_path = dir.path().join("curves.csv");
    let run = lpcg([
        "ap",
        "--dets",
        path_str(&scored),
        "--gt",
        path_str(&labels),
        "--out",
        path_str(&rows_path),
        "--curves",
        path_str(&curves_path),
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert!(run.stdout.contains("ap40: Car"));

    let rows = read_json(&rows_path);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        if row["n_gt"].as_u64().unwrap() > 0 {
            assert_eq!(row["ap"].as_f64().unwrap(), 100.0, "row: {row}");
        }
    }
    let curves = std::fs::read_to_string(&curves_path).unwrap();
    assert_eq!(curves.lines().count(), 1 + 3 * 40);
    assert!(curves.starts_with("class,difficulty,recall,precision\n"));
}

#[test]
fn merge_filters_detections_and_writes_the_combined_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let labeled_root = synth_dataset(dir.path(), 1, 47);
    let unlabeled_root = synth_dataset(dir.path(), 2, 53);

    // Strip the labels off the second dataset's manifest and move its frame
    // ids out of the labeled split's range, as distinct splits would be.
    let mut manifest = read_json(&unlabeled_root.join("manifest.json"));
    for (i, frame) in manifest["frames"].as_array_mut().unwrap().iter_mut().enumerate() {
        frame["frame_id"] = format!("10000{i}").into();
        frame["has_annotation"] = false.into();
        frame.as_object_mut().unwrap().remove("label");
    }
    let unlabeled_manifest = unlabeled_root.join("unlabeled.json");
    std::fs::write(&unlabeled_manifest, serde_json::to_string_pretty(&manifest).unwrap())
        .unwrap();

    // 3D detections: the ground truth with one strong, one weak, and the
    // rest unscored per frame.
    let dets = dir.path().join("dets3d");
    std::fs::create_dir(&dets).unwrap();
    let mut expected_kept = 0usize;
    for i in 0..2 {
        let text = std::fs::read_to_string(
            unlabeled_root.join("label_2").join(format!("00000{i}.txt")),
        )
        .unwrap();
        let mut records = parse_label_file(&text).unwrap();
        for (j, rec) in records.iter_mut().enumerate() {
            rec.score = match j {
                0 => Some(0.95),
                1 => Some(0.2),
                _ => None,
            };
        }
        expected_kept += records.iter().filter(|r| r.score >= Some(0.7)).count();
        std::fs::write(dets.join(format!("10000{i}.txt")), write_label_file(&records))
            .unwrap();
    }

    let out = dir.path().join("merged");
    let run = lpcg([
        "merge",
        "--labeled",
        path_str(&labeled_root.join("manifest.json")),
        "--unlabeled",
        path_str(&unlabeled_manifest),
        "--detections",
        path_str(&dets),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);

    let merged = read_json(&out.join("manifest.json"));
    let frames = merged["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 3);
    assert!(frames.iter().all(|f| f["has_annotation"] == true));

    let report = read_json(&out.join("merge_report.json"));
    assert_eq!(report["n_boxes_kept"].as_u64().unwrap() as usize, expected_kept);
    assert_eq!(report["n_dropped_low_score"], 2);

    // The filtered label files hold exactly the strong detections.
    for i in 0..2 {
        let text =
            std::fs::read_to_string(out.join(format!("10000{i}.txt"))).unwrap();
        let kept = parse_label_file(&text).unwrap();
        assert!(kept.iter().all(|r| r.score >= Some(0.7)));
    }
}

#[test]
fn render_bev_is_deterministic_and_draws_every_box() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 1, 59);
    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");

    let render = |out: &Path| {
        lpcg([
            "render-bev",
            "--cloud",
            path_str(&root.join("velodyne/000000.bin")),
            "--calib",
            path_str(&root.join("calib/000000.txt")),
            "--labels",
            path_str(&root.join("label_2/000000.txt")),
            "--out",
            path_str(out),
        ])
    };
    assert_eq!(render(&svg_a).code, 0);
    assert_eq!(render(&svg_b).code, 0);
    assert_eq!(std::fs::read(&svg_a).unwrap(), std::fs::read(&svg_b).unwrap());

    let svg = std::fs::read_to_string(&svg_a).unwrap();
    let text = std::fs::read_to_string(root.join("label_2/000000.txt")).unwrap();
    let n_boxes = parse_label_file(&text).unwrap().len();
    assert_eq!(svg.matches("<polygon").count(), n_boxes);
    assert!(svg.matches("<circle").count() > n_boxes, "no point scatter rendered");
}

#[test]
fn render_bev_without_inputs_emits_an_empty_canvas() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("empty.svg");
    let run = lpcg(["render-bev", "--out", path_str(&svg_path)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("<polygon"));
}

#[test]
fn log_level_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let root = synth_dataset(dir.path(), 1, 61);

    let out = Command::new(env!("CARGO_BIN_EXE_lpcg"))
        .args([
            "lowcost",
            "--manifest",
            path_str(&root.join("manifest.json")),
            "--out",
            path_str(&dir.path().join("pseudo")),
        ])
        .env("LPCG_LOG", "info")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("INFO"), "stderr: {stderr}");
}
