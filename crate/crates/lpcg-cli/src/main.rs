//! `lpcg` — command-line driver for the point-cloud auto-labeling toolkit.
//!
//! Every subcommand reads the same JSON run configuration (`--config`), with
//! flags overriding file values and the file overriding built-in defaults.
//! One master seed (`--seed`) drives all stochastic stages through derived
//! per-stream seeds, and `--jobs` only changes how fast results appear,
//! never what they are. Log verbosity comes from the `LPCG_LOG` environment
//! variable. Exit codes: 0 success, 1 bad or missing data, 2 bad invocation
//! or configuration.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lpcg::eval::{MatchSpace, RecallPoints};
use lpcg::label::DisturbGroup;

use crate::config::FileConfig;
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "lpcg", version, about = "LiDAR point-cloud auto-labeling toolkit")]
struct Cli {
    /// JSON run configuration; flags override file values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed for every stochastic stage.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for frame-parallel commands (output-invariant).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Label scalar groups, as spelled on the command line.
#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupArg {
    Location,
    Dimension,
    Orientation,
}

impl From<GroupArg> for DisturbGroup {
    fn from(arg: GroupArg) -> Self {
        match arg {
            GroupArg::Location => DisturbGroup::Location,
            GroupArg::Dimension => DisturbGroup::Dimension,
            GroupArg::Orientation => DisturbGroup::Orientation,
        }
    }
}

/// Overlap measure, as spelled on the command line.
#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceArg {
    /// Ground-plane footprint overlap.
    Bev,
    /// Volume overlap.
    #[value(name = "3d")]
    ThreeD,
}

impl From<SpaceArg> for MatchSpace {
    fn from(arg: SpaceArg) -> Self {
        match arg {
            SpaceArg::Bev => MatchSpace::Bev,
            SpaceArg::ThreeD => MatchSpace::ThreeD,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pseudo-label every frame of a dataset manifest from LiDAR + 2D detections.
    Lowcost {
        /// Dataset manifest listing frames with cloud/calib/detections paths.
        #[arg(long, value_name = "PATH")]
        manifest: PathBuf,
        /// Directory for the per-frame label files and the aggregate report.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Report path; defaults to `<out>/report.json`.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Merge an annotated split with externally detected boxes on an unlabeled split.
    Merge {
        /// Manifest of the split that already has labels.
        #[arg(long, value_name = "PATH")]
        labeled: PathBuf,
        /// Manifest of the split to be labeled from 3D detections.
        #[arg(long, value_name = "PATH")]
        unlabeled: PathBuf,
        /// Directory of per-frame 3D detection files (`<frame_id>.txt`).
        #[arg(long, value_name = "DIR")]
        detections: PathBuf,
        /// Directory for the filtered labels, merged manifest, and report.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Randomly scale label scalars for robustness studies.
    Disturb {
        /// Directory of label files to disturb.
        #[arg(long, value_name = "DIR")]
        labels: PathBuf,
        /// Directory for the disturbed copies.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Disturbance magnitude; factors land in [1 - p/2, 1 + p/2].
        #[arg(long)]
        p: Option<f64>,
        /// Which scalar groups to disturb (comma separated).
        #[arg(long, value_delimiter = ',')]
        groups: Option<Vec<GroupArg>>,
    },
    /// Score pseudo labels against reference labels frame by frame.
    Eval {
        /// Directory of label files under evaluation.
        #[arg(long, value_name = "DIR")]
        pseudo: PathBuf,
        /// Directory of reference label files with the same frame ids.
        #[arg(long, value_name = "DIR")]
        gt: PathBuf,
        /// Write the full report as JSON here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Minimum overlap for a match.
        #[arg(long)]
        iou: Option<f64>,
        /// Overlap measure.
        #[arg(long)]
        space: Option<SpaceArg>,
        /// Also sweep average precision over the score range.
        #[arg(long)]
        sweep: bool,
        /// Class the sweep scores.
        #[arg(long, default_value = "Car")]
        class: String,
    },
    /// Average precision per difficulty bucket.
    Ap {
        /// Directory of scored detection label files.
        #[arg(long, value_name = "DIR")]
        dets: PathBuf,
        /// Directory of reference label files with the same frame ids.
        #[arg(long, value_name = "DIR")]
        gt: PathBuf,
        /// Class to score.
        #[arg(long, default_value = "Car")]
        class: String,
        /// Minimum overlap for a hit.
        #[arg(long)]
        iou: Option<f64>,
        /// Overlap measure.
        #[arg(long)]
        space: Option<SpaceArg>,
        /// Average over the legacy 11-point recall grid instead of 40.
        #[arg(long)]
        ap11: bool,
        /// Write the rows as JSON here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Write the precision-recall curves as CSV here.
        #[arg(long, value_name = "PATH")]
        curves: Option<PathBuf>,
    },
    /// Generate a seeded synthetic dataset with ground truth.
    Synth {
        /// Dataset root to create.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Number of frames.
        #[arg(long, default_value_t = 1)]
        frames: usize,
    },
    /// Render a frame and label sets as a bird's-eye-view SVG.
    RenderBev {
        /// Point cloud to scatter (needs --calib).
        #[arg(long, value_name = "PATH", requires = "calib")]
        cloud: Option<PathBuf>,
        /// Calibration for the cloud (needs --cloud).
        #[arg(long, value_name = "PATH", requires = "cloud")]
        calib: Option<PathBuf>,
        /// Label file to draw; repeat for more sets, each in its own color.
        #[arg(long, value_name = "PATH")]
        labels: Vec<PathBuf>,
        /// Output SVG path.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult {
    let mut cfg = FileConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }

    match cli.command {
        Command::Lowcost { manifest, out, report } => {
            cfg.validate()?;
            commands::lowcost::run(&manifest, &out, report.as_deref(), &cfg.lowcost, cfg.jobs)
        }
        Command::Merge { labeled, unlabeled, detections, out } => {
            cfg.validate()?;
            commands::merge::run(&labeled, &unlabeled, &detections, &out, &cfg.merge)
        }
        Command::Disturb { labels, out, p, groups } => {
            if let Some(p) = p {
                cfg.disturb.p = p;
            }
            if let Some(groups) = groups {
                cfg.disturb.groups = groups.into_iter().map(Into::into).collect();
            }
            cfg.validate()?;
            commands::disturb::run(
                &labels,
                &out,
                cfg.disturb.p,
                &cfg.disturb.groups,
                cfg.seed,
                cfg.jobs,
            )
        }
        Command::Eval { pseudo, gt, out, iou, space, sweep, class } => {
            if let Some(iou) = iou {
                cfg.matching.iou_min = iou;
            }
            if let Some(space) = space {
                cfg.matching.space = space.into();
            }
            cfg.validate()?;
            commands::eval::run(&pseudo, &gt, out.as_deref(), &cfg.matching, sweep, &class)
        }
        Command::Ap { dets, gt, class, iou, space, ap11, out, curves } => {
            if let Some(iou) = iou {
                cfg.matching.iou_min = iou;
            }
            if let Some(space) = space {
                cfg.matching.space = space.into();
            }
            cfg.validate()?;
            let recall = if ap11 { RecallPoints::R11 } else { RecallPoints::R40 };
            commands::ap::run(
                &dets,
                &gt,
                &class,
                &cfg.matching,
                recall,
                out.as_deref(),
                curves.as_deref(),
            )
        }
        Command::Synth { out, frames } => {
            cfg.validate()?;
            commands::synth::run(&out, frames, &cfg.scene, cfg.seed, cfg.jobs)
        }
        Command::RenderBev { cloud, calib, labels, out } => {
            cfg.validate()?;
            commands::render_bev::run(cloud.as_deref(), calib.as_deref(), &labels, &out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LPCG_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_internally_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn global_flags_parse_after_the_subcommand() {
        let cli = Cli::try_parse_from([
            "lpcg", "synth", "--out", "d", "--frames", "3", "--seed", "9", "--jobs", "2",
        ])
        .unwrap();
        assert_eq!(cli.seed, Some(9));
        assert_eq!(cli.jobs, Some(2));
        assert!(matches!(cli.command, Command::Synth { frames: 3, .. }));
    }

    #[test]
    fn group_list_parses_comma_separated() {
        let cli = Cli::try_parse_from([
            "lpcg", "disturb", "--labels", "a", "--out", "b", "--groups", "location,orientation",
        ])
        .unwrap();
        let Command::Disturb { groups: Some(groups), .. } = cli.command else {
            panic!("expected disturb with groups");
        };
        assert_eq!(groups.len(), 2);
    }

    #[test]
    fn cloud_without_calib_is_rejected() {
        let err = Cli::try_parse_from(["lpcg", "render-bev", "--cloud", "c.bin", "--out", "o.svg"])
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
