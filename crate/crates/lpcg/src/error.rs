//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong across parsing, geometry, pipelines, and
/// evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A required calibration key is absent from the file.
    #[error("calibration key `{0}` is missing")]
    MissingCalibKey(String),

    /// Calibration present but unusable (wrong arity, bad numbers, bad rotation).
    #[error("malformed calibration: {0}")]
    MalformedCalib(String),

    /// A label line with the wrong shape; `line` is 1-based.
    #[error("label line {line}: {reason}")]
    MalformedLabelLine { line: usize, reason: String },

    /// Point cloud buffer is not a whole number of 16-byte records.
    #[error("point cloud buffer of {0} bytes is not a multiple of 16")]
    MalformedCloud(usize),

    /// Detection JSON that does not match the expected schema.
    #[error("malformed detections: {0}")]
    MalformedDetections(String),

    /// A detection score outside [0, 1].
    #[error("detection score {0} is outside [0, 1]")]
    InvalidScore(f64),

    /// Two manifest frames share an id.
    #[error("manifest: duplicate frame id `{0}`")]
    DuplicateFrameId(String),

    /// A frame marked annotated has no label path.
    #[error("manifest: frame `{0}` is marked annotated but has no label path")]
    MissingLabelPath(String),

    /// Geometry operation on an empty point set.
    #[error("empty input")]
    EmptyInput,

    /// High-accuracy assembly found no detection file for an unlabeled frame.
    #[error("no 3d detections for frame `{0}`")]
    MissingDetections(String),

    /// Averaging over zero matches.
    #[error("no matches to average")]
    EmptyMatchSet,

    /// Scene generation could not place an object.
    #[error("object placement failed after {0} attempts")]
    PlacementFailed(usize),

    /// Two label directories cover different frame sets.
    #[error("frame sets differ: only left {only_left:?}, only right {only_right:?}")]
    FrameSetMismatch {
        only_left: Vec<String>,
        only_right: Vec<String>,
    },

    /// A referenced file does not exist.
    #[error("missing file: {0}")]
    MissingFile(PathBuf),

    /// A configuration value that fails validation.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Read a file to string, mapping a missing path to [`Error::MissingFile`].
pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| file_error(path, e))
}

/// Read a file to bytes, mapping a missing path to [`Error::MissingFile`].
pub fn read_bytes(path: &std::path::Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| file_error(path, e))
}

/// Write bytes, wrapping io failures with the path.
pub fn write_bytes(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn file_error(path: &std::path::Path, e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::NotFound {
        Error::MissingFile(path.to_path_buf())
    } else {
        Error::Io {
            path: path.to_path_buf(),
            source: e,
        }
    }
}
