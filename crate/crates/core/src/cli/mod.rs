//! Scenario files, episode runs, batches and the steering calibration
//! sweep behind the `dandelion` binary.

mod batch;
mod calibrate;
mod episode;
mod scenario;

use std::path::Path;

use thiserror::Error;

use crate::gait::GaitError;
use crate::simulator::SimError;

pub use batch::{expand_glob, run_batch, summarize, BatchItem, BatchSummary, RunOverrides};
pub use calibrate::{
    azimuth_after_cycle, calibrate_steering, default_azimuth_grid, CalibrationPoint, CALIBRATION_STEP,
    CALIBRATION_TARGET_HEIGHT,
};
pub use episode::{run_episode, world_config, EpisodeOptions, EpisodeReport, Outcome};
pub use scenario::{place_target, LawnBounds, Scenario, StartPose, FORMAT_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error("bad pattern: {0}")]
    Pattern(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Gait(#[from] GaitError),
}

impl CliError {
    /// Prefix parse and validation messages with the file they came from.
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            CliError::Validation { field, message } => {
                CliError::Validation { field, message: format!("{message} (in {})", path.display()) }
            }
            other => other,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
