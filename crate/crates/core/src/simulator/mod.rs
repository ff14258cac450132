//! Kinematic world: chassis pose integration on steering arcs, dead
//! reckoning, stride noise, swoop playback and pick attempts.

mod kinematics;
mod log;
mod motion;
mod pick;
mod world;

use thiserror::Error;

use crate::gait::GaitError;
use crate::geometry::GeometryError;
use crate::perception::PerceptionError;

pub use kinematics::{body_pose, body_to_sagittal, pair_points, BodyPose, SwoopSample, SwoopTrack};
pub use log::{
    parse_command, read_trajectory_log, replay, write_trajectory_log, LogRecord, TrajectoryLog, TRAJECTORY_HEADER,
};
pub use motion::{dead_reckon_duration, turn_radius, MotionModel, TurnRadius};
pub use pick::{MissReason, PickOutcome};
pub use world::{
    step, wrap_degrees, ChassisState, Command, DandelionSpec, DandelionState, Direction, WorldConfig, WorldState,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("turn value {0} outside [-0.3, 0.3]")]
    TurnOutOfRange(f64),
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("no swoop has just finished")]
    NoSwoop,
    #[error("no standing dandelion within {0} m of the swoop nadir")]
    NoStandingDandelionInRange(f64),
    #[error("log row {row}: {message}")]
    Log { row: usize, message: String },
    #[error(transparent)]
    Gait(#[from] GaitError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Perception(#[from] PerceptionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
