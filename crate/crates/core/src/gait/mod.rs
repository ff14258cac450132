//! Gait generation: the two-rate leg clock, tripod/steering shaft
//! angles, the toe path, the swoop primitive, gait-table files and the
//! azimuth steering calibration.

mod arc_solver;
mod calibration;
mod clock;
mod shaft;
mod swoop;
mod table;
mod toe;

use thiserror::Error;

pub use arc_solver::{
    simulated_arc_radius, steer_param_for_turn_value, turn_value_for_steer_param, turn_value_from_steer_param, ArcGoal,
    ArcSolution,
};
pub use calibration::{
    read_calibration, steer_turn_value_from_azimuth, write_calibration, SteeringCalibration, CALIBRATION_HEADER,
};
pub use clock::{buehler_clock, BuehlerClock};
pub use shaft::{shaft_angles, GaitParams, ShaftAngles};
pub use swoop::swoop_plan;
pub use table::{read_gait_table, write_gait_table, GaitRow, GaitTable, StampKind, GAIT_TABLE_HEADER};
pub use toe::{toe_position, ToeTrajectory};

/// Largest turn value magnitude the gait accepts.
pub const MAX_TURN_VALUE: f64 = 0.3;

#[derive(Debug, Error)]
pub enum GaitError {
    #[error("invalid gait parameter: {0}")]
    InvalidParam(String),
    #[error("steering perturbation |s*k_s| = {0} must be < 0.5")]
    PerturbationTooLarge(f64),
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("row {row}: stamp does not increase")]
    NonMonotoneStamp { row: usize },
    #[error("invalid calibration table: {0}")]
    InvalidCalibration(String),
    #[error("goal coincides with the start point")]
    DegenerateGoal,
    #[error("required turn radius {required:.4} m is below the minimum {minimum:.4} m")]
    UnreachableRadius { required: f64, minimum: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
