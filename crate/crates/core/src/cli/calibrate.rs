use serde::{Deserialize, Serialize};

use super::place_target;
use super::CliError;
use crate::gait::{SteeringCalibration, MAX_TURN_VALUE};
use crate::simulator::{ChassisState, Command, DandelionSpec, WorldConfig, WorldState};

/// Height of the calibration target, meters.
pub const CALIBRATION_TARGET_HEIGHT: f64 = 0.10;
/// Turn-value resolution of the sweep.
pub const CALIBRATION_STEP: f64 = 0.0025;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub azimuth: f64,
    pub turn_value: f64,
    /// False when no turn value in range overshot; the entry is then
    /// clamped to the maximum.
    pub overshoot_found: bool,
}

/// Azimuths from -27 to 27 degrees in 3 degree steps.
pub fn default_azimuth_grid() -> Vec<f64> {
    (-9..=9).map(|i| 3.0 * i as f64).collect()
}

/// True azimuth after walking one gait cycle at constant `turn_value`
/// toward a target first seen at (`azimuth`, `distance`).
pub fn azimuth_after_cycle(cfg: &WorldConfig, azimuth: f64, distance: f64, turn_value: f64) -> Option<f64> {
    let (x, y) = place_target(&cfg.camera, &cfg.blade, azimuth, distance, CALIBRATION_TARGET_HEIGHT);
    let target = DandelionSpec::new(x, y, 0.002, CALIBRATION_TARGET_HEIGHT);
    let cfg = WorldConfig { noise: false, ..cfg.clone() };
    let period = cfg.gait.cycle_period();
    let mut world = WorldState::new(cfg, ChassisState::default(), vec![target], 0).ok()?;
    world.step(&Command::forward(turn_value), period).ok()?;
    world.observe_truth(0).map(|t| t.azimuth)
}

/// For each azimuth, the smallest turn value (on a `CALIBRATION_STEP`
/// grid) whose one-cycle arc carries the target across the heading, so
/// that the robot slightly overshoots it.
pub fn calibrate_steering(
    distance: f64,
    azimuths: &[f64],
    cfg: &WorldConfig,
    stop_distance: f64,
) -> Result<(SteeringCalibration, Vec<CalibrationPoint>), CliError> {
    if !(distance > stop_distance) {
        return Err(CliError::Validation {
            field: "distance".into(),
            message: format!("must exceed the stop distance {stop_distance}"),
        });
    }
    let mut grid = azimuths.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let steps = (MAX_TURN_VALUE / CALIBRATION_STEP).round() as usize;
    let points: Vec<CalibrationPoint> = grid
        .iter()
        .map(|&a| {
            if a == 0.0 {
                return CalibrationPoint { azimuth: a, turn_value: 0.0, overshoot_found: true };
            }
            let sign = a.signum();
            let found = (1..=steps)
                .map(|k| sign * ((k as f64 * CALIBRATION_STEP) * 1e4).round() / 1e4)
                .find(|&t| azimuth_after_cycle(cfg, a, distance, t).is_some_and(|after| after * a < 0.0));
            match found {
                Some(t) => CalibrationPoint { azimuth: a, turn_value: t, overshoot_found: true },
                None => CalibrationPoint { azimuth: a, turn_value: sign * MAX_TURN_VALUE, overshoot_found: false },
            }
        })
        .collect();
    let table = SteeringCalibration::new(points.iter().map(|p| (p.azimuth, p.turn_value)).collect())?;
    Ok((table, points))
}
