use serde::{Deserialize, Serialize};

use super::SimError;
use crate::gait::{GaitParams, MAX_TURN_VALUE};

/// Net chassis motion produced by the gait.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MotionModel {
    /// Meters advanced per gait cycle.
    pub stride_per_cycle: f64,
    /// Turn radius at |T| = 0.3, meters.
    pub min_turn_radius: f64,
    /// Standard deviation of the per-cycle stride multiplier.
    pub stride_noise_sigma: f64,
    /// Standard deviation of a per-cycle offset added to the executed
    /// turn value (left/right stride imbalance).
    pub turn_noise_sigma: f64,
    /// Yaw rate when turning in place, degrees per second.
    pub spin_rate: f64,
}

impl Default for MotionModel {
    fn default() -> Self {
        Self {
            stride_per_cycle: 1.0 / 3.0,
            min_turn_radius: 0.5,
            stride_noise_sigma: 0.05,
            turn_noise_sigma: 0.02,
            spin_rate: 10.0,
        }
    }
}

impl MotionModel {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.stride_per_cycle > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "stride_per_cycle must be > 0, got {}",
                self.stride_per_cycle
            )));
        }
        if !(self.min_turn_radius > 0.0) {
            return Err(SimError::InvalidConfig(format!("min_turn_radius must be > 0, got {}", self.min_turn_radius)));
        }
        if !(self.stride_noise_sigma >= 0.0) {
            return Err(SimError::InvalidConfig("stride_noise_sigma must be >= 0".into()));
        }
        if !(self.turn_noise_sigma >= 0.0) {
            return Err(SimError::InvalidConfig("turn_noise_sigma must be >= 0".into()));
        }
        if !(self.spin_rate > 0.0) {
            return Err(SimError::InvalidConfig("spin_rate must be > 0".into()));
        }
        Ok(())
    }

    pub fn cycles_per_meter(&self) -> f64 {
        1.0 / self.stride_per_cycle
    }

    /// Nominal walking speed, m/s.
    pub fn speed(&self, gait: &GaitParams) -> f64 {
        self.stride_per_cycle * gait.frequency
    }

    /// Signed path curvature (1/m, positive turning right) for turn value `t`.
    pub fn curvature(&self, t: f64) -> Result<f64, SimError> {
        Ok(match turn_radius(t, self)? {
            TurnRadius::Straight => 0.0,
            TurnRadius::Arc(r) => 1.0 / r,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TurnRadius {
    Straight,
    /// Signed radius in meters; positive turns right.
    Arc(f64),
}

/// Radius is inversely proportional to |T|, reaching `min_turn_radius`
/// at |T| = 0.3.
pub fn turn_radius(t: f64, model: &MotionModel) -> Result<TurnRadius, SimError> {
    if !(t.abs() <= MAX_TURN_VALUE) {
        return Err(SimError::TurnOutOfRange(t));
    }
    if t.abs() < 1e-6 {
        return Ok(TurnRadius::Straight);
    }
    Ok(TurnRadius::Arc(model.min_turn_radius * MAX_TURN_VALUE / t))
}

/// Open-loop walking time to cover `d` meters.
pub fn dead_reckon_duration(d: f64, gait: &GaitParams, model: &MotionModel) -> f64 {
    d * model.cycles_per_meter() / gait.frequency
}
