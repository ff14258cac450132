use serde::{Deserialize, Serialize};

use super::{GaitError, GaitParams, MAX_TURN_VALUE};
use crate::simulator::{ChassisState, Command, MotionModel, WorldConfig, WorldState};

/// Goal position relative to the robot: bearing (degrees, positive
/// right of the heading) and straight-line ground distance (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcGoal {
    pub azimuth: f64,
    pub distance: f64,
}

impl ArcGoal {
    pub fn from_offset(forward: f64, right: f64) -> Self {
        Self { azimuth: right.atan2(forward).to_degrees(), distance: forward.hypot(right) }
    }

    /// Radius of the circle tangent to the heading through the goal, or
    /// `None` for a straight line.
    pub fn required_radius(&self) -> Option<f64> {
        let s = self.azimuth.to_radians().sin().abs();
        if s < 1e-12 {
            None
        } else {
            Some(self.distance / (2.0 * s))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSolution {
    pub steer_param: f64,
    pub turn_value: f64,
    /// Unsigned radius of the simulated arc; infinite when straight.
    pub radius: f64,
}

pub fn turn_value_for_steer_param(s: f64, gait: &GaitParams) -> f64 {
    s * gait.k_s
}

pub fn steer_param_for_turn_value(t: f64, gait: &GaitParams) -> f64 {
    t / gait.k_s
}

fn circumradius(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    let ab = (b.0 - a.0).hypot(b.1 - a.1);
    let bc = (c.0 - b.0).hypot(c.1 - b.1);
    let ca = (a.0 - c.0).hypot(a.1 - c.1);
    let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    if cross.abs() < 1e-15 {
        f64::INFINITY
    } else {
        ab * bc * ca / (2.0 * cross.abs())
    }
}

/// Radius of the path the simulator walks over one gait cycle at
/// steering parameter `s`, from a circle through its start, middle and
/// end points.
pub fn simulated_arc_radius(s: f64, gait: &GaitParams, motion: &MotionModel) -> Result<f64, GaitError> {
    let t = turn_value_for_steer_param(s, gait);
    if t.abs() > MAX_TURN_VALUE + 1e-12 {
        return Err(GaitError::InvalidParam(format!("steer_param {s} maps outside the turn range")));
    }
    let t = t.clamp(-MAX_TURN_VALUE, MAX_TURN_VALUE);
    let cfg = WorldConfig { gait: *gait, motion: *motion, noise: false, ..WorldConfig::default() };
    let mut w = WorldState::new(cfg, ChassisState::default(), Vec::new(), 0)
        .map_err(|e| GaitError::InvalidParam(e.to_string()))?;
    let half = 0.5 * gait.cycle_period();
    let start = (w.robot.x, w.robot.y);
    w.step(&Command::forward(t), half).map_err(|e| GaitError::InvalidParam(e.to_string()))?;
    let mid = (w.robot.x, w.robot.y);
    w.step(&Command::forward(t), half).map_err(|e| GaitError::InvalidParam(e.to_string()))?;
    Ok(circumradius(start, mid, (w.robot.x, w.robot.y)))
}

/// Steering parameter and turn value whose simulated arc passes through
/// `goal`, found by bisection on the simulated radius.
pub fn turn_value_from_steer_param(
    goal: &ArcGoal,
    gait: &GaitParams,
    motion: &MotionModel,
) -> Result<ArcSolution, GaitError> {
    if !(goal.distance > 1e-9) || !goal.azimuth.is_finite() {
        return Err(GaitError::DegenerateGoal);
    }
    let required = match goal.required_radius() {
        None if goal.azimuth.abs() < 90.0 => {
            return Ok(ArcSolution { steer_param: 0.0, turn_value: 0.0, radius: f64::INFINITY })
        }
        None => return Err(GaitError::UnreachableRadius { required: 0.0, minimum: motion.min_turn_radius }),
        Some(r) => r,
    };
    let s_max = steer_param_for_turn_value(MAX_TURN_VALUE, gait).abs();
    let minimum = simulated_arc_radius(s_max, gait, motion)?;
    if required < minimum * (1.0 - 1e-9) {
        return Err(GaitError::UnreachableRadius { required, minimum });
    }
    let (mut lo, mut hi) = (0.0, s_max);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if simulated_arc_radius(mid, gait, motion)? > required {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi) * goal.azimuth.signum();
    Ok(ArcSolution {
        steer_param: s,
        turn_value: turn_value_for_steer_param(s, gait).clamp(-MAX_TURN_VALUE, MAX_TURN_VALUE),
        radius: simulated_arc_radius(s, gait, motion)?,
    })
}
