use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BuehlerClock, GaitError};

/// Closed toe path in the body frame (x forward, z up, relative to the
/// hip), parameterised by shaft angle.
///
/// Stance is a shallow sagging chord from `+stance_length/2` back to
/// `-stance_length/2`; recovery is an arch `clearance` high that carries
/// the toe forward again. The stance window is the clock's stance sweep
/// centred on `stance_center`, so mid-stance is the lowest point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToeTrajectory {
    pub stance_length: f64,
    pub clearance: f64,
    /// Hip-to-toe drop at the ends of stance.
    pub leg_depth: f64,
    /// Extra drop at mid-stance.
    pub stance_sag: f64,
    pub stance_center: f64,
    pub stance_sweep: f64,
    /// Hip positions along the body x axis: front, middle, hind.
    pub mount_x: [f64; 3],
    /// Body-frame x of the centre of mass.
    pub com_x: f64,
}

impl Default for ToeTrajectory {
    fn default() -> Self {
        Self::for_clock(&BuehlerClock::default())
    }
}

impl ToeTrajectory {
    pub fn for_clock(clock: &BuehlerClock) -> Self {
        Self {
            stance_length: 1.0 / 3.0,
            clearance: 0.10,
            leg_depth: 0.30,
            stance_sag: 0.01,
            stance_center: clock.stance_center,
            stance_sweep: clock.stance_sweep,
            mount_x: [0.40, 0.0, -0.40],
            com_x: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), GaitError> {
        let positive =
            [("stance_length", self.stance_length), ("clearance", self.clearance), ("leg_depth", self.leg_depth)];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(GaitError::InvalidParam(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.stance_sag >= 0.0) {
            return Err(GaitError::InvalidParam("stance_sag must be >= 0".into()));
        }
        if !(self.stance_sweep > 0.0 && self.stance_sweep < 360.0) {
            return Err(GaitError::InvalidParam("stance_sweep must be in (0, 360)".into()));
        }
        if !(self.mount_x[0] > self.mount_x[1] && self.mount_x[1] > self.mount_x[2]) {
            return Err(GaitError::InvalidParam("mount_x must be ordered front > mid > hind".into()));
        }
        Ok(())
    }

    /// Shaft angle at which stance begins.
    pub fn stance_start(&self) -> f64 {
        self.stance_center - 0.5 * self.stance_sweep
    }

    /// Toe (x, z) relative to the hip.
    pub fn point(&self, psi: f64) -> (f64, f64) {
        let half = 0.5 * self.stance_length;
        let within = (psi - self.stance_start()).rem_euclid(360.0);
        if within < self.stance_sweep {
            let t = within / self.stance_sweep;
            (half - self.stance_length * t, -self.leg_depth - self.stance_sag * (PI * t).sin())
        } else {
            let u = (within - self.stance_sweep) / (360.0 - self.stance_sweep);
            (
                -half + self.stance_length * 0.5 * (1.0 - (PI * u).cos()),
                -self.leg_depth + self.clearance * (PI * u).sin(),
            )
        }
    }

    pub fn in_stance(&self, psi: f64) -> bool {
        (psi - self.stance_start()).rem_euclid(360.0) < self.stance_sweep
    }
}

/// Toe position of a leg at shaft angle `psi`.
pub fn toe_position(psi: f64, traj: &ToeTrajectory) -> (f64, f64) {
    traj.point(psi)
}
