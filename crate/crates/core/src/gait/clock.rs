use serde::{Deserialize, Serialize};

use super::GaitError;

/// Two-rate clock mapping gait phase to motor shaft angle: a slow sweep
/// through stance followed by a fast recovery.
///
/// Phase 0 is the start of stance, so `b(0) = stance_center - stance_sweep / 2`.
/// The map is defined on unwrapped phase and winds once per cycle:
/// `b(phi + 1) = b(phi) + 360`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuehlerClock {
    /// Fraction of the cycle spent in stance.
    pub duty_factor: f64,
    /// Shaft degrees swept during stance.
    pub stance_sweep: f64,
    /// Shaft angle at mid-stance, degrees.
    pub stance_center: f64,
}

impl Default for BuehlerClock {
    fn default() -> Self {
        Self { duty_factor: 0.5, stance_sweep: 60.0, stance_center: 0.0 }
    }
}

impl BuehlerClock {
    pub fn validate(&self) -> Result<(), GaitError> {
        if !(self.duty_factor > 0.0 && self.duty_factor < 1.0) {
            return Err(GaitError::InvalidParam(format!("duty_factor must be in (0, 1), got {}", self.duty_factor)));
        }
        if !(self.stance_sweep > 0.0 && self.stance_sweep < 360.0) {
            return Err(GaitError::InvalidParam(format!(
                "stance_sweep must be in (0, 360), got {}",
                self.stance_sweep
            )));
        }
        if !self.stance_center.is_finite() {
            return Err(GaitError::InvalidParam("stance_center must be finite".into()));
        }
        Ok(())
    }

    /// Shaft angle (degrees, unwrapped) at phase `phi`.
    pub fn angle(&self, phi: f64) -> f64 {
        let cycle = phi.floor();
        let frac = phi - cycle;
        let start = 360.0 * cycle + self.stance_center - 0.5 * self.stance_sweep;
        if frac < self.duty_factor {
            start + self.stance_sweep * frac / self.duty_factor
        } else {
            start
                + self.stance_sweep
                + (360.0 - self.stance_sweep) * (frac - self.duty_factor) / (1.0 - self.duty_factor)
        }
    }

    /// Inverse of [`angle`](Self::angle).
    pub fn phase(&self, angle: f64) -> f64 {
        let rel = angle - (self.stance_center - 0.5 * self.stance_sweep);
        let cycle = (rel / 360.0).floor();
        let within = rel - 360.0 * cycle;
        let frac = if within < self.stance_sweep {
            self.duty_factor * within / self.stance_sweep
        } else {
            self.duty_factor + (1.0 - self.duty_factor) * (within - self.stance_sweep) / (360.0 - self.stance_sweep)
        };
        cycle + frac
    }

    /// Angular rate during stance, degrees per unit phase.
    pub fn stance_rate(&self) -> f64 {
        self.stance_sweep / self.duty_factor
    }

    /// Angular rate during recovery, degrees per unit phase.
    pub fn recovery_rate(&self) -> f64 {
        (360.0 - self.stance_sweep) / (1.0 - self.duty_factor)
    }
}

/// [`BuehlerClock::angle`] as a free function.
pub fn buehler_clock(phi: f64, clock: &BuehlerClock) -> f64 {
    clock.angle(phi)
}
