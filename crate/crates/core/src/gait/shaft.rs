use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{BuehlerClock, GaitError, MAX_TURN_VALUE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaitParams {
    /// Gait cycles per second.
    pub frequency: f64,
    /// Turn value `T`, in [-0.3, 0.3].
    pub turn_value: f64,
    /// Steering parameter `s`.
    pub steer_param: f64,
    /// Gain applied to `s` in the middle-leg phase perturbation.
    pub k_s: f64,
}

impl Default for GaitParams {
    fn default() -> Self {
        Self { frequency: 0.16, turn_value: 0.0, steer_param: 0.0, k_s: 0.2 }
    }
}

impl GaitParams {
    pub fn validate(&self) -> Result<(), GaitError> {
        if !(self.frequency > 0.0) || !self.frequency.is_finite() {
            return Err(GaitError::InvalidParam(format!("frequency must be > 0, got {}", self.frequency)));
        }
        if !(self.turn_value.abs() <= MAX_TURN_VALUE) {
            return Err(GaitError::InvalidParam(format!("turn_value must be in [-0.3, 0.3], got {}", self.turn_value)));
        }
        if !self.k_s.is_finite() || !self.steer_param.is_finite() {
            return Err(GaitError::InvalidParam("k_s and steer_param must be finite".into()));
        }
        Ok(())
    }

    pub fn cycle_period(&self) -> f64 {
        1.0 / self.frequency
    }
}

/// Motor shaft angles in degrees, one per leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShaftAngles {
    pub fl: f64,
    pub fr: f64,
    pub ml: f64,
    pub mr: f64,
    pub hl: f64,
    pub hr: f64,
}

impl ShaftAngles {
    /// Column order used by gait tables: FL, FR, ML, MR, HL, HR.
    pub fn to_array(self) -> [f64; 6] {
        [self.fl, self.fr, self.ml, self.mr, self.hl, self.hr]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self { fl: a[0], fr: a[1], ml: a[2], mr: a[3], hl: a[4], hr: a[5] }
    }

    /// Same angle on both sides of each leg pair.
    pub fn symmetric(front: f64, mid: f64, hind: f64) -> Self {
        Self { fl: front, fr: front, ml: mid, mr: mid, hl: hind, hr: hind }
    }
}

/// Tripod gait with anti-symmetric middle-leg phase perturbation:
///
/// ```text
/// FL = HL = b(phi)
/// FR = HR = b(phi + 1/2)
/// ML      = b(1/2 + phi + s k_s cos(2 pi phi))
/// MR      = b(phi - s k_s cos(2 pi phi))
/// ```
pub fn shaft_angles(phi: f64, params: &GaitParams, clock: &BuehlerClock) -> Result<ShaftAngles, GaitError> {
    let amplitude = params.steer_param * params.k_s;
    if !(amplitude.abs() < 0.5) {
        return Err(GaitError::PerturbationTooLarge(amplitude));
    }
    let shift = amplitude * (TAU * phi).cos();
    let left = clock.angle(phi);
    let right = clock.angle(phi + 0.5);
    Ok(ShaftAngles {
        fl: left,
        fr: right,
        ml: clock.angle(0.5 + phi + shift),
        mr: clock.angle(phi - shift),
        hl: left,
        hr: right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn params(s: f64, k_s: f64) -> GaitParams {
        GaitParams { steer_param: s, k_s, ..GaitParams::default() }
    }

    #[test]
    fn zero_steer_is_pure_tripod() {
        let b = BuehlerClock::default();
        let a = shaft_angles(0.25, &params(0.0, 1.0), &b).unwrap();
        assert_eq!(a.ml, b.angle(0.75));
        assert_eq!(a.ml, a.fr);
        assert_eq!(a.mr, b.angle(0.25));
        assert_eq!(a.mr, a.fl);
        assert_eq!(a.fl, a.hl);
        assert_eq!(a.fr, a.hr);
    }

    #[test]
    fn quarter_phase_kills_perturbation() {
        let b = BuehlerClock::default();
        let straight = shaft_angles(0.25, &params(0.0, 1.0), &b).unwrap();
        let steered = shaft_angles(0.25, &params(0.1, 1.0), &b).unwrap();
        assert_abs_diff_eq!(straight.ml, steered.ml, epsilon = 1e-12);
        assert_abs_diff_eq!(straight.mr, steered.mr, epsilon = 1e-12);
    }

    #[test]
    fn substitution_at_phase_zero() {
        let b = BuehlerClock::default();
        let a = shaft_angles(0.0, &params(0.1, 1.0), &b).unwrap();
        assert_abs_diff_eq!(a.mr, b.angle(-0.1), epsilon = 1e-12);
        assert_abs_diff_eq!(a.ml, b.angle(0.6), epsilon = 1e-12);
        // hand evaluation of the two-rate clock
        assert_abs_diff_eq!(a.mr, -30.0 - 0.1 * 600.0, epsilon = 1e-9);
        assert_abs_diff_eq!(a.ml, 30.0 + 0.1 * 600.0, epsilon = 1e-9);
    }

    #[test]
    fn large_perturbation_is_rejected() {
        let b = BuehlerClock::default();
        assert!(matches!(shaft_angles(0.1, &params(2.5, 0.2), &b), Err(GaitError::PerturbationTooLarge(_))));
        assert!(shaft_angles(0.1, &params(2.4, 0.2), &b).is_ok());
    }

    proptest! {
        // With the perturbation written as above, the two middle legs run
        // the same timing half a cycle apart for any s.
        #[test]
        fn middle_legs_share_timing(phi in -2.0f64..2.0, s in -2.0f64..2.0) {
            let b = BuehlerClock::default();
            let p = params(s, 0.2);
            let now = shaft_angles(phi, &p, &b).unwrap();
            let later = shaft_angles(phi + 0.5, &p, &b).unwrap();
            prop_assert!((now.ml - later.mr).abs() < 1e-9);
        }
    }
}
