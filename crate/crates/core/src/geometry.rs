//! Closed-form geometry: camera-target coordinates, V-blade slicing
//! conditions and the picking zone.
//!
//! Every angle crossing this module's API is in degrees; conversion to
//! radians happens inside each function.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Horizontal half field of view of the camera, degrees.
pub const HALF_HFOV_DEG: f64 = 27.0;
/// Vertical half field of view of the camera, degrees.
pub const HALF_VFOV_DEG: f64 = 20.0;

const DEGENERATE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("elevation {0} deg is degenerate (|tan e| < 1e-12)")]
    DegenerateElevation(f64),
    #[error("azimuth {0} deg is degenerate (|cos a| < 1e-12)")]
    DegenerateAzimuth(f64),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("invalid blade geometry: {0}")]
    InvalidBlade(String),
    #[error("invalid picking zone: {0}")]
    InvalidZone(String),
}

/// Target location as seen from the camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalTarget {
    /// Degrees, positive when the target is to the robot's right.
    pub azimuth: f64,
    /// Degrees, positive above the optical axis.
    pub elevation: f64,
    /// Meters along the line of sight.
    pub distance: f64,
}

impl SphericalTarget {
    pub fn new(azimuth: f64, elevation: f64, distance: f64) -> Result<Self, GeometryError> {
        let t = Self { azimuth, elevation, distance };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.distance > 0.0) || !self.distance.is_finite() {
            return Err(GeometryError::InvalidTarget(format!("distance must be > 0, got {}", self.distance)));
        }
        if !(-HALF_HFOV_DEG..=HALF_HFOV_DEG).contains(&self.azimuth) {
            return Err(GeometryError::InvalidTarget(format!("azimuth {} outside [-27, 27]", self.azimuth)));
        }
        if !(-HALF_VFOV_DEG..=HALF_VFOV_DEG).contains(&self.elevation) {
            return Err(GeometryError::InvalidTarget(format!("elevation {} outside [-20, 20]", self.elevation)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylindricalTarget {
    /// Horizontal range, meters.
    pub r: f64,
    /// Height, meters.
    pub z: f64,
    /// Degrees; always the source azimuth.
    pub theta: f64,
}

/// Which spherical-to-cylindrical reduction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaFormula {
    /// `gamma = atan(1 / (cos a * tan e))`, `r = d cos gamma`, `z = d sin gamma`.
    #[default]
    Paper,
    /// `r = d cos e`, `z = d sin e`.
    Standard,
}

impl std::str::FromStr for GammaFormula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Self::Paper),
            "standard" => Ok(Self::Standard),
            other => Err(format!("unknown gamma formula '{other}' (expected paper|standard)")),
        }
    }
}

/// The γ angle (degrees) of the published reduction. Note that `atan`
/// has range (-90, 90), so γ takes the sign of `cos a * tan e`.
pub fn gamma_deg(azimuth: f64, elevation: f64) -> Result<f64, GeometryError> {
    let tan_e = elevation.to_radians().tan();
    let cos_a = azimuth.to_radians().cos();
    if tan_e.abs() < DEGENERATE_EPS {
        return Err(GeometryError::DegenerateElevation(elevation));
    }
    if cos_a.abs() < DEGENERATE_EPS {
        return Err(GeometryError::DegenerateAzimuth(azimuth));
    }
    Ok((1.0 / (cos_a * tan_e)).atan().to_degrees())
}

pub fn spherical_to_cylindrical(t: &SphericalTarget) -> Result<CylindricalTarget, GeometryError> {
    spherical_to_cylindrical_with(t, GammaFormula::Paper)
}

pub fn spherical_to_cylindrical_with(
    t: &SphericalTarget,
    formula: GammaFormula,
) -> Result<CylindricalTarget, GeometryError> {
    let elev = match formula {
        GammaFormula::Paper => gamma_deg(t.azimuth, t.elevation)?,
        GammaFormula::Standard => t.elevation,
    };
    let (s, c) = elev.to_radians().sin_cos();
    Ok(CylindricalTarget { r: t.distance * c, z: t.distance * s, theta: t.azimuth })
}

/// The V-shaped cutting appendage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BladeGeometry {
    /// Half the interior angle of the V, degrees.
    pub half_angle: f64,
    /// Height of the blade edge above ground at the swoop nadir, meters.
    pub blade_height: f64,
    /// Forward position of the V vertex relative to the chassis origin, meters.
    pub vertex_offset: f64,
    /// Length of each blade arm from the vertex, meters.
    #[serde(default = "default_arm_length")]
    pub arm_length: f64,
    /// Override for the lateral capture half-width; defaults to the
    /// physical half-opening `arm_length * sin(half_angle)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_half_width: Option<f64>,
}

fn default_arm_length() -> f64 {
    0.12
}

impl Default for BladeGeometry {
    fn default() -> Self {
        Self {
            half_angle: 35.0,
            blade_height: 0.04,
            vertex_offset: 0.62,
            arm_length: default_arm_length(),
            capture_half_width: None,
        }
    }
}

impl BladeGeometry {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.half_angle > 0.0 && self.half_angle < 90.0) {
            return Err(GeometryError::InvalidBlade(format!("half_angle must be in (0, 90), got {}", self.half_angle)));
        }
        if !(self.blade_height >= 0.0) {
            return Err(GeometryError::InvalidBlade(format!("blade_height must be >= 0, got {}", self.blade_height)));
        }
        if !(self.arm_length > 0.0) {
            return Err(GeometryError::InvalidBlade(format!("arm_length must be > 0, got {}", self.arm_length)));
        }
        if let Some(w) = self.capture_half_width {
            if !(w > 0.0) {
                return Err(GeometryError::InvalidBlade(format!("capture_half_width must be > 0, got {w}")));
            }
        }
        Ok(())
    }

    /// Lateral half-width of the opening the stems can enter through.
    pub fn capture_half_width(&self) -> f64 {
        self.capture_half_width.unwrap_or_else(|| self.arm_length * self.half_angle.to_radians().sin())
    }
}

/// Largest stem radius that fits between the blades when the stem
/// centre is `d` meters from the vertex: `L = d sin(theta)`.
pub fn max_stem_radius(d: f64, blade: &BladeGeometry) -> f64 {
    d * blade.half_angle.to_radians().sin()
}

/// Distance from the vertex at which a stem of the given radius starts
/// being sliced: `d_cr = r / sin(theta)`.
pub fn critical_distance(stem_radius: f64, blade: &BladeGeometry) -> f64 {
    stem_radius / blade.half_angle.to_radians().sin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutMode {
    /// Only the stem meets the blades.
    Slice,
    /// The head rests on the blades and separates under tension.
    TensileFracture,
}

impl std::fmt::Display for CutMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CutMode::Slice => f.write_str("slice"),
            CutMode::TensileFracture => f.write_str("tensile_fracture"),
        }
    }
}

/// Equal heights count as tensile fracture.
pub fn cut_mode(dandelion_height: f64, blade: &BladeGeometry) -> CutMode {
    if dandelion_height > blade.blade_height {
        CutMode::Slice
    } else {
        CutMode::TensileFracture
    }
}

/// Azimuth/elevation box (degrees) in which a swoop captures the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PickZone {
    pub azimuth_min: f64,
    pub azimuth_max: f64,
    pub elevation_min: f64,
    pub elevation_max: f64,
}

impl Default for PickZone {
    fn default() -> Self {
        Self { azimuth_min: -7.0, azimuth_max: 7.0, elevation_min: -15.0, elevation_max: 20.0 }
    }
}

impl PickZone {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.azimuth_min < self.azimuth_max) {
            return Err(GeometryError::InvalidZone("azimuth_min must be < azimuth_max".into()));
        }
        if !(self.elevation_min < self.elevation_max) {
            return Err(GeometryError::InvalidZone("elevation_min must be < elevation_max".into()));
        }
        Ok(())
    }
}

/// Boundaries are inclusive.
pub fn in_pick_zone(azimuth: f64, elevation: f64, zone: &PickZone) -> bool {
    (zone.azimuth_min..=zone.azimuth_max).contains(&azimuth)
        && (zone.elevation_min..=zone.elevation_max).contains(&elevation)
}
