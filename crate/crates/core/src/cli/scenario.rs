use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::controller::ControllerConfig;
use crate::geometry::BladeGeometry;
use crate::perception::CameraModel;
use crate::simulator::{ChassisState, DandelionSpec, MotionModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawnBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for LawnBounds {
    fn default() -> Self {
        Self { x_min: -5.0, x_max: 5.0, y_min: -5.0, y_max: 5.0 }
    }
}

impl LawnBounds {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPose {
    pub x: f64,
    pub y: f64,
    /// Degrees counter-clockwise from +x.
    #[serde(default)]
    pub heading: f64,
}

impl Default for StartPose {
    fn default() -> Self {
        Self { x: 0.0, y: 0.0, heading: 0.0 }
    }
}

impl StartPose {
    pub fn chassis(&self) -> ChassisState {
        ChassisState { x: self.x, y: self.y, heading: self.heading, ..ChassisState::default() }
    }
}

/// One episode's world, robot and controller settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u32,
    #[serde(default)]
    pub seed: u64,
    /// Stride noise; command-line flags override.
    #[serde(default)]
    pub noise: bool,
    /// Simulated-time budget for one episode, seconds.
    #[serde(default = "default_max_time")]
    pub max_time: f64,
    #[serde(default)]
    pub lawn: LawnBounds,
    #[serde(default)]
    pub robot: StartPose,
    #[serde(default)]
    pub blade: BladeGeometry,
    #[serde(default)]
    pub camera: CameraModel,
    #[serde(default)]
    pub motion: MotionModel,
    #[serde(default)]
    pub controller: ControllerConfig,
    #[serde(default, rename = "dandelion")]
    pub dandelions: Vec<DandelionSpec>,
}

fn default_max_time() -> f64 {
    600.0
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            seed: 0,
            noise: false,
            max_time: default_max_time(),
            lawn: LawnBounds::default(),
            robot: StartPose::default(),
            blade: BladeGeometry::default(),
            camera: CameraModel::default(),
            motion: MotionModel::default(),
            controller: ControllerConfig::default(),
            dandelions: Vec::new(),
        }
    }
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Validation { field: field.into(), message: message.into() }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let s: Scenario = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(invalid(
                "format_version",
                format!("unsupported version {} (expected {FORMAT_VERSION})", self.format_version),
            ));
        }
        if !(self.max_time > 0.0) {
            return Err(invalid("max_time", "must be > 0"));
        }
        let l = &self.lawn;
        if !(l.x_min < l.x_max && l.y_min < l.y_max) {
            return Err(invalid("lawn", "bounds must satisfy min < max"));
        }
        if !l.contains(self.robot.x, self.robot.y) {
            return Err(invalid("robot", "start position outside lawn bounds"));
        }
        if !self.robot.heading.is_finite() {
            return Err(invalid("robot.heading", "must be finite"));
        }
        self.blade.validate().map_err(|e| invalid("blade", e.to_string()))?;
        self.camera.validate().map_err(|e| invalid("camera", e.to_string()))?;
        self.motion.validate().map_err(|e| invalid("motion", e.to_string()))?;
        self.controller.validate().map_err(|e| invalid("controller", e))?;
        if self.dandelions.is_empty() {
            return Err(invalid("dandelion", "at least one dandelion is required"));
        }
        for (i, d) in self.dandelions.iter().enumerate() {
            let field = |name: &str| format!("dandelion[{i}].{name}");
            if !(d.stem_radius > 0.0) {
                return Err(invalid(field("stem_radius"), "must be > 0"));
            }
            if !(d.height > 0.0) {
                return Err(invalid(field("height"), "must be > 0"));
            }
            if !(d.head_radius > 0.0) {
                return Err(invalid(field("head_radius"), "must be > 0"));
            }
            if !l.contains(d.x, d.y) {
                return Err(invalid(field("x"), format!("({}, {}) outside lawn bounds", d.x, d.y)));
            }
        }
        Ok(())
    }

    /// A scenario with one dandelion at camera azimuth `azimuth`
    /// (degrees, positive right) and line-of-sight `distance`.
    pub fn single_target(azimuth: f64, distance: f64, height: f64) -> Self {
        let mut s = Scenario::default();
        let (x, y) = place_target(&s.camera, &s.blade, azimuth, distance, height);
        s.dandelions.push(DandelionSpec::new(x, y, 0.002, height));
        s
    }
}

/// World (x, y) of a flower head at `height` seen at `azimuth` and
/// line-of-sight `distance` by a robot at the origin facing +x.
pub fn place_target(
    camera: &CameraModel,
    blade: &BladeGeometry,
    azimuth: f64,
    distance: f64,
    height: f64,
) -> (f64, f64) {
    let cam_x = blade.vertex_offset - camera.mount_offset;
    let dz = height - camera.mount_height;
    let ground = (distance * distance - dz * dz).max(0.0).sqrt();
    let (sa, ca) = azimuth.to_radians().sin_cos();
    (cam_x + ground * ca, -ground * sa)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
format_version = 1
seed = 11

[lawn]
x_min = -1.0
x_max = 4.0
y_min = -2.0
y_max = 2.0

[robot]
x = 0.0
y = 0.0
heading = 0.0

[camera]
hfov = 54.0

[[dandelion]]
x = 1.8
y = -0.45
stem_radius = 0.002
height = 0.1

[[dandelion]]
x = 3.0
y = 1.0
stem_radius = 0.0025
height = 0.03
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scenario::parse(SAMPLE).unwrap();
        assert_eq!(s.dandelions.len(), 2);
        assert_eq!(s.camera.vfov, CameraModel::default().vfov);
        let again = Scenario::parse(&s.to_toml()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn dandelion_outside_lawn() {
        let text = SAMPLE.replace("x = 3.0", "x = 9.0");
        match Scenario::parse(&text) {
            Err(CliError::Validation { field, .. }) => assert_eq!(field, "dandelion[1].x"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let text = SAMPLE.replace("seed = 11", "seed = 11\ncolour = 3");
        assert!(matches!(Scenario::parse(&text), Err(CliError::Parse(_))));
    }

    #[test]
    fn single_target_geometry() {
        let s = Scenario::single_target(18.0, 1.5, 0.1);
        let cfg = crate::simulator::WorldConfig { camera: s.camera, blade: s.blade, ..Default::default() };
        let w = crate::simulator::WorldState::new(cfg, s.robot.chassis(), s.dandelions.clone(), 0).unwrap();
        let t = w.observe_truth(0).unwrap();
        assert!((t.azimuth - 18.0).abs() < 1e-9);
        assert!((t.distance - 1.5).abs() < 1e-9);
    }
}
