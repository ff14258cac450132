use serde::{Deserialize, Serialize};

use super::PerceptionError;
use crate::geometry::SphericalTarget;
use crate::simulator::ChassisState;

/// Forward-looking RGB-D camera with an equiangular (linear-in-angle)
/// projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CameraModel {
    /// Horizontal field of view, degrees.
    pub hfov: f64,
    /// Vertical field of view, degrees.
    pub vfov: f64,
    pub width: usize,
    pub height: usize,
    /// Distance from the camera forward to the blade vertex, meters.
    pub mount_offset: f64,
    /// Camera height above ground, meters.
    pub mount_height: f64,
    /// Camera tilt, degrees, positive up.
    pub mount_pitch: f64,
}

impl Default for CameraModel {
    fn default() -> Self {
        Self {
            hfov: 54.0,
            vfov: 40.0,
            width: 640,
            height: 480,
            mount_offset: 0.20,
            mount_height: 0.08,
            mount_pitch: 0.0,
        }
    }
}

/// Where the camera sits in the world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Degrees, counter-clockwise from +x.
    pub yaw: f64,
    /// Degrees, positive up.
    pub pitch: f64,
}

impl CameraModel {
    pub fn validate(&self) -> Result<(), PerceptionError> {
        if !(self.hfov > 0.0 && self.vfov > 0.0) {
            return Err(PerceptionError::InvalidCamera("fov must be positive".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(PerceptionError::InvalidCamera("resolution must be positive".into()));
        }
        if !self.mount_offset.is_finite() || !self.mount_height.is_finite() || !self.mount_pitch.is_finite() {
            return Err(PerceptionError::InvalidCamera("mount parameters must be finite".into()));
        }
        Ok(())
    }

    /// Degrees per pixel horizontally.
    pub fn deg_per_px_x(&self) -> f64 {
        self.hfov / self.width as f64
    }

    pub fn deg_per_px_y(&self) -> f64 {
        self.vfov / self.height as f64
    }

    /// Camera pose for a robot whose blade vertex sits `vertex_offset`
    /// ahead of the chassis origin.
    pub fn pose_for(&self, robot: &ChassisState, vertex_offset: f64) -> CameraPose {
        let ahead = vertex_offset - self.mount_offset;
        let (s, c) = robot.heading.to_radians().sin_cos();
        CameraPose {
            x: robot.x + ahead * c,
            y: robot.y + ahead * s,
            z: self.mount_height,
            yaw: robot.heading,
            pitch: self.mount_pitch,
        }
    }

    /// Spherical coordinates of a world point as seen from `pose`:
    /// azimuth positive right, elevation from the optical horizontal
    /// plane, distance along the line of sight. `None` behind the camera.
    pub fn observe(&self, pose: &CameraPose, point: (f64, f64, f64)) -> Option<SphericalTarget> {
        let (dx, dy, dz) = (point.0 - pose.x, point.1 - pose.y, point.2 - pose.z);
        let (s, c) = pose.yaw.to_radians().sin_cos();
        let forward = dx * c + dy * s;
        let left = -dx * s + dy * c;
        let (ps, pc) = pose.pitch.to_radians().sin_cos();
        let x = forward * pc + dz * ps;
        let z = -forward * ps + dz * pc;
        let y = -left;
        if x <= 0.0 {
            return None;
        }
        let azimuth = y.atan2(x).to_degrees();
        let elevation = z.atan2(x.hypot(y)).to_degrees();
        let distance = (x * x + y * y + z * z).sqrt();
        Some(SphericalTarget { azimuth, elevation, distance })
    }

    /// Sub-pixel image position of a direction.
    pub fn angles_to_pixel(&self, azimuth: f64, elevation: f64) -> (f64, f64) {
        (
            (self.width as f64 - 1.0) / 2.0 + azimuth / self.deg_per_px_x(),
            (self.height as f64 - 1.0) / 2.0 - elevation / self.deg_per_px_y(),
        )
    }
}

/// Linear-in-angle pixel to (azimuth, elevation) in degrees; up is
/// positive elevation.
pub fn pixel_to_angles(px: f64, py: f64, camera: &CameraModel) -> (f64, f64) {
    (
        (px - (camera.width as f64 - 1.0) / 2.0) * camera.deg_per_px_x(),
        ((camera.height as f64 - 1.0) / 2.0 - py) * camera.deg_per_px_y(),
    )
}
