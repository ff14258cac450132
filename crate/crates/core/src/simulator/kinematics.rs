//! Planar (sagittal) forward kinematics of the chassis from toe positions.
//!
//! Left and right legs of a pair are averaged into one sagittal point.
//! The chassis rests on the edge of the lower convex hull of the three
//! pair points that lies under the centre of mass; that edge is the
//! ground line, which fixes height and pitch.

use serde::{Deserialize, Serialize};

use crate::gait::{GaitTable, ShaftAngles, ToeTrajectory};

/// Chassis pose implied by a set of shaft angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyPose {
    /// Height of the body origin above ground, meters.
    pub height: f64,
    /// Pitch in degrees, positive nose-up.
    pub pitch: f64,
    /// Pair indices (0 front, 1 mid, 2 hind) of the supporting edge.
    pub support: (usize, usize),
}

/// Body-frame (x, z) of each leg pair's toe: front, mid, hind.
pub fn pair_points(angles: &ShaftAngles, traj: &ToeTrajectory) -> [(f64, f64); 3] {
    let pairs = [(angles.fl, angles.fr), (angles.ml, angles.mr), (angles.hl, angles.hr)];
    std::array::from_fn(|i| {
        let (l, r) = pairs[i];
        let (xl, zl) = traj.point(l);
        let (xr, zr) = traj.point(r);
        (traj.mount_x[i] + 0.5 * (xl + xr), 0.5 * (zl + zr))
    })
}

pub fn body_pose(angles: &ShaftAngles, traj: &ToeTrajectory) -> BodyPose {
    let pts = pair_points(angles, traj);
    let (front, mid, hind) = (pts[0], pts[1], pts[2]);
    let line_at = |a: (f64, f64), b: (f64, f64), x: f64| a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
    let support = if mid.1 < line_at(hind, front, mid.0) {
        if traj.com_x <= mid.0 {
            (2, 1)
        } else {
            (1, 0)
        }
    } else {
        (2, 0)
    };
    let (a, b) = (pts[support.0], pts[support.1]);
    let slope = (b.1 - a.1) / (b.0 - a.0);
    let norm = (1.0 + slope * slope).sqrt();
    BodyPose { height: (slope * a.0 - a.1) / norm, pitch: (-slope).atan().to_degrees(), support }
}

/// Transform a body-frame point into (forward, up) offsets from the body
/// origin given the pitch.
pub fn body_to_sagittal(x: f64, z: f64, pitch_deg: f64) -> (f64, f64) {
    let (s, c) = pitch_deg.to_radians().sin_cos();
    (x * c - z * s, x * s + z * c)
}

/// One sample of a played-back table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwoopSample {
    /// Fraction of playback in [0, 1].
    pub progress: f64,
    pub height: f64,
    pub pitch: f64,
    /// Horizontal body travel since playback start, meters (+ forward).
    pub advance: f64,
    /// Forward position of the blade vertex relative to the body origin
    /// at playback start, meters.
    pub vertex_forward: f64,
    /// Height of the blade vertex above ground, meters.
    pub vertex_height: f64,
}

/// Dense chassis and appendage trace for a gait table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwoopTrack {
    pub samples: Vec<SwoopSample>,
}

impl SwoopTrack {
    /// Plays `table` through the kinematics. `vertex` is the body-frame
    /// (x, z) of the blade vertex. Horizontal travel assumes the two
    /// supporting toes do not slip (their mean ground offset is held).
    pub fn compute(table: &GaitTable, traj: &ToeTrajectory, vertex: (f64, f64), samples: usize) -> Option<Self> {
        let (start, end) = table.span()?;
        let n = samples.max(2);
        let mut out = Vec::with_capacity(n);
        let mut advance = 0.0;
        let mut prev: Option<(ShaftAngles, BodyPose)> = None;
        for k in 0..n {
            let progress = k as f64 / (n - 1) as f64;
            let angles = table.sample(start + (end - start) * progress)?;
            let pose = body_pose(&angles, traj);
            if let Some((pa, pp)) = prev {
                let (i, j) = pp.support;
                let before = pair_points(&pa, traj);
                let after = pair_points(&angles, traj);
                let ground_offset = |p: (f64, f64), pitch: f64| body_to_sagittal(p.0, p.1, pitch).0;
                let delta = 0.5
                    * ((ground_offset(after[i], pose.pitch) - ground_offset(before[i], pp.pitch))
                        + (ground_offset(after[j], pose.pitch) - ground_offset(before[j], pp.pitch)));
                advance -= delta;
            }
            let (vf, vz) = body_to_sagittal(vertex.0, vertex.1, pose.pitch);
            out.push(SwoopSample {
                progress,
                height: pose.height,
                pitch: pose.pitch,
                advance,
                vertex_forward: advance + vf,
                vertex_height: pose.height + vz,
            });
            prev = Some((angles, pose));
        }
        Some(Self { samples: out })
    }

    /// Index of the lowest vertex sample.
    pub fn nadir_index(&self) -> usize {
        self.samples
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.vertex_height.total_cmp(&b.1.vertex_height))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn nadir(&self) -> &SwoopSample {
        &self.samples[self.nadir_index()]
    }

    /// Sample at a playback fraction, linearly interpolated.
    pub fn at(&self, progress: f64) -> SwoopSample {
        let n = self.samples.len();
        let x = progress.clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (x.floor() as usize).min(n - 2);
        let t = x - i as f64;
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let lerp = |u: f64, v: f64| u + t * (v - u);
        SwoopSample {
            progress,
            height: lerp(a.height, b.height),
            pitch: lerp(a.pitch, b.pitch),
            advance: lerp(a.advance, b.advance),
            vertex_forward: lerp(a.vertex_forward, b.vertex_forward),
            vertex_height: lerp(a.vertex_height, b.vertex_height),
        }
    }
}
