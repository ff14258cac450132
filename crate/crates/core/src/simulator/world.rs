use std::cell::OnceCell;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::kinematics::{body_pose, SwoopTrack};
use super::{MotionModel, SimError};
use crate::gait::{swoop_plan, BuehlerClock, GaitParams, GaitTable, ShaftAngles, ToeTrajectory, MAX_TURN_VALUE};
use crate::geometry::{BladeGeometry, PickZone, SphericalTarget};
use crate::perception::{render_frame, CameraModel, RgbdFrame};

/// Planar pose plus chassis height and pitch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChassisState {
    pub x: f64,
    pub y: f64,
    /// Degrees counter-clockwise from +x.
    pub heading: f64,
    pub height: f64,
    /// Degrees, positive nose-up.
    pub pitch: f64,
}

impl Default for ChassisState {
    fn default() -> Self {
        Self { x: 0.0, y: 0.0, heading: 0.0, height: 0.31, pitch: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DandelionState {
    #[default]
    Standing,
    Picked,
    Missed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DandelionSpec {
    pub x: f64,
    pub y: f64,
    pub stem_radius: f64,
    /// Height of the flower head above ground.
    pub height: f64,
    #[serde(default = "default_head_radius")]
    pub head_radius: f64,
    #[serde(default)]
    pub state: DandelionState,
}

fn default_head_radius() -> f64 {
    0.02
}

impl DandelionSpec {
    pub fn new(x: f64, y: f64, stem_radius: f64, height: f64) -> Self {
        Self { x, y, stem_radius, height, head_radius: default_head_radius(), state: DandelionState::Standing }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.stem_radius > 0.0) || !(self.height > 0.0) || !(self.head_radius > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "dandelion at ({}, {}) needs positive stem_radius, height and head_radius",
                self.x, self.y
            )));
        }
        if !self.x.is_finite() || !self.y.is_finite() {
            return Err(SimError::InvalidConfig("dandelion position must be finite".into()));
        }
        Ok(())
    }
}

/// Everything fixed about a simulated robot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub motion: MotionModel,
    pub gait: GaitParams,
    pub clock: BuehlerClock,
    pub toe: ToeTrajectory,
    pub blade: BladeGeometry,
    pub camera: CameraModel,
    pub pick_zone: PickZone,
    /// Body-frame height of the blade vertex relative to the chassis origin.
    pub vertex_body_z: f64,
    /// Seconds taken to play the swoop table.
    pub swoop_duration: f64,
    /// Gait variability (stride and turn jitter) on or off.
    pub noise: bool,
    /// How far from the swoop nadir a standing dandelion may be and
    /// still count as the one being picked.
    pub pick_search_radius: f64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        let clock = BuehlerClock::default();
        Self {
            motion: MotionModel::default(),
            gait: GaitParams::default(),
            clock,
            toe: ToeTrajectory::for_clock(&clock),
            blade: BladeGeometry::default(),
            camera: CameraModel::default(),
            pick_zone: PickZone::default(),
            vertex_body_z: -0.135,
            swoop_duration: 12.0,
            noise: false,
            pick_search_radius: 0.5,
        }
    }
}

impl WorldConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.motion.validate()?;
        self.gait.validate()?;
        self.clock.validate()?;
        self.toe.validate()?;
        self.blade.validate()?;
        self.camera.validate()?;
        self.pick_zone.validate()?;
        if !(self.swoop_duration > 0.0) {
            return Err(SimError::InvalidConfig("swoop_duration must be > 0".into()));
        }
        if !(self.pick_search_radius > 0.0) {
            return Err(SimError::InvalidConfig("pick_search_radius must be > 0".into()));
        }
        Ok(())
    }

    pub fn swoop_table(&self) -> GaitTable {
        swoop_plan(&self.clock, &self.toe)
    }

    pub fn swoop_track(&self) -> SwoopTrack {
        SwoopTrack::compute(&self.swoop_table(), &self.toe, (self.blade.vertex_offset, self.vertex_body_z), 2001)
            .expect("swoop table is non-empty")
    }

    /// Chassis height with every toe at mid-stance.
    pub fn stand_height(&self) -> f64 {
        let c = self.clock.stance_center;
        body_pose(&ShaftAngles::symmetric(c, c, c), &self.toe).height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// One control command for the simulated robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Command {
    Idle,
    Walk { direction: Direction, turn_value: f64 },
    TurnInPlace { clockwise: bool },
    Swoop,
}

impl Command {
    pub fn turn_value(&self) -> f64 {
        match self {
            Command::Walk { turn_value, .. } => *turn_value,
            _ => 0.0,
        }
    }

    pub fn forward(turn_value: f64) -> Self {
        Command::Walk { direction: Direction::Forward, turn_value }
    }

    pub fn backward(turn_value: f64) -> Self {
        Command::Walk { direction: Direction::Backward, turn_value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Motion {
    Still,
    Walking(Direction),
    Spinning,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SwoopStatus {
    Idle,
    Playing { start: ChassisState, elapsed: f64 },
    Finished { start: ChassisState },
}

/// Deterministic kinematic world: one robot and a dandelion population.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub robot: ChassisState,
    pub dandelions: Vec<DandelionSpec>,
    /// Simulated seconds.
    pub clock: f64,
    pub rng_seed: u64,
    pub(crate) config: WorldConfig,
    track: OnceCell<SwoopTrack>,
    rng: ChaCha8Rng,
    motion: Motion,
    /// Gait phase within the current walking bout.
    phase: f64,
    /// Turn value latched at the start of the current gait cycle.
    active_turn: f64,
    stride_multiplier: f64,
    turn_offset: f64,
    pub(crate) swoop: SwoopStatus,
    odometer: f64,
}

impl WorldState {
    pub fn new(
        config: WorldConfig,
        robot: ChassisState,
        dandelions: Vec<DandelionSpec>,
        rng_seed: u64,
    ) -> Result<Self, SimError> {
        config.validate()?;
        for d in &dandelions {
            d.validate()?;
        }
        if !(robot.height >= 0.0) {
            return Err(SimError::InvalidConfig("robot height must be >= 0".into()));
        }
        let mut robot = robot;
        robot.height = config.stand_height();
        robot.pitch = 0.0;
        Ok(Self {
            robot,
            dandelions,
            clock: 0.0,
            rng_seed,
            config,
            track: OnceCell::new(),
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
            motion: Motion::Still,
            phase: 0.0,
            active_turn: 0.0,
            stride_multiplier: 1.0,
            turn_offset: 0.0,
            swoop: SwoopStatus::Idle,
            odometer: 0.0,
        })
    }

    pub fn config(&self) -> &WorldConfig {
        &self.config
    }

    pub fn swoop_track(&self) -> &SwoopTrack {
        self.track.get_or_init(|| self.config.swoop_track())
    }

    /// Horizontal distance travelled by the chassis origin.
    pub fn path_length(&self) -> f64 {
        self.odometer
    }

    pub fn swoop_playing(&self) -> bool {
        matches!(self.swoop, SwoopStatus::Playing { .. })
    }

    pub fn swoop_finished(&self) -> bool {
        matches!(self.swoop, SwoopStatus::Finished { .. })
    }

    /// Turn value the gait is currently executing.
    pub fn active_turn_value(&self) -> f64 {
        self.active_turn
    }

    pub fn render(&self) -> RgbdFrame {
        render_frame(&self.dandelions, &self.config.camera, &self.robot, self.config.blade.vertex_offset)
    }

    /// Exact camera-frame coordinates of dandelion `idx` from `robot`.
    pub fn observe_from(&self, robot: &ChassisState, idx: usize) -> Option<SphericalTarget> {
        let d = self.dandelions.get(idx)?;
        let pose = self.config.camera.pose_for(robot, self.config.blade.vertex_offset);
        self.config.camera.observe(&pose, (d.x, d.y, d.height))
    }

    pub fn observe_truth(&self, idx: usize) -> Option<SphericalTarget> {
        self.observe_from(&self.robot, idx)
    }

    /// Advance the world by `dt` seconds under `command`.
    ///
    /// Walking turn values take effect at gait-cycle boundaries: a new
    /// bout (starting to walk or reversing) adopts the command at once,
    /// afterwards the latest command is latched each time a cycle
    /// completes. While a swoop plays, commands are ignored.
    pub fn step(&mut self, command: &Command, dt: f64) -> Result<(), SimError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SimError::InvalidStep(dt));
        }
        if let SwoopStatus::Playing { start, elapsed } = self.swoop {
            self.advance_swoop(start, elapsed, dt);
            self.clock += dt;
            return Ok(());
        }
        match *command {
            Command::Idle => self.motion = Motion::Still,
            Command::Swoop => {
                self.motion = Motion::Still;
                let start = self.robot;
                self.advance_swoop(start, 0.0, dt);
            }
            Command::TurnInPlace { clockwise } => {
                self.motion = Motion::Spinning;
                let rate = if clockwise { -self.config.motion.spin_rate } else { self.config.motion.spin_rate };
                self.robot.heading = wrap_degrees(self.robot.heading + rate * dt);
            }
            Command::Walk { direction, turn_value } => {
                if !(turn_value.abs() <= MAX_TURN_VALUE) {
                    return Err(SimError::TurnOutOfRange(turn_value));
                }
                self.walk(direction, turn_value, dt)?;
            }
        }
        self.clock += dt;
        Ok(())
    }

    fn draw_stride_multiplier(&mut self) -> f64 {
        let sigma = self.config.motion.stride_noise_sigma;
        if !self.config.noise || sigma == 0.0 {
            return 1.0;
        }
        let normal = Normal::new(1.0, sigma).expect("sigma validated");
        normal.sample(&mut self.rng).clamp(0.8, 1.2)
    }

    /// Redraw the per-cycle gait variability: stride multiplier first,
    /// then the turn offset, so noise-on streams stay reproducible.
    fn draw_cycle_noise(&mut self) {
        self.stride_multiplier = self.draw_stride_multiplier();
        let sigma = self.config.motion.turn_noise_sigma;
        self.turn_offset = if !self.config.noise || sigma == 0.0 {
            0.0
        } else {
            let normal = Normal::new(0.0, sigma).expect("sigma validated");
            normal.sample(&mut self.rng).clamp(-3.0 * sigma, 3.0 * sigma)
        };
    }

    fn walk(&mut self, direction: Direction, turn_value: f64, dt: f64) -> Result<(), SimError> {
        if self.motion != Motion::Walking(direction) {
            self.motion = Motion::Walking(direction);
            self.phase = 0.0;
            self.active_turn = turn_value;
            self.draw_cycle_noise();
        }
        let f = self.config.gait.frequency;
        let sign = match direction {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        let mut remaining = dt;
        while remaining > 0.0 {
            let to_boundary = (self.phase.floor() + 1.0 - self.phase) / f;
            let sub = remaining.min(to_boundary);
            let speed = sign * self.config.motion.speed(&self.config.gait) * self.stride_multiplier;
            let executed = (self.active_turn + self.turn_offset).clamp(-MAX_TURN_VALUE, MAX_TURN_VALUE);
            let curvature = self.config.motion.curvature(executed)?;
            self.integrate_arc(speed * sub, curvature);
            if to_boundary <= remaining {
                self.phase = self.phase.floor() + 1.0;
                remaining -= to_boundary;
                self.active_turn = turn_value;
                self.draw_cycle_noise();
            } else {
                self.phase += sub * f;
                remaining = 0.0;
            }
        }
        Ok(())
    }

    /// Move `distance` meters (signed) along an arc of signed curvature
    /// (positive turns right).
    fn integrate_arc(&mut self, distance: f64, curvature: f64) {
        let h0 = self.robot.heading.to_radians();
        if curvature == 0.0 {
            self.robot.x += distance * h0.cos();
            self.robot.y += distance * h0.sin();
        } else {
            let h1 = h0 - distance * curvature;
            self.robot.x -= (h1.sin() - h0.sin()) / curvature;
            self.robot.y += (h1.cos() - h0.cos()) / curvature;
            self.robot.heading = wrap_degrees(h1.to_degrees());
        }
        self.odometer += distance.abs();
    }

    fn advance_swoop(&mut self, start: ChassisState, elapsed: f64, dt: f64) {
        let duration = self.config.swoop_duration;
        let track = self.swoop_track();
        let before = track.at(elapsed / duration);
        // Snap accumulated tick sums onto the end of the swoop.
        let now = if elapsed + dt >= duration - 1e-9 { duration } else { elapsed + dt };
        let after = track.at(now / duration);
        let step = after.advance - before.advance;
        let (s, c) = self.robot.heading.to_radians().sin_cos();
        self.robot.x += step * c;
        self.robot.y += step * s;
        self.odometer += step.abs();
        self.robot.height = after.height;
        self.robot.pitch = after.pitch;
        self.swoop = if now >= duration {
            SwoopStatus::Finished { start }
        } else {
            SwoopStatus::Playing { start, elapsed: now }
        };
    }
}

/// Functional form of [`WorldState::step`].
pub fn step(world: &WorldState, command: &Command, dt: f64) -> Result<WorldState, SimError> {
    let mut next = world.clone();
    next.step(command, dt)?;
    Ok(next)
}

/// Wrap to (-180, 180].
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    if w > 180.0 {
        w - 360.0
    } else {
        w
    }
}
