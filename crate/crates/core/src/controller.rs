//! Picking state machine: acquire the target, steer onto it with the
//! overshoot policy, inspect, swoop, and back off to reapproach.

use serde::{Deserialize, Serialize};

use crate::gait::{
    steer_turn_value_from_azimuth, turn_value_from_steer_param, ArcGoal, GaitError, GaitParams, SteeringCalibration,
    MAX_TURN_VALUE,
};
use crate::geometry::{in_pick_zone, PickZone, SphericalTarget};
use crate::simulator::{Command, MotionModel, PickOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Acquire,
    SteerWalk,
    Inspect,
    Swoop,
    BackOff,
    StraightApproach,
    Done,
    Failed,
}

impl Mode {
    pub fn is_terminal(self) -> bool {
        matches!(self, Mode::Done | Mode::Failed)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Acquire => "Acquire",
            Mode::SteerWalk => "SteerWalk",
            Mode::Inspect => "Inspect",
            Mode::Swoop => "Swoop",
            Mode::BackOff => "BackOff",
            Mode::StraightApproach => "StraightApproach",
            Mode::Done => "Done",
            Mode::Failed => "Failed",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteeringPolicy {
    /// Azimuth-to-turn-value calibration table.
    #[default]
    Calibrated,
    /// Arc through the target solved against the simulated arc radius.
    ArcSolver,
}

impl std::str::FromStr for SteeringPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "calibrated" => Ok(SteeringPolicy::Calibrated),
            "arc-solver" => Ok(SteeringPolicy::ArcSolver),
            other => Err(format!("unknown steering policy {other:?} (expected calibrated or arc-solver)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControllerConfig {
    pub pick_zone: PickZone,
    /// Camera-to-target distance at which walking stops, meters.
    pub stop_distance: f64,
    pub max_overshoots: u32,
    pub max_attempts: u32,
    /// Magnitude of the turn value used while backing off.
    pub backoff_turn: f64,
    /// Ticks the last command is held after the target is lost.
    pub lost_hold_ticks: u32,
    /// Length of the first acquisition sweep in ticks; each reversal
    /// adds another sweep length.
    pub acquire_sweep_ticks: u32,
    /// Back-off/reapproach cycles allowed before giving up.
    pub max_reapproaches: u32,
    /// Control period, seconds.
    pub period: f64,
    pub steering: SteeringPolicy,
    /// Camera position ahead of the chassis origin, used by the arc solver.
    pub camera_forward: f64,
    /// Robot models used by the arc solver; filled in from the world.
    #[serde(skip)]
    pub gait: GaitParams,
    #[serde(skip)]
    pub motion: MotionModel,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            pick_zone: PickZone::default(),
            stop_distance: 0.20,
            max_overshoots: 5,
            max_attempts: 3,
            backoff_turn: MAX_TURN_VALUE,
            lost_hold_ticks: 5,
            acquire_sweep_ticks: 15,
            max_reapproaches: 6,
            period: 0.2,
            steering: SteeringPolicy::Calibrated,
            camera_forward: 0.42,
            gait: GaitParams::default(),
            motion: MotionModel::default(),
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.stop_distance > 0.0) {
            return Err("stop_distance must be > 0".into());
        }
        if !(self.backoff_turn > 0.0 && self.backoff_turn <= MAX_TURN_VALUE) {
            return Err("backoff_turn must be in (0, 0.3]".into());
        }
        if !(self.period > 0.0) {
            return Err("period must be > 0".into());
        }
        if self.acquire_sweep_ticks == 0 {
            return Err("acquire_sweep_ticks must be > 0".into());
        }
        self.pick_zone.validate().map_err(|e| e.to_string())?;
        self.gait.validate().map_err(|e| e.to_string())?;
        self.motion.validate().map_err(|e| e.to_string())?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerState {
    pub mode: Mode,
    pub last_target: Option<SphericalTarget>,
    /// Overshoots in the current steering run.
    pub overshoot_count: u32,
    pub overshoots_total: u32,
    pub attempts: u32,
    pub reapproaches: u32,
    /// Number of back-off manoeuvres started.
    pub backoffs: u32,
    lost_ticks: u32,
    last_command: Command,
    sweep_clockwise: bool,
    sweep_ticks: u32,
    sweep_length: u32,
}

impl Default for ControllerState {
    fn default() -> Self {
        Self {
            mode: Mode::Acquire,
            last_target: None,
            overshoot_count: 0,
            overshoots_total: 0,
            attempts: 0,
            reapproaches: 0,
            backoffs: 0,
            lost_ticks: 0,
            last_command: Command::Idle,
            sweep_clockwise: true,
            sweep_ticks: 0,
            sweep_length: 0,
        }
    }
}

fn sign_flipped(previous: f64, current: f64) -> bool {
    (previous > 0.0 && current < 0.0) || (previous < 0.0 && current > 0.0)
}

impl ControllerState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn overshoot_total(&self) -> u32 {
        self.overshoots_total
    }

    pub fn last_command(&self) -> Command {
        self.last_command
    }

    /// True iff the azimuth strictly changed sign since the previous
    /// observation while steering; counts the overshoot.
    pub fn detect_overshoot(&mut self, observation: &SphericalTarget) -> bool {
        if self.mode != Mode::SteerWalk {
            return false;
        }
        let flipped = self.last_target.is_some_and(|prev| sign_flipped(prev.azimuth, observation.azimuth));
        if flipped {
            self.overshoot_count += 1;
            self.overshoots_total += 1;
        }
        flipped
    }

    /// Report the result of the swoop the controller asked for.
    pub fn swoop_finished(&mut self, outcome: PickOutcome, cfg: &ControllerConfig) {
        if self.mode != Mode::Swoop {
            return;
        }
        match outcome {
            PickOutcome::Picked(_) => self.mode = Mode::Done,
            PickOutcome::Missed(_) => {
                self.attempts += 1;
                if self.attempts > cfg.max_attempts {
                    self.mode = Mode::Failed;
                } else {
                    self.enter_backoff();
                }
            }
        }
    }

    /// The swoop could not be resolved against any dandelion.
    pub fn swoop_unresolved(&mut self, cfg: &ControllerConfig) {
        if self.mode == Mode::Swoop {
            self.attempts += 1;
            self.mode = if self.attempts > cfg.max_attempts { Mode::Failed } else { Mode::Acquire };
        }
    }

    fn enter_backoff(&mut self) {
        self.mode = Mode::BackOff;
        self.backoffs += 1;
    }

    fn enter_acquire(&mut self) {
        self.mode = Mode::Acquire;
        self.sweep_ticks = 0;
        self.sweep_length = 0;
        self.lost_ticks = 0;
    }

    /// One control step. Terminal modes always emit `Idle`.
    pub fn tick(&mut self, observation: Option<SphericalTarget>, cfg: &ControllerConfig) -> Command {
        let command = self.decide(observation, cfg);
        if let Some(t) = observation {
            self.last_target = Some(t);
            self.lost_ticks = 0;
        }
        self.last_command = command;
        command
    }

    fn steer(&self, t: &SphericalTarget, cfg: &ControllerConfig) -> f64 {
        match cfg.steering {
            SteeringPolicy::Calibrated => steer_turn_value_from_azimuth(t.azimuth),
            SteeringPolicy::ArcSolver => arc_turn_value(t, cfg),
        }
    }

    fn backoff_command(&self, azimuth: f64, cfg: &ControllerConfig) -> Command {
        // Reversing with T < 0 swings the nose right.
        let turn = if azimuth > 0.0 {
            -cfg.backoff_turn
        } else if azimuth < 0.0 {
            cfg.backoff_turn
        } else {
            0.0
        };
        Command::backward(turn)
    }

    fn lost(&mut self, cfg: &ControllerConfig) -> Command {
        self.lost_ticks += 1;
        if self.lost_ticks <= cfg.lost_hold_ticks {
            self.last_command
        } else {
            self.enter_acquire();
            self.acquire_step(cfg)
        }
    }

    fn acquire_step(&mut self, cfg: &ControllerConfig) -> Command {
        if self.sweep_length == 0 {
            self.sweep_length = cfg.acquire_sweep_ticks;
        }
        if self.sweep_ticks >= self.sweep_length {
            self.sweep_clockwise = !self.sweep_clockwise;
            self.sweep_ticks = 0;
            self.sweep_length += 2 * cfg.acquire_sweep_ticks;
        }
        self.sweep_ticks += 1;
        Command::TurnInPlace { clockwise: self.sweep_clockwise }
    }

    fn decide(&mut self, observation: Option<SphericalTarget>, cfg: &ControllerConfig) -> Command {
        let in_zone = |t: &SphericalTarget| in_pick_zone(t.azimuth, t.elevation, &cfg.pick_zone);
        match self.mode {
            Mode::Done | Mode::Failed => Command::Idle,
            Mode::Acquire => match observation {
                Some(t) => {
                    self.mode = Mode::SteerWalk;
                    self.last_target = None;
                    self.decide(Some(t), cfg)
                }
                None => self.acquire_step(cfg),
            },
            Mode::SteerWalk => match observation {
                Some(t) => {
                    self.detect_overshoot(&t);
                    if self.overshoot_count > cfg.max_overshoots {
                        self.overshoot_count = 0;
                        self.enter_backoff();
                        return self.backoff_command(t.azimuth, cfg);
                    }
                    if t.distance <= cfg.stop_distance {
                        self.mode = Mode::Inspect;
                        return Command::Idle;
                    }
                    Command::forward(self.steer(&t, cfg))
                }
                None => self.lost(cfg),
            },
            Mode::Inspect => match observation {
                Some(t) if in_zone(&t) => {
                    self.mode = Mode::Swoop;
                    Command::Swoop
                }
                Some(t) => {
                    self.enter_backoff();
                    self.backoff_command(t.azimuth, cfg)
                }
                None => {
                    self.enter_backoff();
                    let az = self.last_target.map_or(0.0, |t| t.azimuth);
                    self.backoff_command(az, cfg)
                }
            },
            Mode::Swoop => Command::Swoop,
            Mode::BackOff => match observation {
                Some(t) if in_zone(&t) => {
                    self.reapproaches += 1;
                    if self.reapproaches > cfg.max_reapproaches {
                        self.mode = Mode::Failed;
                        return Command::Idle;
                    }
                    self.mode = Mode::StraightApproach;
                    if t.distance <= cfg.stop_distance {
                        self.mode = Mode::Inspect;
                        return Command::Idle;
                    }
                    Command::forward(0.0)
                }
                Some(t) => self.backoff_command(t.azimuth, cfg),
                None => self.lost(cfg),
            },
            Mode::StraightApproach => match observation {
                Some(t) if !in_zone(&t) => {
                    self.enter_backoff();
                    self.backoff_command(t.azimuth, cfg)
                }
                Some(t) if t.distance <= cfg.stop_distance => {
                    self.mode = Mode::Inspect;
                    Command::Idle
                }
                Some(_) => Command::forward(0.0),
                None => self.lost(cfg),
            },
        }
    }
}

/// Functional form of [`ControllerState::tick`].
pub fn tick(
    state: &ControllerState,
    observation: Option<SphericalTarget>,
    cfg: &ControllerConfig,
) -> (Command, ControllerState) {
    let mut next = state.clone();
    let command = next.tick(observation, cfg);
    (command, next)
}

fn arc_turn_value(t: &SphericalTarget, cfg: &ControllerConfig) -> f64 {
    let ground = t.distance * t.elevation.to_radians().cos();
    let (s, c) = t.azimuth.to_radians().sin_cos();
    let goal = ArcGoal::from_offset(cfg.camera_forward + ground * c, ground * s);
    match turn_value_from_steer_param(&goal, &cfg.gait, &cfg.motion) {
        Ok(sol) => sol.turn_value,
        Err(GaitError::UnreachableRadius { .. }) => MAX_TURN_VALUE.copysign(t.azimuth),
        Err(_) => 0.0,
    }
}

/// Steering value the calibrated policy would use with a custom table.
pub fn calibrated_turn_value(table: &SteeringCalibration, azimuth: f64) -> f64 {
    table.turn_value(azimuth)
}
