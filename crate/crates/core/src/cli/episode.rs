use serde::{Deserialize, Serialize};

use super::{CliError, Scenario};
use crate::controller::{ControllerState, Mode, SteeringPolicy};
use crate::geometry::{spherical_to_cylindrical_with, CutMode, CylindricalTarget, GammaFormula};
use crate::perception::detect_dandelion;
use crate::simulator::{ChassisState, LogRecord, PickOutcome, SimError, TrajectoryLog, WorldConfig, WorldState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeOptions {
    pub seed: u64,
    pub noise: bool,
    pub steering: SteeringPolicy,
    pub gamma: GammaFormula,
}

impl EpisodeOptions {
    /// Options taken from the scenario file itself.
    pub fn from_scenario(s: &Scenario) -> Self {
        Self { seed: s.seed, noise: s.noise, steering: s.controller.steering, gamma: GammaFormula::Paper }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Picked,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeReport {
    pub seed: u64,
    pub outcome: Outcome,
    pub cut_mode: Option<CutMode>,
    /// Simulated seconds until the pick, when there was one.
    pub time_to_pick: Option<f64>,
    pub sim_time: f64,
    pub path_length: f64,
    pub overshoot_count: u32,
    pub backoffs: u32,
    pub attempts: u32,
    pub final_mode: Mode,
    pub final_pose: ChassisState,
    /// First detection in cylindrical coordinates.
    pub initial_target: Option<CylindricalTarget>,
    pub ticks: usize,
}

pub fn world_config(s: &Scenario, noise: bool) -> WorldConfig {
    WorldConfig {
        motion: s.motion,
        blade: s.blade,
        camera: s.camera,
        pick_zone: s.controller.pick_zone,
        noise,
        ..WorldConfig::default()
    }
}

/// Run the controller against the simulated world until it reaches a
/// terminal mode or the time budget runs out.
pub fn run_episode(s: &Scenario, opts: &EpisodeOptions) -> Result<(EpisodeReport, TrajectoryLog), CliError> {
    s.validate()?;
    let config = world_config(s, opts.noise);
    let mut world = WorldState::new(config.clone(), s.robot.chassis(), s.dandelions.clone(), opts.seed)?;
    let mut cfg = s.controller.clone();
    cfg.steering = opts.steering;
    cfg.gait = config.gait;
    cfg.motion = config.motion;
    cfg.camera_forward = config.blade.vertex_offset - config.camera.mount_offset;
    let dt = cfg.period;
    let max_ticks = (s.max_time / dt).ceil() as usize;

    let mut ctrl = ControllerState::new();
    let mut log = TrajectoryLog::default();
    let mut initial_target = None;
    let mut seen = false;
    let mut cut_mode = None;
    let mut time_to_pick = None;
    let mut k = 0usize;
    while k < max_ticks && !ctrl.mode.is_terminal() {
        let t = k as f64 * dt;
        let detection = detect_dandelion(&world.render(), &config.camera);
        if !seen {
            if let Some(d) = detection {
                seen = true;
                initial_target = spherical_to_cylindrical_with(&d, opts.gamma).ok();
            }
        }
        let command = ctrl.tick(detection, &cfg);
        log.push(LogRecord::new(t, world.robot, ctrl.mode.name(), &command, detection));
        world.step(&command, dt)?;
        k += 1;
        if world.swoop_finished() {
            match world.attempt_pick(&config.blade) {
                Ok((_, outcome)) => {
                    if let PickOutcome::Picked(mode) = outcome {
                        cut_mode = Some(mode);
                        time_to_pick = Some(k as f64 * dt);
                    }
                    ctrl.swoop_finished(outcome, &cfg);
                }
                Err(SimError::NoStandingDandelionInRange(_)) => ctrl.swoop_unresolved(&cfg),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let outcome = if ctrl.mode == Mode::Done { Outcome::Picked } else { Outcome::Failed };
    let report = EpisodeReport {
        seed: opts.seed,
        outcome,
        cut_mode,
        time_to_pick,
        sim_time: k as f64 * dt,
        path_length: world.path_length(),
        overshoot_count: ctrl.overshoot_total(),
        backoffs: ctrl.backoffs,
        attempts: ctrl.attempts,
        final_mode: ctrl.mode,
        final_pose: world.robot,
        initial_target,
        ticks: k,
    };
    Ok((report, log))
}
