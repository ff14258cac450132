use std::io::{Read, Write};

use super::{ChassisState, Command, Direction, SimError, WorldState};
use crate::geometry::SphericalTarget;

pub const TRAJECTORY_HEADER: [&str; 11] =
    ["t", "x", "y", "heading", "height", "pitch", "state", "T", "detect_az", "detect_el", "detect_d"];

/// One control tick: the pose at time `t`, the controller state and the
/// command issued from that pose, and what the camera reported.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub t: f64,
    pub pose: ChassisState,
    /// `Mode:command`, e.g. `SteerWalk:fwd`.
    pub state: String,
    pub turn_value: f64,
    pub detection: Option<SphericalTarget>,
}

impl LogRecord {
    pub fn new(t: f64, pose: ChassisState, mode: &str, command: &Command, detection: Option<SphericalTarget>) -> Self {
        Self { t, pose, state: format!("{mode}:{}", command_tag(command)), turn_value: command.turn_value(), detection }
    }

    pub fn mode(&self) -> &str {
        self.state.split(':').next().unwrap_or("")
    }

    pub fn command(&self) -> Option<Command> {
        parse_command(&self.state, self.turn_value)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub records: Vec<LogRecord>,
}

impl TrajectoryLog {
    pub fn push(&mut self, record: LogRecord) {
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        write_trajectory_log(self, &mut out).expect("writing to memory");
        out
    }
}

fn command_tag(command: &Command) -> &'static str {
    match command {
        Command::Idle => "idle",
        Command::Walk { direction: Direction::Forward, .. } => "fwd",
        Command::Walk { direction: Direction::Backward, .. } => "rev",
        Command::TurnInPlace { clockwise: true } => "spin_cw",
        Command::TurnInPlace { clockwise: false } => "spin_ccw",
        Command::Swoop => "swoop",
    }
}

/// Recover the command from a `state` cell and its `T` cell.
pub fn parse_command(state: &str, turn_value: f64) -> Option<Command> {
    let tag = state.rsplit_once(':').map(|(_, t)| t)?;
    Some(match tag {
        "idle" => Command::Idle,
        "fwd" => Command::forward(turn_value),
        "rev" => Command::backward(turn_value),
        "spin_cw" => Command::TurnInPlace { clockwise: true },
        "spin_ccw" => Command::TurnInPlace { clockwise: false },
        "swoop" => Command::Swoop,
        _ => return None,
    })
}

pub fn write_trajectory_log<W: Write>(log: &TrajectoryLog, out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for r in &log.records {
        let (az, el, d) = match r.detection {
            Some(t) => (t.azimuth.to_string(), t.elevation.to_string(), t.distance.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            r.t.to_string(),
            r.pose.x.to_string(),
            r.pose.y.to_string(),
            r.pose.heading.to_string(),
            r.pose.height.to_string(),
            r.pose.pitch.to_string(),
            r.state.clone(),
            r.turn_value.to_string(),
            az,
            el,
            d,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_log<R: Read>(input: R) -> Result<TrajectoryLog, SimError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(TRAJECTORY_HEADER.iter().copied()) {
        return Err(SimError::Log { row: 1, message: "unexpected header".into() });
    }
    let mut log = TrajectoryLog::default();
    for (i, rec) in rd.records().enumerate() {
        let row = i + 2;
        let rec = rec?;
        if rec.len() != TRAJECTORY_HEADER.len() {
            return Err(SimError::Log { row, message: format!("expected 11 fields, got {}", rec.len()) });
        }
        let num = |k: usize| -> Result<f64, SimError> {
            rec[k].parse::<f64>().map_err(|e| SimError::Log { row, message: format!("{}: {e}", TRAJECTORY_HEADER[k]) })
        };
        let detection = if rec[8].is_empty() {
            None
        } else {
            Some(SphericalTarget { azimuth: num(8)?, elevation: num(9)?, distance: num(10)? })
        };
        let state = rec[6].to_string();
        let turn_value = num(7)?;
        if parse_command(&state, turn_value).is_none() {
            return Err(SimError::Log { row, message: format!("unknown state {state:?}") });
        }
        log.push(LogRecord {
            t: num(0)?,
            pose: ChassisState { x: num(1)?, y: num(2)?, heading: num(3)?, height: num(4)?, pitch: num(5)? },
            state,
            turn_value,
            detection,
        });
    }
    Ok(log)
}

/// Re-issue every logged command to `world`, one control period each.
pub fn replay(world: &mut WorldState, log: &TrajectoryLog, dt: f64) -> Result<(), SimError> {
    for (i, r) in log.records.iter().enumerate() {
        let cmd = r.command().ok_or_else(|| SimError::Log { row: i + 2, message: "bad command".into() })?;
        world.step(&cmd, dt)?;
    }
    Ok(())
}
