use std::io::{Read, Write};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{GaitError, MAX_TURN_VALUE};

pub const CALIBRATION_HEADER: [&str; 2] = ["azimuth", "turn_value"];

const DEFAULT_TABLE: &str = include_str!("../../assets/steering_calibration.csv");

/// Piecewise-linear map from target azimuth (degrees) to turn value.
///
/// Knots are strictly increasing in azimuth with nondecreasing turn
/// values; outside the knot range the end values are held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringCalibration {
    knots: Vec<(f64, f64)>,
}

impl SteeringCalibration {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, GaitError> {
        if knots.is_empty() {
            return Err(GaitError::InvalidCalibration("no knots".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(GaitError::InvalidCalibration(format!(
                    "azimuths must increase strictly ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(GaitError::InvalidCalibration(format!(
                    "turn values must be nondecreasing (at azimuth {})",
                    w[1].0
                )));
            }
        }
        if knots.iter().any(|k| !k.0.is_finite() || !(k.1.abs() <= MAX_TURN_VALUE)) {
            return Err(GaitError::InvalidCalibration("turn values must lie in [-0.3, 0.3]".into()));
        }
        Ok(Self { knots })
    }

    /// The table shipped with the crate.
    pub fn shipped() -> &'static SteeringCalibration {
        static TABLE: OnceLock<SteeringCalibration> = OnceLock::new();
        TABLE.get_or_init(|| read_calibration(DEFAULT_TABLE.as_bytes()).expect("shipped calibration table is valid"))
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Turn value for `azimuth`. The table is antisymmetrized on lookup
    /// so the map is exactly odd.
    pub fn turn_value(&self, azimuth: f64) -> f64 {
        (0.5 * (self.interpolate(azimuth) - self.interpolate(-azimuth))).clamp(-MAX_TURN_VALUE, MAX_TURN_VALUE)
    }

    fn interpolate(&self, azimuth: f64) -> f64 {
        let k = &self.knots;
        if azimuth <= k[0].0 {
            k[0].1
        } else if azimuth >= k[k.len() - 1].0 {
            k[k.len() - 1].1
        } else {
            let i = k.partition_point(|p| p.0 <= azimuth);
            let (a, b) = (k[i - 1], k[i]);
            a.1 + (b.1 - a.1) * (azimuth - a.0) / (b.0 - a.0)
        }
    }

    /// Largest deviation from odd symmetry over the knots.
    pub fn odd_asymmetry(&self) -> f64 {
        self.knots.iter().map(|&(a, t)| (t + self.turn_value(-a)).abs()).fold(0.0, f64::max)
    }
}

/// Turn value for a target at `azimuth` degrees, from the shipped
/// calibration curve.
pub fn steer_turn_value_from_azimuth(azimuth: f64) -> f64 {
    SteeringCalibration::shipped().turn_value(azimuth)
}

pub fn write_calibration<W: Write>(table: &SteeringCalibration, out: W) -> Result<(), GaitError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CALIBRATION_HEADER)?;
    for (a, t) in &table.knots {
        w.write_record([a.to_string(), t.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_calibration<R: Read>(input: R) -> Result<SteeringCalibration, GaitError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(|e| GaitError::Parse { row: 1, message: e.to_string() })?;
    if header.iter().ne(CALIBRATION_HEADER) {
        return Err(GaitError::Parse { row: 1, message: "expected header 'azimuth,turn_value'".into() });
    }
    let mut knots = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| GaitError::Parse { row, message: e.to_string() })?;
        let parse = |k: usize| -> Result<f64, GaitError> {
            rec.get(k)
                .ok_or_else(|| GaitError::Parse { row, message: "missing column".into() })?
                .parse::<f64>()
                .map_err(|e| GaitError::Parse { row, message: e.to_string() })
        };
        knots.push((parse(0)?, parse(1)?));
    }
    SteeringCalibration::new(knots)
}
