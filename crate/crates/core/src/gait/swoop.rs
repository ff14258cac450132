use super::{BuehlerClock, GaitRow, GaitTable, ShaftAngles, StampKind, ToeTrajectory};

/// Keyframes of the pick manoeuvre as (phase stamp, front, mid, hind)
/// shaft offsets in degrees from mid-stance. Left and right legs of each
/// pair share the same command.
const KEYFRAMES: [(f64, f64, f64, f64); 8] = [
    // standing
    (0.00, 0.0, 0.0, 0.0),
    // (a) slack: every toe near the top of its arch
    (0.18, -150.0, -150.0, -150.0),
    // (b) hind pair down to the lowest toe point, nose pitches down
    (0.36, -150.0, -150.0, 0.0),
    // (c) front and hind pairs turn in opposite directions
    (0.50, -165.0, -160.0, 10.0),
    // (d) appendage at the bottom of its arc
    (0.60, -180.0, -170.0, 20.0),
    // all pairs at the apex: chassis at its lowest
    (0.70, -180.0, -180.0, 180.0),
    // (e) mid pair swiftly lowered, hind pushes slightly forward
    (0.80, -180.0, -20.0, 190.0),
    // back to standing
    (1.00, 0.0, 0.0, 360.0),
];

/// Builds the swoop gait table for the given clock. Stamps are phase
/// fractions of the playback.
pub fn swoop_plan(clock: &BuehlerClock, traj: &ToeTrajectory) -> GaitTable {
    let c = clock.stance_center;
    debug_assert!((traj.stance_center - c).abs() < 1e-9);
    let rows = KEYFRAMES
        .iter()
        .map(|&(stamp, f, m, h)| GaitRow { stamp, positions: ShaftAngles::symmetric(c + f, c + m, c + h).to_array() })
        .collect();
    GaitTable::new(StampKind::Phase, rows).expect("keyframe stamps increase")
}
