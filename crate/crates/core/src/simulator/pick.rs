use serde::{Deserialize, Serialize};

use super::world::SwoopStatus;
use super::{DandelionState, SimError, WorldState};
use crate::geometry::{critical_distance, cut_mode, in_pick_zone, BladeGeometry, CutMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissReason {
    /// Target outside the picking zone when the swoop began.
    OutOfZone,
    /// Stem lateral offset exceeds the blade opening.
    OutOfWedge,
    /// The vertex never dropped to the flower head.
    VertexTooHigh,
    /// The vertex stopped short of the stem while low.
    ShortOfReach,
    /// The vertex was already past the stem while low.
    Overrun,
}

impl std::fmt::Display for MissReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MissReason::OutOfZone => "out_of_zone",
            MissReason::OutOfWedge => "out_of_wedge",
            MissReason::VertexTooHigh => "vertex_too_high",
            MissReason::ShortOfReach => "short_of_reach",
            MissReason::Overrun => "overrun",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PickOutcome {
    Picked(CutMode),
    Missed(MissReason),
}

/// Where a stem sits relative to the blade vertex at swoop start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StemOffset {
    pub forward: f64,
    pub lateral: f64,
}

impl WorldState {
    /// Resolve the swoop that just finished against the nearest standing
    /// dandelion. Only that dandelion's state may change.
    pub fn attempt_pick(&mut self, blade: &BladeGeometry) -> Result<(usize, PickOutcome), SimError> {
        let start = match self.swoop {
            SwoopStatus::Finished { start } => start,
            _ => return Err(SimError::NoSwoop),
        };
        self.swoop = SwoopStatus::Idle;
        let (s, c) = start.heading.to_radians().sin_cos();
        let nadir = *self.swoop_track().nadir();
        let nadir_xy = (start.x + nadir.vertex_forward * c, start.y + nadir.vertex_forward * s);
        let radius = self.config.pick_search_radius;
        let idx = self
            .dandelions
            .iter()
            .enumerate()
            .filter(|(_, d)| d.state == DandelionState::Standing)
            .map(|(i, d)| (i, (d.x - nadir_xy.0).hypot(d.y - nadir_xy.1)))
            .filter(|&(_, r)| r <= radius)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .ok_or(SimError::NoStandingDandelionInRange(radius))?;

        let outcome = self.judge(idx, &start, blade);
        if let PickOutcome::Picked(_) = outcome {
            self.dandelions[idx].state = DandelionState::Picked;
        }
        Ok((idx, outcome))
    }

    fn judge(&self, idx: usize, start: &super::ChassisState, blade: &BladeGeometry) -> PickOutcome {
        let d = self.dandelions[idx];
        let (s, c) = start.heading.to_radians().sin_cos();
        let (dx, dy) = (d.x - start.x, d.y - start.y);
        let forward = dx * c + dy * s;
        let lateral = dx * s - dy * c;
        if lateral.abs() > blade.capture_half_width() {
            return PickOutcome::Missed(MissReason::OutOfWedge);
        }
        match self.observe_from(start, idx) {
            Some(t) if in_pick_zone(t.azimuth, t.elevation, &self.config.pick_zone) => {}
            _ => return PickOutcome::Missed(MissReason::OutOfZone),
        }
        let gaps: Vec<f64> = self
            .swoop_track()
            .samples
            .iter()
            .filter(|p| p.vertex_height < d.height + d.head_radius)
            .map(|p| forward - p.vertex_forward)
            .collect();
        if gaps.is_empty() {
            return PickOutcome::Missed(MissReason::VertexTooHigh);
        }
        let reach = critical_distance(d.stem_radius, blade);
        let nearest = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let farthest = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if nearest > reach {
            PickOutcome::Missed(MissReason::ShortOfReach)
        } else if farthest < -reach {
            PickOutcome::Missed(MissReason::Overrun)
        } else {
            PickOutcome::Picked(cut_mode(d.height, blade))
        }
    }

    /// Stem position of dandelion `idx` relative to the current vertex,
    /// forward and lateral (positive right).
    pub fn stem_offset(&self, idx: usize) -> Option<StemOffset> {
        let d = self.dandelions.get(idx)?;
        let (s, c) = self.robot.heading.to_radians().sin_cos();
        let vo = self.config.blade.vertex_offset;
        let (dx, dy) = (d.x - self.robot.x - vo * c, d.y - self.robot.y - vo * s);
        Some(StemOffset { forward: dx * c + dy * s, lateral: dx * s - dy * c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{ChassisState, Command, DandelionSpec, WorldConfig};

    fn swooped(dandelions: Vec<DandelionSpec>) -> WorldState {
        let mut w = WorldState::new(WorldConfig::default(), ChassisState::default(), dandelions, 0).unwrap();
        w.step(&Command::Swoop, 0.1).unwrap();
        while w.swoop_playing() {
            w.step(&Command::Idle, 0.1).unwrap();
        }
        w
    }

    fn on_path(forward: f64, lateral: f64, height: f64) -> DandelionSpec {
        let vo = WorldConfig::default().blade.vertex_offset;
        DandelionSpec::new(vo + forward, -lateral, 0.002, height)
    }

    #[test]
    fn needs_a_finished_swoop() {
        let mut w =
            WorldState::new(WorldConfig::default(), ChassisState::default(), vec![on_path(0.0, 0.0, 0.15)], 0).unwrap();
        let blade = w.config().blade;
        assert!(matches!(w.attempt_pick(&blade), Err(SimError::NoSwoop)));
    }

    #[test]
    fn ideal_slice_and_tensile() {
        for (h, mode) in [(0.15, CutMode::Slice), (0.035, CutMode::TensileFracture)] {
            let mut w = swooped(vec![on_path(0.0, 0.0, h)]);
            let blade = w.config().blade;
            let (i, out) = w.attempt_pick(&blade).unwrap();
            assert_eq!((i, out), (0, PickOutcome::Picked(mode)));
            assert_eq!(w.dandelions[0].state, DandelionState::Picked);
        }
    }

    #[test]
    fn lateral_miss_leaves_others_alone() {
        let mut w = swooped(vec![on_path(0.0, 0.30, 0.15), on_path(5.0, 0.0, 0.15)]);
        let before = w.dandelions.clone();
        let blade = w.config().blade;
        let (i, out) = w.attempt_pick(&blade).unwrap();
        assert_eq!(i, 0);
        assert_eq!(out, PickOutcome::Missed(MissReason::OutOfWedge));
        assert_eq!(w.dandelions, before);
    }

    #[test]
    fn nothing_in_range() {
        let mut w = swooped(vec![on_path(3.0, 0.0, 0.15)]);
        let blade = w.config().blade;
        assert!(matches!(w.attempt_pick(&blade), Err(SimError::NoStandingDandelionInRange(_))));
    }
}
