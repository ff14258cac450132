use super::{CameraModel, RgbdFrame};
use crate::simulator::{ChassisState, DandelionSpec, DandelionState};

/// Lawn colour of the synthetic background.
pub const LAWN_GREEN: [u8; 3] = [46, 139, 52];
/// Colour of a rendered flower head.
pub const FLOWER_YELLOW: [u8; 3] = [250, 218, 24];

/// Renders what the camera sees from `robot`.
///
/// The background is a flat lawn colour with no depth return. Every
/// standing dandelion in view becomes a filled disk centred on the
/// projection of its head, with a radius set by the head's angular
/// size; its depth pixels hold the line-of-sight range to the head
/// centre. Nearer heads are painted over farther ones.
pub fn render_frame(
    dandelions: &[DandelionSpec],
    camera: &CameraModel,
    robot: &ChassisState,
    vertex_offset: f64,
) -> RgbdFrame {
    let mut frame = RgbdFrame::filled(camera.width, camera.height, LAWN_GREEN);
    let pose = camera.pose_for(robot, vertex_offset);
    let mut visible: Vec<_> = dandelions
        .iter()
        .filter(|d| d.state == DandelionState::Standing)
        .filter_map(|d| {
            let t = camera.observe(&pose, (d.x, d.y, d.height))?;
            let radius_deg = (d.head_radius / t.distance).atan().to_degrees();
            Some((t, radius_deg / camera.deg_per_px_x()))
        })
        .collect();
    visible.sort_by(|a, b| b.0.distance.total_cmp(&a.0.distance));

    let (w, h) = (camera.width as f64, camera.height as f64);
    for (t, r) in visible {
        let (cx, cy) = camera.angles_to_pixel(t.azimuth, t.elevation);
        if cx + r < 0.0 || cy + r < 0.0 || cx - r > w - 1.0 || cy - r > h - 1.0 {
            continue;
        }
        let x0 = (cx - r).ceil().max(0.0) as usize;
        let x1 = (cx + r).floor().min(w - 1.0) as usize;
        let y0 = (cy - r).ceil().max(0.0) as usize;
        let y1 = (cy + r).floor().min(h - 1.0) as usize;
        let r2 = r * r;
        let depth = t.distance as f32;
        for y in y0..=y1 {
            let dy = y as f64 - cy;
            for x in x0..=x1 {
                let dx = x as f64 - cx;
                if dx * dx + dy * dy <= r2 {
                    frame.set(x, y, FLOWER_YELLOW, depth);
                }
            }
        }
    }
    frame
}
