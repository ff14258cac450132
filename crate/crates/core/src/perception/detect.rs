use super::{
    classify_dandelion, find_blobs, hsv_mask, pixel_to_angles, CameraModel, HsvThresholds, PerceptionError, RgbdFrame,
};
use crate::geometry::SphericalTarget;

/// Mean of the valid (non-zero) depth values inside an inclusive bbox.
pub fn depth_from_bbox(frame: &RgbdFrame, bbox: (usize, usize, usize, usize)) -> Result<f64, PerceptionError> {
    let (x0, y0, x1, y1) = bbox;
    if x0 > x1 || y0 > y1 || x1 >= frame.width() || y1 >= frame.height() {
        return Err(PerceptionError::BboxOutOfFrame(bbox));
    }
    let (mut sum, mut n) = (0.0f64, 0usize);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let d = frame.depth_at(x, y);
            if d > 0.0 {
                sum += d as f64;
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(PerceptionError::NoValidDepth(bbox));
    }
    Ok(sum / n as f64)
}

/// Threshold, segment, gate on circularity, and reduce the largest
/// surviving blob to azimuth, elevation and distance.
pub fn detect_dandelion(frame: &RgbdFrame, camera: &CameraModel) -> Option<SphericalTarget> {
    detect_with(frame, camera, &HsvThresholds::default())
}

pub fn detect_with(frame: &RgbdFrame, camera: &CameraModel, thresholds: &HsvThresholds) -> Option<SphericalTarget> {
    let mask = hsv_mask(frame, thresholds);
    find_blobs(&mask).into_iter().filter(|b| classify_dandelion(b.circularity)).find_map(|b| {
        let distance = depth_from_bbox(frame, b.bbox).ok()?;
        let (azimuth, elevation) = pixel_to_angles(b.centroid.0, b.centroid.1, camera);
        Some(SphericalTarget { azimuth, elevation, distance })
    })
}
