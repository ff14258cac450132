//! Synthetic RGB-D frames and the colour-blob detection pipeline.

mod blobs;
mod camera;
mod detect;
mod frame;
mod hsv;
mod render;

use thiserror::Error;

pub use blobs::{
    circularity, circularity_of, classify_dandelion, find_blobs, trace_perimeter, Blob, CIRCULARITY_MAX,
    CIRCULARITY_MIN,
};
pub use camera::{pixel_to_angles, CameraModel, CameraPose};
pub use detect::{depth_from_bbox, detect_dandelion, detect_with};
pub use frame::{RgbdFrame, FRAME_HEIGHT, FRAME_WIDTH};
pub use hsv::{hsv_mask, rgb_to_hsv, HsvThresholds, Mask};
pub use render::{render_frame, FLOWER_YELLOW, LAWN_GREEN};

#[derive(Debug, Error)]
pub enum PerceptionError {
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("frame buffers do not match resolution ({expected} px): color {color}, depth {depth}")]
    FrameSize { expected: usize, color: usize, depth: usize },
    #[error("bounding box {0:?} is outside the frame")]
    BboxOutOfFrame((usize, usize, usize, usize)),
    #[error("no valid depth inside bounding box {0:?}")]
    NoValidDepth((usize, usize, usize, usize)),
    #[error("bad frame dump: {0}")]
    BadDump(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
