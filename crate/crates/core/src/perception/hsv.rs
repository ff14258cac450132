use serde::{Deserialize, Serialize};

use super::RgbdFrame;

/// Hexcone conversion. Hue in [0, 360), saturation and value in [0, 1].
/// Grey pixels get hue 0.
pub fn rgb_to_hsv(rgb: [u8; 3]) -> (f64, f64, f64) {
    let [r, g, b] = rgb.map(|c| c as f64 / 255.0);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let chroma = max - min;
    let hue = if chroma == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / chroma).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / chroma + 2.0)
    } else {
        60.0 * ((r - g) / chroma + 4.0)
    };
    let sat = if max == 0.0 { 0.0 } else { chroma / max };
    (hue, sat, max)
}

/// Inclusive HSV acceptance box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsvThresholds {
    pub hue: (f64, f64),
    pub saturation: (f64, f64),
    pub value: (f64, f64),
}

impl Default for HsvThresholds {
    fn default() -> Self {
        Self { hue: (45.0, 75.0), saturation: (0.4, 1.0), value: (0.3, 1.0) }
    }
}

impl HsvThresholds {
    pub fn accepts(&self, rgb: [u8; 3]) -> bool {
        let (h, s, v) = rgb_to_hsv(rgb);
        (self.hue.0..=self.hue.1).contains(&h)
            && (self.saturation.0..=self.saturation.1).contains(&s)
            && (self.value.0..=self.value.1).contains(&v)
    }
}

/// Row-major binary image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, bits: vec![false; width * height] }
    }

    pub fn get(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize]
    }

    pub fn set(&mut self, x: usize, y: usize, on: bool) {
        self.bits[y * self.width + x] = on;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

pub fn hsv_mask(frame: &RgbdFrame, thresholds: &HsvThresholds) -> Mask {
    // Colour is repeated heavily in synthetic frames; memoise the last hit.
    let mut last: Option<([u8; 3], bool)> = None;
    let bits = frame
        .color()
        .iter()
        .map(|&px| match last {
            Some((c, v)) if c == px => v,
            _ => {
                let v = thresholds.accepts(px);
                last = Some((px, v));
                v
            }
        })
        .collect();
    Mask { width: frame.width(), height: frame.height(), bits }
}
