use std::io::{Read, Write};

use super::PerceptionError;

pub const FRAME_WIDTH: usize = 640;
pub const FRAME_HEIGHT: usize = 480;

/// Aligned color and depth images of identical resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbdFrame {
    width: usize,
    height: usize,
    color: Vec<[u8; 3]>,
    /// Meters; 0 marks an invalid return.
    depth: Vec<f32>,
}

impl RgbdFrame {
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        Self { width, height, color: vec![color; width * height], depth: vec![0.0; width * height] }
    }

    /// A 640x480 frame of a single color with no depth returns.
    pub fn blank(color: [u8; 3]) -> Self {
        Self::filled(FRAME_WIDTH, FRAME_HEIGHT, color)
    }

    pub fn from_parts(
        width: usize,
        height: usize,
        color: Vec<[u8; 3]>,
        depth: Vec<f32>,
    ) -> Result<Self, PerceptionError> {
        if color.len() != width * height || depth.len() != width * height {
            return Err(PerceptionError::FrameSize {
                expected: width * height,
                color: color.len(),
                depth: depth.len(),
            });
        }
        Ok(Self { width, height, color, depth })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn color(&self) -> &[[u8; 3]] {
        &self.color
    }

    pub fn depth(&self) -> &[f32] {
        &self.depth
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.color[y * self.width + x]
    }

    pub fn depth_at(&self, x: usize, y: usize) -> f32 {
        self.depth[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, color: [u8; 3], depth: f32) {
        let i = y * self.width + x;
        self.color[i] = color;
        self.depth[i] = depth;
    }

    /// Binary PPM (P6) of the color image.
    pub fn write_ppm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.color.iter().flatten().copied().collect();
        out.write_all(&bytes)
    }

    /// Row-major little-endian f32 depth grid, no header.
    pub fn write_depth<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let bytes: Vec<u8> = self.depth.iter().flat_map(|d| d.to_le_bytes()).collect();
        out.write_all(&bytes)
    }

    /// Inverse of [`write_ppm`](Self::write_ppm) plus
    /// [`write_depth`](Self::write_depth).
    pub fn read_dump<R1: Read, R2: Read>(mut ppm: R1, mut depth: R2) -> Result<Self, PerceptionError> {
        let mut buf = Vec::new();
        ppm.read_to_end(&mut buf)?;
        let mut fields = Vec::with_capacity(4);
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < buf.len() && buf[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < buf.len() && !buf[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(PerceptionError::BadDump("truncated PPM header".into()));
            }
            fields.push(String::from_utf8_lossy(&buf[start..pos]).into_owned());
        }
        pos += 1;
        if fields[0] != "P6" || fields[3] != "255" {
            return Err(PerceptionError::BadDump("expected binary P6 with maxval 255".into()));
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|e| PerceptionError::BadDump(e.to_string()));
        let (w, h) = (parse(&fields[1])?, parse(&fields[2])?);
        let pixels = buf.get(pos..pos + 3 * w * h).ok_or_else(|| PerceptionError::BadDump("short PPM body".into()))?;
        let color = pixels.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        let mut dbuf = Vec::new();
        depth.read_to_end(&mut dbuf)?;
        if dbuf.len() != 4 * w * h {
            return Err(PerceptionError::BadDump(format!(
                "depth grid has {} bytes, expected {}",
                dbuf.len(),
                4 * w * h
            )));
        }
        let depth = dbuf.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
        Self::from_parts(w, h, color, depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let mut f = RgbdFrame::filled(5, 3, [1, 2, 3]);
        f.set(4, 2, [255, 0, 7], 1.25);
        let (mut ppm, mut depth) = (Vec::new(), Vec::new());
        f.write_ppm(&mut ppm).unwrap();
        f.write_depth(&mut depth).unwrap();
        assert!(ppm.starts_with(b"P6\n5 3\n255\n"));
        assert_eq!(depth.len(), 5 * 3 * 4);
        assert_eq!(RgbdFrame::read_dump(ppm.as_slice(), depth.as_slice()).unwrap(), f);
    }

    #[test]
    fn mismatched_parts_are_rejected() {
        assert!(RgbdFrame::from_parts(2, 2, vec![[0; 3]; 4], vec![0.0; 3]).is_err());
    }
}
