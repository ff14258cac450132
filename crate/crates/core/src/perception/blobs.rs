use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Mask;

/// Lower (exclusive) circularity bound for a candidate flower head.
pub const CIRCULARITY_MIN: f64 = 0.4;
/// Upper (exclusive) circularity bound.
pub const CIRCULARITY_MAX: f64 = 1.45;

/// A connected region of the mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Blob {
    /// First moments over area, pixel coordinates.
    pub centroid: (f64, f64),
    /// Pixel count.
    pub area: f64,
    /// Length of the traced outer contour, pixels.
    pub perimeter: f64,
    /// Inclusive bounds (x0, y0, x1, y1).
    pub bbox: (usize, usize, usize, usize),
    pub circularity: f64,
}

// Clockwise on screen (y grows downwards), starting east.
const DIRS: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
const WEST: usize = 4;

fn dir_index(d: (i64, i64)) -> usize {
    DIRS.iter().position(|&x| x == d).expect("unit king move")
}

fn step_length(d: usize) -> f64 {
    if d % 2 == 0 {
        1.0
    } else {
        std::f64::consts::SQRT_2
    }
}

/// Length of the outer contour of the component containing `start`,
/// which must be its first pixel in raster order. The contour runs
/// through boundary pixel centres (Moore-neighbour tracing); axis steps
/// count 1 and diagonal steps sqrt(2).
pub fn trace_perimeter(mask: &Mask, start: (i64, i64), area: usize) -> f64 {
    let find = |p: (i64, i64), back: usize| {
        (1..=8).map(|i| (back + i) % 8).find(|&d| mask.get(p.0 + DIRS[d].0, p.1 + DIRS[d].1))
    };
    let Some(first) = find(start, WEST) else {
        return 0.0;
    };
    let (mut p, mut back) = (start, WEST);
    let mut length = 0.0;
    // every boundary pixel is visited at most 4 times
    for step in 0..(4 * area + 8) {
        let d = find(p, back).expect("connected pixel has a neighbour");
        if step > 0 && p == start && d == first {
            break;
        }
        length += step_length(d);
        let prev = DIRS[(d + 7) % 8];
        back = dir_index((prev.0 - DIRS[d].0, prev.1 - DIRS[d].1));
        p = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
    }
    length
}

/// 8-connected components of `mask`, largest first.
pub fn find_blobs(mask: &Mask) -> Vec<Blob> {
    let (w, h) = (mask.width, mask.height);
    let mut seen = vec![false; w * h];
    let mut blobs = Vec::new();
    let mut stack = Vec::new();
    for y0 in 0..h {
        for x0 in 0..w {
            let i0 = y0 * w + x0;
            if !mask.bits[i0] || seen[i0] {
                continue;
            }
            seen[i0] = true;
            stack.push((x0, y0));
            let (mut n, mut sx, mut sy) = (0usize, 0.0f64, 0.0f64);
            let mut bbox = (x0, y0, x0, y0);
            while let Some((x, y)) = stack.pop() {
                n += 1;
                sx += x as f64;
                sy += y as f64;
                bbox = (bbox.0.min(x), bbox.1.min(y), bbox.2.max(x), bbox.3.max(y));
                for (dx, dy) in DIRS {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if mask.get(nx, ny) {
                        let j = ny as usize * w + nx as usize;
                        if !seen[j] {
                            seen[j] = true;
                            stack.push((nx as usize, ny as usize));
                        }
                    }
                }
            }
            let area = n as f64;
            // An isolated pixel traces to length 0; give it unit perimeter.
            let perimeter = trace_perimeter(mask, (x0 as i64, y0 as i64), n).max(1.0);
            blobs.push(Blob {
                centroid: (sx / area, sy / area),
                area,
                perimeter,
                bbox,
                circularity: circularity_of(area, perimeter),
            });
        }
    }
    blobs.sort_by(|a, b| b.area.total_cmp(&a.area));
    blobs
}

/// `4 pi A / P^2`.
pub fn circularity_of(area: f64, perimeter: f64) -> f64 {
    4.0 * PI * area / (perimeter * perimeter)
}

pub fn circularity(blob: &Blob) -> f64 {
    circularity_of(blob.area, blob.perimeter)
}

/// Strict gate `0.4 < c < 1.45`.
pub fn classify_dandelion(c: f64) -> bool {
    c > CIRCULARITY_MIN && c < CIRCULARITY_MAX
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn disk_mask(r: f64) -> Mask {
        let size = (2.0 * r + 11.0) as usize;
        let c = (size / 2) as f64;
        let mut m = Mask::new(size, size);
        for y in 0..size {
            for x in 0..size {
                if (x as f64 - c).powi(2) + (y as f64 - c).powi(2) <= r * r {
                    m.set(x, y, true);
                }
            }
        }
        m
    }

    /// Independent estimate: walk the boundary pixels in angular order
    /// around the centre and sum the straight steps between neighbours.
    fn brute_force_boundary_length(m: &Mask) -> f64 {
        let c = (m.width / 2) as f64;
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for y in 0..m.height as i64 {
            for x in 0..m.width as i64 {
                let on = m.get(x, y);
                let edge = [(1, 0), (-1, 0), (0, 1), (0, -1)].iter().any(|(dx, dy)| !m.get(x + dx, y + dy));
                if on && edge {
                    pts.push((x as f64, y as f64));
                }
            }
        }
        pts.sort_by(|a, b| (a.1 - c).atan2(a.0 - c).total_cmp(&(b.1 - c).atan2(b.0 - c)));
        (0..pts.len())
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                (a.0 - b.0).hypot(a.1 - b.1)
            })
            .sum()
    }

    #[test]
    fn square_centroid_and_area() {
        let mut m = Mask::new(40, 40);
        for y in 5..26 {
            for x in 10..31 {
                m.set(x, y, true);
            }
        }
        let b = find_blobs(&m);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].area, 441.0);
        assert_eq!(b[0].centroid, (20.0, 15.0));
        assert_eq!(b[0].bbox, (10, 5, 30, 25));
        assert_abs_diff_eq!(b[0].perimeter, 80.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_mask_has_no_blobs() {
        assert!(find_blobs(&Mask::new(17, 9)).is_empty());
    }

    #[test]
    fn disk_perimeter_matches_boundary_walk() {
        let m = disk_mask(20.0);
        let b = &find_blobs(&m)[0];
        let oracle = brute_force_boundary_length(&m);
        let two_pi_r = 2.0 * PI * 20.0;
        assert!(b.perimeter >= 0.9 * two_pi_r && b.perimeter <= 1.2 * two_pi_r, "{}", b.perimeter);
        assert_abs_diff_eq!(b.perimeter, oracle, epsilon = 1e-9);
    }

    #[test]
    fn disk_circularity_band_and_scale_spread() {
        let cs: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|&r| find_blobs(&disk_mask(r))[0].circularity).collect();
        for &c in &cs {
            assert!(c > 0.7 && c < 1.45, "{c}");
            assert!(classify_dandelion(c));
        }
        let spread = cs.iter().cloned().fold(f64::MIN, f64::max) - cs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 0.1, "{cs:?}");
    }

    #[test]
    fn analytic_circularities() {
        assert_abs_diff_eq!(circularity_of(PI, 2.0 * PI), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(circularity_of(10.0, 22.0), 0.259_636, epsilon = 1e-6);
        assert!(!classify_dandelion(circularity_of(10.0, 22.0)));
        assert!(!classify_dandelion(0.4));
        assert!(!classify_dandelion(1.45));
    }

    #[test]
    fn stripe_fails_gate() {
        let mut m = Mask::new(300, 60);
        for y in 20..40 {
            for x in 50..250 {
                m.set(x, y, true);
            }
        }
        let b = &find_blobs(&m)[0];
        assert!(b.circularity < CIRCULARITY_MIN, "{}", b.circularity);
    }

    #[test]
    fn degenerate_components() {
        let mut m = Mask::new(10, 10);
        m.set(3, 3, true);
        m.set(7, 7, true);
        m.set(8, 8, true);
        let b = find_blobs(&m);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].area, 2.0);
        assert_abs_diff_eq!(b[0].perimeter, 2.0 * std::f64::consts::SQRT_2);
        assert_eq!(b[1].perimeter, 1.0);
    }

    #[test]
    fn ring_traces_outer_contour_only() {
        let mut m = disk_mask(15.0);
        let c = (m.width / 2) as f64;
        for y in 0..m.height {
            for x in 0..m.width {
                if (x as f64 - c).powi(2) + (y as f64 - c).powi(2) <= 49.0 {
                    m.set(x, y, false);
                }
            }
        }
        let ring = &find_blobs(&m)[0];
        let solid = &find_blobs(&disk_mask(15.0))[0];
        assert_abs_diff_eq!(ring.perimeter, solid.perimeter, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn blobs_partition_the_mask(bits in proptest::collection::vec(any::<bool>(), 24 * 18)) {
            let m = Mask { width: 24, height: 18, bits };
            let blobs = find_blobs(&m);
            let total: f64 = blobs.iter().map(|b| b.area).sum();
            prop_assert_eq!(total as usize, m.count());
            for b in &blobs {
                prop_assert!(b.perimeter > 0.0);
                prop_assert!(b.centroid.0 >= b.bbox.0 as f64 && b.centroid.0 <= b.bbox.2 as f64);
                prop_assert!(b.centroid.1 >= b.bbox.1 as f64 && b.centroid.1 <= b.bbox.3 as f64);
            }
            prop_assert!(blobs.windows(2).all(|w| w[0].area >= w[1].area));
        }
    }
}
