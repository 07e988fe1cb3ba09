//! Suzuki–Abe border following on 8-connected ink.

use super::image::BinaryImage;
use crate::polyline::Polyline;

/// Default minimum number of border pixels for a contour to be kept.
pub const DEFAULT_MIN_PERIMETER: usize = 10;

/// A closed border of an ink component, in pixel coordinates `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    pub points: Vec<[i32; 2]>,
    /// `true` for the border of a hole inside a component.
    pub is_hole: bool,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_polyline(&self) -> Polyline {
        Polyline::new(
            self.points.iter().map(|p| [p[0] as f64, p[1] as f64]).collect(),
            true,
        )
    }
}

// Counterclockwise as displayed (rows grow downward): E, NE, N, NW, W, SW, S, SE.
const OFFSETS: [(isize, isize); 8] = [
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
];
const EAST: usize = 0;
const WEST: usize = 4;

/// Extracts every outer and hole border, dropping those with fewer than
/// `min_perimeter` points.
pub fn trace_contours(bin: &BinaryImage, min_perimeter: usize) -> Vec<Contour> {
    let (w, h) = (bin.width() + 2, bin.height() + 2);
    let mut f = vec![0i32; w * h];
    for y in 0..bin.height() {
        for x in 0..bin.width() {
            if bin.get(x, y) {
                f[(y + 1) * w + x + 1] = 1;
            }
        }
    }
    let step = |idx: usize, dir: usize| -> usize {
        let (dr, dc) = OFFSETS[dir];
        (idx as isize + dr * w as isize + dc) as usize
    };

    let mut contours = Vec::new();
    let mut nbd = 1i32;
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let idx = r * w + c;
            let v = f[idx];
            let (start_dir, is_hole) = if v == 1 && f[idx - 1] == 0 {
                (WEST, false)
            } else if v >= 1 && f[idx + 1] == 0 {
                (EAST, true)
            } else {
                continue;
            };
            nbd += 1;

            // Clockwise search for the first ink neighbour.
            let first = (0..8)
                .map(|k| (start_dir + 8 - k) % 8)
                .find(|&d| f[step(idx, d)] != 0);
            let Some(d1) = first else {
                f[idx] = -nbd;
                contours.push(Contour {
                    points: vec![[c as i32 - 1, r as i32 - 1]],
                    is_hole,
                });
                continue;
            };
            let p1 = step(idx, d1);

            let mut points = Vec::new();
            let mut cur = idx;
            let mut back_dir = d1;
            loop {
                // Counterclockwise search starting just after the previous pixel.
                let mut east_clear = false;
                let mut next_dir = back_dir;
                for k in 1..=8 {
                    let d = (back_dir + k) % 8;
                    if f[step(cur, d)] != 0 {
                        next_dir = d;
                        break;
                    }
                    if d == EAST {
                        east_clear = true;
                    }
                }
                if east_clear {
                    f[cur] = -nbd;
                } else if f[cur] == 1 {
                    f[cur] = nbd;
                }
                points.push([(cur % w) as i32 - 1, (cur / w) as i32 - 1]);
                let next = step(cur, next_dir);
                if next == idx && cur == p1 {
                    break;
                }
                back_dir = (next_dir + 4) % 8;
                cur = next;
            }
            contours.push(Contour { points, is_hole });
        }
    }
    contours.retain(|c| c.len() >= min_perimeter);
    contours
}
