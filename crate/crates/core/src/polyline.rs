/// Ordered sequence of planar points; `closed` marks a ring whose last point
/// connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl Polyline {
    /// Builds a polyline, dropping consecutive duplicate points (and, for a
    /// ring, a trailing point equal to the first).
    pub fn new(points: Vec<[f64; 2]>, closed: bool) -> Self {
        let mut pts: Vec<[f64; 2]> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if closed {
            while pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
        }
        Self { points: pts, closed }
    }

    pub fn open(points: Vec<[f64; 2]>) -> Self {
        Self::new(points, false)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Euclidean length of the traversed segments (including the closing one for rings).
    pub fn arc_length(&self) -> f64 {
        let mut total: f64 = self.points.windows(2).map(|w| dist(w[0], w[1])).sum();
        if self.closed && self.points.len() > 2 {
            total += dist(self.points[self.points.len() - 1], self.points[0]);
        }
        total
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Distance from `p` to the closed segment `a`–`b`.
pub fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * dx, a[1] + t * dy])
}
