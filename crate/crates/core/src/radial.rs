//! Packedness of concentric disks as a function of the radius.
//!
//! For a fixed center each edge is described in its own line frame: the
//! distance `h` from the center to the supporting line and the signed
//! positions `ta < tb` of the endpoints measured from the foot of the
//! perpendicular. Between consecutive event radii (`h` when the foot lies
//! on the edge, and the endpoint distances) every edge contributes either a
//! constant or `w = sqrt(r² - h²)` once or twice, so the curve length inside
//! the disk is concave in `r` and `length / r` has a single maximum there.

use crate::geometry::{Point, Segment};

#[derive(Clone, Copy, Debug)]
pub(crate) struct EdgeFrame {
    pub h2: f64,
    pub ta: f64,
    pub tb: f64,
}

impl EdgeFrame {
    pub fn new(center: Point, s: &Segment) -> Option<Self> {
        let d = s.direction();
        let len = d.norm();
        if len == 0.0 {
            return None;
        }
        let u = d * (1.0 / len);
        let rel = center - s.a;
        let foot = rel.dot(u);
        let h = u.cross(rel);
        Some(Self { h2: h * h, ta: -foot, tb: len - foot })
    }

    /// Length of the edge inside the disk of radius `r`.
    #[inline]
    pub fn length(&self, r: f64) -> f64 {
        let w2 = r * r - self.h2;
        if w2 <= 0.0 {
            return 0.0;
        }
        let w = w2.sqrt();
        (w.min(self.tb) - (-w).max(self.ta)).max(0.0)
    }

    /// Radii at which the piecewise form of `length` changes.
    pub fn events(&self, out: &mut Vec<f64>) {
        if self.ta < 0.0 && self.tb > 0.0 {
            out.push(self.h2.sqrt());
        }
        out.push((self.h2 + self.ta * self.ta).sqrt());
        out.push((self.h2 + self.tb * self.tb).sqrt());
    }

    /// Piecewise form valid around radius `r`: `(constant, multiplicity)`
    /// such that `length = constant + multiplicity * sqrt(r² - h²)`.
    #[inline]
    pub fn piece(&self, r: f64) -> (f64, u8) {
        let w2 = r * r - self.h2;
        if w2 <= 0.0 {
            return (0.0, 0);
        }
        let w = w2.sqrt();
        if w <= self.ta || -w >= self.tb {
            return (0.0, 0);
        }
        let (mut c, mut m) = (0.0, 0u8);
        if w < self.tb {
            m += 1;
        } else {
            c += self.tb;
        }
        if -w > self.ta {
            m += 1;
        } else {
            c -= self.ta;
        }
        (c, m)
    }
}

/// Frames of all non-degenerate edges relative to `center`.
pub(crate) fn frames(center: Point, edges: &[Segment]) -> Vec<EdgeFrame> {
    edges.iter().filter_map(|e| EdgeFrame::new(center, e)).collect()
}

/// Sorted, deduplicated event radii. Radii below `1e-9` of the largest are
/// dropped: there the ratio is the vanishing-radius limit, which callers
/// handle exactly, and rounding would otherwise dominate it.
pub(crate) fn event_radii(frames: &[EdgeFrame]) -> Vec<f64> {
    let mut radii = Vec::with_capacity(3 * frames.len());
    for f in frames {
        f.events(&mut radii);
    }
    let floor = 1e-9 * radii.iter().copied().fold(0.0, f64::max);
    radii.retain(|r| *r > floor);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

#[inline]
pub(crate) fn length_at(frames: &[EdgeFrame], r: f64) -> f64 {
    frames.iter().map(|f| f.length(r)).sum()
}

/// Concave piece of the length function on one inter-event interval.
pub(crate) struct Piece {
    pub constant: f64,
    /// `(h², multiplicity)` of every edge contributing chord terms.
    pub terms: Vec<(f64, f64)>,
}

impl Piece {
    pub fn at(frames: &[EdgeFrame], r: f64) -> Self {
        let mut constant = 0.0;
        let mut terms = Vec::new();
        for f in frames {
            let (c, m) = f.piece(r);
            constant += c;
            if m > 0 {
                terms.push((f.h2, m as f64));
            }
        }
        Self { constant, terms }
    }

    /// `r² · d(length/r)/dr`; decreasing in `r` on the interval.
    pub fn slope_sign(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut s = -self.constant;
        for &(h2, m) in &self.terms {
            if h2 > 0.0 {
                let w = (r2 - h2).max(0.0).sqrt();
                s += if w == 0.0 { f64::INFINITY } else { m * h2 / w };
            }
        }
        s
    }

    /// Argmax of `length / r` on `[lo, hi]`, to relative precision ~1e-14.
    pub fn argmax(&self, lo: f64, hi: f64) -> f64 {
        if self.slope_sign(hi) >= 0.0 {
            return hi;
        }
        if self.slope_sign(lo) <= 0.0 {
            return lo;
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.slope_sign(m) > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

/// Largest packedness over disks centered at `center`, excluding the
/// vanishing-radius limit. Intervals whose bound `length(hi)/lo` cannot
/// beat `floor` are skipped. Returns `(value, radius)`; the value is 0 when
/// nothing beats the floor.
pub(crate) fn best_at(center: Point, edges: &[Segment], floor: f64) -> (f64, f64) {
    let frames = frames(center, edges);
    best_in_frames(&frames, floor)
}

pub(crate) fn best_in_frames(frames: &[EdgeFrame], floor: f64) -> (f64, f64) {
    let radii = event_radii(frames);
    let mut best = (0.0, 0.0);
    let mut bar = floor;
    let mut prev: Option<(f64, f64)> = None;
    for &r in &radii {
        let len = length_at(frames, r);
        let v = len / r;
        if v > bar {
            bar = v;
            best = (v, r);
        }
        if let Some((lo, _)) = prev {
            if len / lo > bar {
                let piece = Piece::at(frames, 0.5 * (lo + r));
                let x = piece.argmax(lo, r);
                let v = length_at(frames, x) / x;
                if v > bar {
                    bar = v;
                    best = (v, x);
                }
            }
        }
        prev = Some((r, len));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{clip_length, Disk};
    use proptest::prelude::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(Point::new(a.0, a.1), Point::new(b.0, b.1))
    }

    #[test]
    fn frame_length_matches_clip() {
        let s = seg((1.0, 2.0), (7.0, -1.0));
        let c = Point::new(3.0, 0.5);
        let f = EdgeFrame::new(c, &s).unwrap();
        for k in 1..200 {
            let r = k as f64 * 0.05;
            assert!((f.length(r) - clip_length(&s, &Disk::new(c, r))).abs() < 1e-12);
        }
    }

    #[test]
    fn single_edge_from_endpoint_is_one() {
        let edges = [seg((0.0, 0.0), (10.0, 0.0))];
        let (v, r) = best_at(Point::new(0.0, 0.0), &edges, 0.0);
        assert!((v - 1.0).abs() < 1e-12);
        assert!(r > 0.0);
    }

    #[test]
    fn interior_max_found() {
        // Two parallel edges at distance 1 above and below a center: the
        // ratio 4 sqrt(r² - 1) / r peaks strictly inside (1, 5).
        let edges = [seg((-3.0, 1.0), (3.0, 1.0)), seg((-3.0, -1.0), (3.0, -1.0))];
        let (v, r) = best_at(Point::new(0.0, 0.0), &edges, 0.0);
        let dense = (1..100_000)
            .map(|k| 1.0 + 4.0 * k as f64 / 100_000.0)
            .map(|r| length_at(&frames(Point::new(0.0, 0.0), &edges), r) / r)
            .fold(0.0, f64::max);
        assert!(v >= dense - 1e-12);
        assert!(r > 1.0 && r < 5.0);
    }

    proptest! {
        #[test]
        fn best_dominates_radius_grid(
            pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 3..7),
            cx in 0.0f64..10.0, cy in 0.0f64..10.0,
        ) {
            let edges: Vec<Segment> = pts.windows(2).map(|w| seg(w[0], w[1])).collect();
            let c = Point::new(cx, cy);
            let fr = frames(c, &edges);
            let (v, r) = best_in_frames(&fr, 0.0);
            if r > 0.0 {
                prop_assert!((length_at(&fr, r) / r - v).abs() < 1e-12);
            }
            for k in 1..2000 {
                let r = k as f64 * 0.01;
                prop_assert!(length_at(&fr, r) / r <= v + 1e-9);
            }
        }
    }
}
