//! Floating-point kernel shared by every algorithm in the crate: points,
//! segments, disks, segment/disk clipping and enclosing circles.
//!
//! Comparisons go through [`tol`], an absolute-plus-relative tolerance of
//! [`TOLERANCE`]` * (1 + magnitude)`.

use std::ops::{Add, Mul, Neg, Sub};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Base tolerance for geometric comparisons.
pub const TOLERANCE: f64 = 1e-9;

/// Tolerance scaled to the magnitude of the quantities being compared.
#[inline]
pub fn tol(magnitude: f64) -> f64 {
    TOLERANCE * (1.0 + magnitude.abs())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    #[inline]
    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotates by 90 degrees counter-clockwise.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    #[inline]
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    #[inline]
    pub fn direction(&self) -> Point {
        self.b - self.a
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.a + self.direction() * t
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    /// Parameter in `[0, 1]` of the point of the segment closest to `p`.
    pub fn closest_param(&self, p: Point) -> f64 {
        let d = self.direction();
        let len2 = d.norm2();
        if len2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / len2).clamp(0.0, 1.0)
    }

    pub fn closest_point(&self, p: Point) -> Point {
        self.point_at(self.closest_param(p))
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        self.closest_point(p).dist(p)
    }

    /// Largest distance from `p` to a point of the segment.
    pub fn farthest_distance(&self, p: Point) -> f64 {
        p.dist(self.a).max(p.dist(self.b))
    }

    /// Whether `p` lies on the segment within tolerance.
    pub fn contains_point(&self, p: Point) -> bool {
        let scale = self.length().max(p.norm()).max(self.a.norm());
        self.distance_to(p) <= tol(scale)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    #[inline]
    pub const fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    /// Containment with the crate tolerance applied to the radius.
    pub fn contains(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius + tol(self.radius)
    }

    /// Whether the closed disk meets the segment (within tolerance).
    pub fn meets(&self, s: &Segment) -> bool {
        s.distance_to(self.center) <= self.radius + tol(self.radius)
    }
}

/// Length of `s ∩ d`.
///
/// Zero-length segments and disjoint pairs give 0.
pub fn clip_length(s: &Segment, d: &Disk) -> f64 {
    clip_length_rate(s, d).0
}

/// Length of `s ∩ d` together with its derivative with respect to the
/// disk radius (center fixed).
///
/// The derivative counts one term `r / sqrt(r² - h²)` per boundary crossing
/// strictly inside the segment, where `h` is the distance from the center to
/// the supporting line. At a tangency the rate is infinite.
pub fn clip_length_rate(s: &Segment, d: &Disk) -> (f64, f64) {
    let dir = s.direction();
    let a2 = dir.norm2();
    if a2 == 0.0 || d.radius <= 0.0 {
        return (0.0, 0.0);
    }
    let f = s.a - d.center;
    let b = f.dot(dir);
    let c = f.norm2() - d.radius * d.radius;
    let disc = b * b - a2 * c;
    if disc <= 0.0 {
        return (0.0, 0.0);
    }
    let sq = disc.sqrt();
    let t1 = (-b - sq) / a2;
    let t2 = (-b + sq) / a2;
    if t2 <= 0.0 || t1 >= 1.0 {
        return (0.0, 0.0);
    }
    let len = a2.sqrt();
    let lo = t1.max(0.0);
    let hi = t2.min(1.0);
    let crossings = (t1 > 0.0) as u32 + (t2 < 1.0) as u32;
    // sqrt(a2) * r / sq == r / sqrt(r² - h²)
    let rate = crossings as f64 * len * d.radius / sq;
    ((hi - lo) * len, rate)
}

/// Closed-segment intersection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentIntersection {
    Point(Point),
    /// Collinear overlap of positive length.
    Overlap(Segment),
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn orient_sign(a: Point, b: Point, c: Point) -> i8 {
    let o = orient(a, b, c);
    let scale = (b - a).norm() * (c - a).norm();
    if o.abs() <= 1e-12 * scale {
        0
    } else if o > 0.0 {
        1
    } else {
        -1
    }
}

fn on_segment_collinear(s: &Segment, p: Point) -> bool {
    p.x >= s.a.x.min(s.b.x) - tol(p.x)
        && p.x <= s.a.x.max(s.b.x) + tol(p.x)
        && p.y >= s.a.y.min(s.b.y) - tol(p.y)
        && p.y <= s.a.y.max(s.b.y) + tol(p.y)
}

/// Intersection of two closed segments, if any.
pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Option<SegmentIntersection> {
    if s1.is_degenerate() {
        return s2.contains_point(s1.a).then_some(SegmentIntersection::Point(s1.a));
    }
    if s2.is_degenerate() {
        return s1.contains_point(s2.a).then_some(SegmentIntersection::Point(s2.a));
    }
    let o1 = orient_sign(s1.a, s1.b, s2.a);
    let o2 = orient_sign(s1.a, s1.b, s2.b);
    let o3 = orient_sign(s2.a, s2.b, s1.a);
    let o4 = orient_sign(s2.a, s2.b, s1.b);

    if o1 == 0 && o2 == 0 {
        // Collinear: project onto s1's direction.
        let d = s1.direction();
        let l2 = d.norm2();
        let t = |p: Point| (p - s1.a).dot(d) / l2;
        let (mut u, mut v) = (t(s2.a), t(s2.b));
        if u > v {
            std::mem::swap(&mut u, &mut v);
        }
        let lo = u.max(0.0);
        let hi = v.min(1.0);
        let eps = 1e-12;
        if hi < lo - eps {
            return None;
        }
        if hi - lo <= eps {
            return Some(SegmentIntersection::Point(s1.point_at(lo.clamp(0.0, 1.0))));
        }
        return Some(SegmentIntersection::Overlap(Segment::new(
            s1.point_at(lo),
            s1.point_at(hi),
        )));
    }

    if o1 != o2 && o3 != o4 {
        if o1 == 0 {
            return Some(SegmentIntersection::Point(s2.a));
        }
        if o2 == 0 {
            return Some(SegmentIntersection::Point(s2.b));
        }
        if o3 == 0 {
            return Some(SegmentIntersection::Point(s1.a));
        }
        if o4 == 0 {
            return Some(SegmentIntersection::Point(s1.b));
        }
        let d1 = s1.direction();
        let d2 = s2.direction();
        let t = (s2.a - s1.a).cross(d2) / d1.cross(d2);
        return Some(SegmentIntersection::Point(s1.point_at(t.clamp(0.0, 1.0))));
    }

    // Touching cases where one orientation is zero but the other pair agrees.
    for (s, p) in [(s1, s2.a), (s1, s2.b), (s2, s1.a), (s2, s1.b)] {
        if orient_sign(s.a, s.b, p) == 0 && on_segment_collinear(s, p) {
            return Some(SegmentIntersection::Point(p));
        }
    }
    None
}

/// Closest pair of points between two segments and their distance.
///
/// Distance is 0 exactly when the segments intersect.
pub fn closest_points(s1: &Segment, s2: &Segment) -> (Point, Point, f64) {
    if let Some(x) = segment_intersection(s1, s2) {
        let p = match x {
            SegmentIntersection::Point(p) => p,
            SegmentIntersection::Overlap(o) => o.a,
        };
        return (p, p, 0.0);
    }
    let candidates = [
        (s1.a, s2.closest_point(s1.a)),
        (s1.b, s2.closest_point(s1.b)),
        (s1.closest_point(s2.a), s2.a),
        (s1.closest_point(s2.b), s2.b),
    ];
    let mut best = candidates[0];
    let mut best_d = best.0.dist(best.1);
    for &(p, q) in &candidates[1..] {
        let d = p.dist(q);
        if d < best_d {
            best = (p, q);
            best_d = d;
        }
    }
    (best.0, best.1, best_d)
}

/// Circle through three points, `None` when they are (nearly) collinear.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<Disk> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    let scale = ab.norm2().max(ac.norm2());
    if d.abs() <= 1e-14 * scale || scale == 0.0 {
        return None;
    }
    let ab2 = ab.norm2();
    let ac2 = ac.norm2();
    let ux = (ac.y * ab2 - ab.y * ac2) / d;
    let uy = (ab.x * ac2 - ac.x * ab2) / d;
    let center = a + Point::new(ux, uy);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Disk::new(center, radius))
}

fn diametral(a: Point, b: Point) -> Disk {
    let c = a.midpoint(b);
    Disk::new(c, c.dist(a).max(c.dist(b)))
}

/// Smallest disk containing two or three points.
///
/// # Panics
/// If `points` does not hold 2 or 3 points.
pub fn min_circle_through(points: &[Point]) -> Disk {
    match *points {
        [a, b] => diametral(a, b),
        [a, b, c] => {
            let mut best: Option<Disk> = None;
            for (p, q, r) in [(a, b, c), (a, c, b), (b, c, a)] {
                let d = diametral(p, q);
                if d.contains(r) && best.is_none_or(|bd| d.radius < bd.radius) {
                    best = Some(d);
                }
            }
            if let Some(d) = best {
                return d;
            }
            // Acute triangle: the circumcircle is the minimum. Collinear
            // triples were caught above by the extreme-pair diametral disk.
            circumcircle(a, b, c).unwrap_or_else(|| {
                let (p, q) = extreme_pair(&[a, b, c]);
                diametral(p, q)
            })
        }
        _ => panic!("min_circle_through expects 2 or 3 points, got {}", points.len()),
    }
}

fn extreme_pair(points: &[Point]) -> (Point, Point) {
    let mut best = (points[0], points[0]);
    let mut best_d = -1.0;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            let d = p.dist2(q);
            if d > best_d {
                best_d = d;
                best = (p, q);
            }
        }
    }
    best
}

/// Minimum enclosing disk, randomized incremental construction in expected
/// linear time. The shuffle uses a fixed seed so results are reproducible.
///
/// # Panics
/// On an empty slice.
pub fn smallest_enclosing_disk(points: &[Point]) -> Disk {
    assert!(!points.is_empty(), "smallest_enclosing_disk of an empty set");
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d15c);
    pts.shuffle(&mut rng);

    let mut disk = Disk::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if !disk.contains(pts[i]) {
            disk = sed_with_one(&pts[..i], pts[i]);
        }
    }
    disk
}

fn sed_with_one(points: &[Point], p: Point) -> Disk {
    let mut disk = Disk::new(p, 0.0);
    for j in 0..points.len() {
        if !disk.contains(points[j]) {
            disk = sed_with_two(&points[..j], p, points[j]);
        }
    }
    disk
}

fn sed_with_two(points: &[Point], p: Point, q: Point) -> Disk {
    let mut disk = diametral(p, q);
    for &r in points {
        if !disk.contains(r) {
            disk = circumcircle(p, q, r).unwrap_or_else(|| {
                let (a, b) = extreme_pair(&[p, q, r]);
                diametral(a, b)
            });
        }
    }
    disk
}

/// The point `z` on `s` minimizing the radius of the smallest disk through
/// `p`, `q` and `z`.
///
/// That radius is a convex function of `z`, so when no point of `s` lies in
/// the diametral disk of `p`,`q` a golden-section search on the segment
/// parameter finds the minimizer.
pub fn min_circle_point_on_segment(p: Point, q: Point, s: &Segment) -> Point {
    if s.is_degenerate() {
        return s.a;
    }
    let mid = p.midpoint(q);
    let half = 0.5 * p.dist(q);
    let z0 = s.closest_point(mid);
    if z0.dist(mid) <= half + tol(half) {
        return z0;
    }
    let radius_at = |t: f64| min_circle_through(&[p, q, s.point_at(t)]).radius;
    let t = golden_section_min(radius_at, 0.0, 1.0, 1e-12);
    s.point_at(t)
}

/// Minimizes a unimodal function on `[lo, hi]`; returns the argmin.
pub(crate) fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol_x: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol_x {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    // Endpoints can win for monotone functions.
    let mid = 0.5 * (lo + hi);
    [mid, lo, hi]
        .into_iter()
        .min_by(|&a, &b| f(a).total_cmp(&f(b)))
        .unwrap_or(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by))
    }

    #[test]
    fn clip_chord_through_center() {
        let d = Disk::new(Point::new(0.0, 0.0), 2.0);
        assert_abs_diff_eq!(clip_length(&seg(-5.0, 0.0, 5.0, 0.0), &d), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn clip_disjoint_is_zero() {
        let d = Disk::new(Point::new(0.0, 0.0), 1.0);
        assert_eq!(clip_length(&seg(10.0, 10.0, 11.0, 10.0), &d), 0.0);
    }

    #[test]
    fn clip_offset_chord_matches_sampling() {
        let s = seg(0.0, 1.0, 4.0, 1.0);
        let d = Disk::new(Point::new(0.0, 0.0), 2.0);
        // Sampling oracle: fraction of 10^6 midpoints inside the disk.
        let samples = 1_000_000;
        let inside = (0..samples)
            .filter(|&i| {
                let t = (i as f64 + 0.5) / samples as f64;
                s.point_at(t).norm() <= 2.0
            })
            .count();
        let sampled = inside as f64 / samples as f64 * s.length();
        assert_abs_diff_eq!(sampled, 1.732_050_8, epsilon = 1e-5);
        assert_abs_diff_eq!(clip_length(&s, &d), 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn clip_degenerate_segment_is_zero() {
        let d = Disk::new(Point::new(0.0, 0.0), 1.0);
        assert_eq!(clip_length(&seg(0.0, 0.0, 0.0, 0.0), &d), 0.0);
    }

    #[test]
    fn clip_rate_matches_finite_difference() {
        let s = seg(-3.0, 0.5, 0.3, 0.5);
        let c = Point::new(0.1, -0.2);
        let r = 1.7;
        let (_, rate) = clip_length_rate(&s, &Disk::new(c, r));
        let h = 1e-6;
        let fd = (clip_length(&s, &Disk::new(c, r + h)) - clip_length(&s, &Disk::new(c, r - h))) / (2.0 * h);
        assert_abs_diff_eq!(rate, fd, epsilon = 1e-6);
    }

    #[test]
    fn closest_points_parallel_offset() {
        let (p, q, d) = closest_points(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0));
        assert_eq!(d, 1.0);
        assert_eq!(p.y, 0.0);
        assert_eq!(q.y, 1.0);
        assert_eq!(p.x, q.x);
    }

    #[test]
    fn closest_points_crossing() {
        let (_, _, d) = closest_points(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0));
        assert_eq!(d, 0.0);
    }

    #[test]
    fn closest_points_endpoint_case_matches_grid() {
        let s1 = seg(0.0, 0.0, 1.0, 0.0);
        let s2 = seg(2.0, 1.0, 3.0, 2.0);
        let (p, q, d) = closest_points(&s1, &s2);
        assert_eq!(p, Point::new(1.0, 0.0));
        assert_eq!(q, Point::new(2.0, 1.0));
        assert_abs_diff_eq!(d, 2f64.sqrt(), epsilon = 1e-15);
        // Dense parameter grid oracle.
        let steps = 400;
        let mut best = f64::INFINITY;
        for i in 0..=steps {
            for j in 0..=steps {
                let a = s1.point_at(i as f64 / steps as f64);
                let b = s2.point_at(j as f64 / steps as f64);
                best = best.min(a.dist(b));
            }
        }
        assert_abs_diff_eq!(best, d, epsilon = 1e-12);
    }

    #[test]
    fn min_circle_two_points() {
        let d = min_circle_through(&[Point::new(0.0, 0.0), Point::new(2.0, 0.0)]);
        assert_eq!(d.center, Point::new(1.0, 0.0));
        assert_eq!(d.radius, 1.0);
    }

    #[test]
    fn min_circle_right_triangle_is_diametral() {
        let pts = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 1.0)];
        let d = min_circle_through(&pts);
        assert_abs_diff_eq!(d.center.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.center.y, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.radius, 1.0, epsilon = 1e-12);
        // Candidate-grid oracle: no enclosing disk centered on a fine grid is smaller.
        let mut best = f64::INFINITY;
        for i in 0..=200 {
            for j in 0..=200 {
                let c = Point::new(i as f64 / 100.0, j as f64 / 100.0 - 1.0);
                let r = pts.iter().map(|p| c.dist(*p)).fold(0.0, f64::max);
                best = best.min(r);
            }
        }
        assert!(d.radius <= best + 1e-12);
        assert!(pts.iter().all(|p| d.contains(*p)));
    }

    #[test]
    fn min_circle_acute_is_circumcircle() {
        let pts = [Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(2.0, 3.0)];
        let d = min_circle_through(&pts);
        let r: Vec<f64> = pts.iter().map(|p| d.center.dist(*p)).collect();
        assert!((r[0] - r[1]).abs() < 1e-12 && (r[1] - r[2]).abs() < 1e-12);
    }

    #[test]
    fn min_circle_collinear_triple() {
        let d = min_circle_through(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(3.0, 0.0)]);
        assert_eq!(d.center, Point::new(1.5, 0.0));
        assert_eq!(d.radius, 1.5);
    }

    #[test]
    fn sed_single_point_and_square() {
        let p = Point::new(3.0, -1.0);
        assert_eq!(smallest_enclosing_disk(&[p]), Disk::new(p, 0.0));
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let d = smallest_enclosing_disk(&sq);
        assert_abs_diff_eq!(d.center.x, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.center.y, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.radius, 0.5f64.sqrt(), epsilon = 1e-12);
    }

    /// O(n^4) oracle: smallest 2/3-point candidate circle containing the set.
    fn brute_sed(points: &[Point]) -> f64 {
        let mut best = f64::INFINITY;
        let n = points.len();
        let contains_all = |d: &Disk| points.iter().all(|p| d.center.dist(*p) <= d.radius * (1.0 + 1e-12) + 1e-12);
        for i in 0..n {
            for j in i + 1..n {
                let d = diametral(points[i], points[j]);
                if contains_all(&d) {
                    best = best.min(d.radius);
                }
                for k in j + 1..n {
                    if let Some(d) = circumcircle(points[i], points[j], points[k]) {
                        if contains_all(&d) {
                            best = best.min(d.radius);
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn sed_matches_candidate_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        let pts: Vec<Point> = (0..50).map(|_| Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0))).collect();
        let d = smallest_enclosing_disk(&pts);
        assert_abs_diff_eq!(d.radius, brute_sed(&pts), epsilon = 1e-9);
    }

    #[test]
    fn min_point_on_segment_cases() {
        let p = Point::new(0.0, 0.0);
        let q = Point::new(2.0, 0.0);
        let z = min_circle_point_on_segment(p, q, &seg(1.0, 5.0, 1.0, 9.0));
        assert_abs_diff_eq!(z.x, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(z.y, 5.0, epsilon = 1e-9);
        // 1-D grid oracle over the segment parameter.
        let s = seg(1.0, 5.0, 1.0, 9.0);
        let best = (0..=10_000)
            .map(|i| min_circle_through(&[p, q, s.point_at(i as f64 / 10_000.0)]).radius)
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(min_circle_through(&[p, q, z]).radius, best, epsilon = 1e-9);

        let z = min_circle_point_on_segment(p, q, &seg(1.0, -1.0, 1.0, 1.0));
        assert_eq!(z, Point::new(1.0, 0.0));
        assert_eq!(min_circle_through(&[p, q, z]).radius, 1.0);

        let z = min_circle_point_on_segment(p, q, &seg(0.5, 0.0, 1.5, 0.0));
        assert_abs_diff_eq!(min_circle_through(&[p, q, z]).radius, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn min_point_on_oblique_segment_matches_grid() {
        let p = Point::new(-1.0, 0.3);
        let q = Point::new(0.7, -0.4);
        let s = seg(-3.0, 2.0, 4.0, 5.5);
        let z = min_circle_point_on_segment(p, q, &s);
        let best = (0..=100_000)
            .map(|i| min_circle_through(&[p, q, s.point_at(i as f64 / 100_000.0)]).radius)
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(min_circle_through(&[p, q, z]).radius, best, epsilon = 1e-8);
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn clip_monotone_in_radius(a in arb_point(), b in arb_point(), c in arb_point(), r in 0.0..40.0f64, dr in 0.0..10.0f64) {
            let s = Segment::new(a, b);
            let l1 = clip_length(&s, &Disk::new(c, r));
            let l2 = clip_length(&s, &Disk::new(c, r + dr));
            prop_assert!(l2 >= l1 - 1e-9);
            prop_assert!(l1 <= s.length() + 1e-9);
        }

        #[test]
        fn clip_additive_on_collinear_split(a in arb_point(), b in arb_point(), t in 0.0..1.0f64, c in arb_point(), r in 0.0..40.0f64) {
            let s = Segment::new(a, b);
            let m = s.point_at(t);
            let d = Disk::new(c, r);
            let whole = clip_length(&s, &d);
            let parts = clip_length(&Segment::new(a, m), &d) + clip_length(&Segment::new(m, b), &d);
            prop_assert!((whole - parts).abs() <= 1e-9 * (1.0 + whole));
        }

        #[test]
        fn closest_points_symmetric(a in arb_point(), b in arb_point(), c in arb_point(), d in arb_point()) {
            let s1 = Segment::new(a, b);
            let s2 = Segment::new(c, d);
            let (_, _, d12) = closest_points(&s1, &s2);
            let (_, _, d21) = closest_points(&s2, &s1);
            prop_assert!((d12 - d21).abs() <= 1e-9);
        }

        #[test]
        fn sed_contains_everything(pts in proptest::collection::vec(arb_point(), 1..40)) {
            let d = smallest_enclosing_disk(&pts);
            for p in &pts {
                prop_assert!(d.center.dist(*p) <= d.radius + 1e-9 * (1.0 + d.radius));
            }
            // Determined by at most three boundary points: some 2- or 3-subset
            // circle has the same radius.
            let on_boundary: Vec<Point> = pts.iter().copied()
                .filter(|p| (d.center.dist(*p) - d.radius).abs() <= 1e-7 * (1.0 + d.radius))
                .collect();
            prop_assert!(d.radius == 0.0 || on_boundary.len() >= 2);
        }
    }
}
