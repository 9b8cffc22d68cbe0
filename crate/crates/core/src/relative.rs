//! Packedness restricted to disks centered at a fixed point set.
//!
//! For vertex anchors the sweep is incremental: per anchor the edge events
//! (first contact, passing the perpendicular foot's near endpoint, full
//! containment) are sorted once, and the sweep keeps the total length of
//! fully covered edges, the partially covered edges, and an upper bound on
//! the covered length derived from the last exact evaluation. Exact
//! evaluations are only made where that bound could beat the running
//! maximum.

use thiserror::Error;

use crate::curve::PolyCurve;
use crate::geometry::{tol, Disk, Point, Segment};
use crate::radial::{self, EdgeFrame, Piece};
use crate::report::{Best, Counters, Interval, PackednessReport, Stopwatch};

#[derive(Debug, Error, PartialEq)]
pub enum RelativeError {
    #[error("anchor set is empty")]
    Empty,
    #[error("anchor {index} has a non-finite coordinate")]
    NonFinite { index: usize },
}

/// Admissible disk centers.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorSet(Vec<Point>);

impl AnchorSet {
    pub fn new(points: Vec<Point>) -> Result<Self, RelativeError> {
        if points.is_empty() {
            return Err(RelativeError::Empty);
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(RelativeError::NonFinite { index });
        }
        Ok(Self(points))
    }

    pub fn vertices(curve: &PolyCurve) -> Self {
        Self(curve.vertices().to_vec())
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    fn covers_vertices(&self, curve: &PolyCurve) -> bool {
        curve.vertices().iter().all(|v| self.0.iter().any(|p| p.dist(*v) <= tol(v.norm())))
    }
}

/// Certified range `[c_vr, 2·c_vr]` for the packedness constant given the
/// vertex-relative value.
pub fn packedness_bounds_from_vr(c_vr: f64) -> Interval {
    Interval::new(c_vr, 2.0 * c_vr)
}

/// Exact `S`-relative packedness by a full scan per anchor: every edge is
/// clipped at every event radius, and each inter-event interval is
/// maximized by bisection on the derivative sign.
///
/// The upper end of the report is `2·c_S` when `S` contains every vertex,
/// and unbounded otherwise.
pub fn s_relative_exact(curve: &PolyCurve, anchors: &AnchorSet) -> PackednessReport {
    let clock = Stopwatch::start();
    let mut best = Best::new(Disk::new(anchors.0[0], 0.0));
    let mut counters = Counters::default();
    for &p in &anchors.0 {
        let frames = radial::frames(p, curve.edges());
        counters.events += radial::event_radii(&frames).len() as u64;
        counters.disks_evaluated += 1;
        let (v, r) = radial::best_in_frames(&frames, best.value);
        if r > 0.0 {
            best.offer(v, Disk::new(p, r));
        }
    }
    let hi = if anchors.covers_vertices(curve) { 2.0 * best.value } else { f64::INFINITY };
    PackednessReport {
        algorithm: "s-relative".into(),
        c_estimate: best.value,
        certified_lo: best.value,
        certified_hi: hi,
        witness: best.disk,
        counters,
        wall_time_ms: clock.elapsed_ms(),
    }
}

/// Vertex-relative packedness.
///
/// With `refine` the maximum over every radius is returned. Without it the
/// ratio is only evaluated at event radii; the report then also carries a
/// certified upper end `2·max(length(r_b)/r_a)` over inter-event intervals
/// `[r_a, r_b]`.
pub fn vertex_relative(curve: &PolyCurve, refine: bool) -> PackednessReport {
    let clock = Stopwatch::start();
    let out = vertex_sweep(curve, refine);
    let hi = if refine { 2.0 * out.value } else { 2.0 * out.interval_bound };
    PackednessReport {
        algorithm: if refine { "vertex-relative" } else { "vertex-relative-events" }.into(),
        c_estimate: out.value,
        certified_lo: out.value,
        certified_hi: hi,
        witness: out.witness,
        counters: out.counters,
        wall_time_ms: clock.elapsed_ms(),
    }
}

pub(crate) struct SweepOutcome {
    pub value: f64,
    pub witness: Disk,
    /// Upper bound on the vertex-relative value.
    pub interval_bound: f64,
    pub counters: Counters,
}

const ENTER: u32 = 0;
const NEAR_END: u32 = 1;
const FULL: u32 = 2;

/// Event radius of each kind for one edge seen from `c`.
struct EdgeEvents {
    frame: EdgeFrame,
    len: f64,
    enter: f64,
    near: Option<f64>,
    full: f64,
    initial_mult: u8,
}

fn edge_events(c: Point, s: &Segment) -> Option<EdgeEvents> {
    let frame = EdgeFrame::new(c, s)?;
    let len = frame.tb - frame.ta;
    let da = (frame.h2 + frame.ta * frame.ta).sqrt();
    let db = (frame.h2 + frame.tb * frame.tb).sqrt();
    let (near, far) = if da <= db { (da, db) } else { (db, da) };
    Some(if frame.ta < 0.0 && frame.tb > 0.0 {
        EdgeEvents { frame, len, enter: frame.h2.sqrt(), near: Some(near), full: far, initial_mult: 2 }
    } else {
        EdgeEvents { frame, len, enter: near, near: None, full: far, initial_mult: 1 }
    })
}

/// Per-anchor sweep state, reused across anchors.
struct Sweeper {
    events: Vec<(u64, u32)>,
    info: Vec<Option<EdgeEvents>>,
    mult: Vec<u8>,
    slot: Vec<u32>,
    partial: Vec<EdgeFrame>,
    partial_edge: Vec<u32>,
}

impl Sweeper {
    fn new(m: usize) -> Self {
        Self {
            events: Vec::with_capacity(3 * m),
            info: Vec::with_capacity(m),
            mult: vec![0; m],
            slot: vec![u32::MAX; m],
            partial: Vec::with_capacity(m),
            partial_edge: Vec::with_capacity(m),
        }
    }

    fn remove_partial(&mut self, e: usize) {
        let k = self.slot[e] as usize;
        self.partial.swap_remove(k);
        self.partial_edge.swap_remove(k);
        if k < self.partial.len() {
            self.slot[self.partial_edge[k] as usize] = k as u32;
        }
        self.slot[e] = u32::MAX;
    }

    fn exact_length(&self, full: f64, r: f64) -> f64 {
        full + self.partial.iter().map(|f| f.length(r)).sum::<f64>()
    }

    fn exact_length_and_slope(&self, full: f64, r: f64) -> (f64, f64) {
        let r2 = r * r;
        let mut len = full;
        let mut slope = 0.0;
        for f in &self.partial {
            len += f.length(r);
            let (_, m) = f.piece(r);
            if m > 0 {
                slope += m as f64 * r / (r2 - f.h2).sqrt();
            }
        }
        (len, slope)
    }

    /// Sweeps radii around `c`, updating `best` and `bound`.
    fn run(&mut self, c: Point, edges: &[Segment], refine: bool, best: &mut Best, bound: &mut f64, counters: &mut Counters) {
        self.events.clear();
        self.info.clear();
        let mut r_max = 0.0f64;
        for (i, s) in edges.iter().enumerate() {
            let ev = edge_events(c, s);
            if let Some(ev) = &ev {
                let id = (i as u32) << 2;
                self.events.push((ev.enter.to_bits(), id | ENTER));
                if let Some(near) = ev.near {
                    self.events.push((near.to_bits(), id | NEAR_END));
                }
                self.events.push((ev.full.to_bits(), id | FULL));
                r_max = r_max.max(ev.full);
            }
            self.info.push(ev);
        }
        // Non-negative floats order like their bit patterns.
        self.events.sort_unstable();
        counters.events += self.events.len() as u64;
        let floor = 1e-9 * r_max;

        let mut full = 0.0f64; // length of fully covered edges
        let mut reach = 0.0f64; // length of edges met so far
        let mut mult_now = 0.0f64; // chord multiplicity of partial edges
        // Last exact evaluation: covered length `l0` at `r0`, and the
        // multiplicity of every edge partial since then.
        let (mut r0, mut l0, mut mult_since) = (0.0f64, 0.0f64, 0.0f64);
        let mut prev: Option<f64> = None;

        let mut i = 0;
        while i < self.events.len() {
            let key = self.events[i].0;
            let r = f64::from_bits(key);
            let mut exact_here: Option<f64> = None;

            if r > floor {
                let cap = |r: f64| reach.min(l0 + mult_since * (r * r - r0 * r0).max(0.0).sqrt());
                if let Some(ra) = prev {
                    let b = cap(r) / ra;
                    if refine {
                        if b > best.value {
                            let mut piece = Piece::at(&self.partial, 0.5 * (ra + r));
                            piece.constant += full;
                            let x = piece.argmax(ra, r);
                            let lx = self.exact_length(full, x);
                            counters.disks_evaluated += 1;
                            best.offer(lx / x, Disk::new(c, x));
                        }
                    } else if b > *bound {
                        // Concavity: the tangent at `r` bounds the length
                        // on the whole interval.
                        let (lr, slope) = self.exact_length_and_slope(full, r);
                        counters.disks_evaluated += 1;
                        exact_here = Some(lr);
                        let a = lr - slope * r;
                        let cap = if a > 0.0 { a / ra + slope } else { lr / r };
                        let mut cap = cap.min(lr / ra);
                        if cap > *bound {
                            // Still loose: settle the interval maximum.
                            let mut piece = Piece::at(&self.partial, 0.5 * (ra + r));
                            piece.constant += full;
                            let x = piece.argmax(ra, r);
                            cap = self.exact_length(full, x) / x * (1.0 + 1e-12);
                        }
                        *bound = bound.max(cap);
                    }
                }
                if exact_here.is_none() && cap(r) / r > best.value {
                    exact_here = Some(self.exact_length(full, r));
                    counters.disks_evaluated += 1;
                }
                if let Some(lr) = exact_here {
                    best.offer(lr / r, Disk::new(c, r));
                }
            }

            while i < self.events.len() && self.events[i].0 == key {
                let code = self.events[i].1;
                let e = (code >> 2) as usize;
                let ev = self.info[e].as_ref().expect("events come from valid edges");
                match code & 3 {
                    ENTER => {
                        self.mult[e] = ev.initial_mult;
                        mult_now += ev.initial_mult as f64;
                        mult_since += ev.initial_mult as f64;
                        reach += ev.len;
                        self.slot[e] = self.partial.len() as u32;
                        self.partial.push(ev.frame);
                        self.partial_edge.push(e as u32);
                    }
                    NEAR_END => {
                        self.mult[e] -= 1;
                        mult_now -= 1.0;
                    }
                    _ => {
                        mult_now -= self.mult[e] as f64;
                        self.mult[e] = 0;
                        full += ev.len;
                        self.remove_partial(e);
                    }
                }
                i += 1;
            }

            if let Some(lr) = exact_here {
                r0 = r;
                l0 = lr;
                mult_since = mult_now;
            }
            if r > floor {
                prev = Some(r);
            }
        }
        debug_assert!(self.partial.is_empty());
    }
}

pub(crate) fn vertex_sweep(curve: &PolyCurve, refine: bool) -> SweepOutcome {
    let edges = curve.edges();
    let mut sweeper = Sweeper::new(edges.len());
    let mut best = Best::new(Disk::new(curve.vertices()[0], 0.0));
    let mut bound = 0.0;
    let mut counters = Counters::default();
    for &v in curve.vertices() {
        sweeper.run(v, edges, refine, &mut best, &mut bound, &mut counters);
    }
    SweepOutcome { value: best.value, witness: best.disk, interval_bound: bound.max(best.value), counters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_walk;
    use crate::oracle::gamma;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn curve(c: &[(f64, f64)]) -> PolyCurve {
        PolyCurve::from_coords(c).unwrap()
    }

    #[test]
    fn single_edge_is_one() {
        let c = curve(&[(0.0, 0.0), (10.0, 0.0)]);
        assert_abs_diff_eq!(vertex_relative(&c, true).c_estimate, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vertex_relative(&c, false).c_estimate, 1.0, epsilon = 1e-12);
        let s = s_relative_exact(&c, &AnchorSet::vertices(&c));
        assert_abs_diff_eq!(s.c_estimate, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.certified_hi, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn crossing_anchor_is_four() {
        let c = curve(&[(-2.0, 0.0), (2.0, 0.0), (0.0, 2.0), (0.0, -2.0)]);
        let s = s_relative_exact(&c, &AnchorSet::new(vec![Point::new(0.0, 0.0)]).unwrap());
        assert!(s.c_estimate >= 4.0 - 1e-12);
        assert_eq!(s.certified_hi, f64::INFINITY);
    }

    #[test]
    fn l_curve_matches_scan() {
        let c = curve(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        let s = s_relative_exact(&c, &AnchorSet::vertices(&c)).c_estimate;
        assert_abs_diff_eq!(vertex_relative(&c, true).c_estimate, s, epsilon = 1e-12);
    }

    #[test]
    fn bounds_from_vr() {
        assert_eq!(packedness_bounds_from_vr(1.0), Interval::new(1.0, 2.0));
        assert_eq!(packedness_bounds_from_vr(0.0), Interval::new(0.0, 0.0));
    }

    #[test]
    fn anchor_set_validation() {
        assert_eq!(AnchorSet::new(vec![]), Err(RelativeError::Empty));
        assert_eq!(
            AnchorSet::new(vec![Point::new(0.0, 0.0), Point::new(f64::NAN, 1.0)]),
            Err(RelativeError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn walk_sweep_matches_scan() {
        let c = random_walk(300, 11);
        let fast = vertex_relative(&c, true);
        let slow = s_relative_exact(&c, &AnchorSet::vertices(&c));
        assert_abs_diff_eq!(fast.c_estimate, slow.c_estimate, epsilon = 1e-9 * slow.c_estimate);
        let w = fast.witness;
        assert_abs_diff_eq!(gamma(&w, &c).unwrap(), fast.c_estimate, epsilon = 1e-9);
    }

    #[test]
    fn event_mode_is_below_refined_with_valid_bound() {
        let c = random_walk(200, 5);
        let coarse = vertex_relative(&c, false);
        let fine = vertex_relative(&c, true);
        assert!(coarse.c_estimate <= fine.c_estimate + 1e-12);
        assert!(fine.c_estimate <= coarse.certified_hi / 2.0 + 1e-9);
    }

    /// Max over vertex-centered disks with radii on a dense grid.
    fn dense(c: &PolyCurve, steps: usize) -> f64 {
        let l = crate::curve::extent(c).diameter;
        let mut best = 0.0f64;
        for &v in c.vertices() {
            for k in 1..=steps {
                let d = Disk::new(v, 1.2 * l * k as f64 / steps as f64);
                best = best.max(gamma(&d, c).unwrap());
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sweep_equals_scan_and_dominates_grid(pts in prop::collection::vec((0i32..20, 0i32..20), 3..9)) {
            let mut v: Vec<(f64, f64)> = Vec::new();
            for (x, y) in pts {
                let p = (x as f64 * 0.5, y as f64 * 0.3);
                if v.last() != Some(&p) {
                    v.push(p);
                }
            }
            prop_assume!(v.len() >= 2);
            let c = curve(&v);
            let fast = vertex_relative(&c, true).c_estimate;
            let slow = s_relative_exact(&c, &AnchorSet::vertices(&c)).c_estimate;
            prop_assert!((fast - slow).abs() <= 1e-9 * (1.0 + slow));
            prop_assert!(dense(&c, 4000) <= fast + 1e-9);
            let events = vertex_relative(&c, false);
            prop_assert!(events.c_estimate <= fast + 1e-12);
            prop_assert!(fast <= events.certified_hi / 2.0 + 1e-9);
        }

        #[test]
        fn adding_anchors_never_decreases(pts in prop::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..6)) {
            let c = curve(&[(0.0, 0.0), (3.0, 1.0), (1.0, 4.0), (4.0, 4.0)]);
            let mut s: Vec<Point> = vec![Point::new(2.0, 2.0)];
            let mut prev = s_relative_exact(&c, &AnchorSet::new(s.clone()).unwrap()).c_estimate;
            for (x, y) in pts {
                s.push(Point::new(x, y));
                let now = s_relative_exact(&c, &AnchorSet::new(s.clone()).unwrap()).c_estimate;
                prop_assert!(now >= prev - 1e-12);
                prev = now;
            }
        }
    }
}
