//! Exact minimum packedness.
//!
//! Candidate disks come from the pair-based event enumeration: for every
//! pair of edges the two closest points define a base circle, and every
//! further edge contributes the point minimizing the circle through the
//! pair plus its two endpoints. A candidate that falls outside all circles
//! generated so far for the pair opens a new event. Each event is evaluated
//! at its generating circle and at its maximal disk.
//!
//! The event set alone does not reach every optimum (the best disk can be
//! pinned by tangencies rather than by points on the curve), so the centers
//! of the strongest events are polished: the packedness maximized over the
//! radius is a continuous function of the center, and a Nelder-Mead search
//! started at each seed climbs it to its local maximum.

use thiserror::Error;

use crate::curve::{extent, PolyCurve};
use crate::geometry::{closest_points, min_circle_point_on_segment, min_circle_through, smallest_enclosing_disk, Disk, Point, Segment};
use crate::oracle::{length_inside, limit_candidates};
use crate::radial;
use crate::report::{Best, Counters, Interval, PackednessReport, Stopwatch};

#[derive(Debug, Error, PartialEq)]
pub enum FatnessError {
    #[error("fatness must be at least 1, got {0}")]
    AlphaBelowOne(f64),
    #[error("packedness must be a finite non-negative number, got {0}")]
    InvalidPackedness(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contact {
    pub edge: usize,
    pub point: Point,
}

/// Two or three curve points defining an event's circle.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactSet(Vec<Contact>);

impl ContactSet {
    /// `None` unless there are 2 or 3 contacts.
    pub fn new(contacts: Vec<Contact>) -> Option<Self> {
        (2..=3).contains(&contacts.len()).then_some(Self(contacts))
    }

    pub fn contacts(&self) -> &[Contact] {
        &self.0
    }

    pub fn points(&self) -> Vec<Point> {
        self.0.iter().map(|c| c.point).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Event {
    /// Edges meeting `disk`, ascending.
    pub edges: Vec<usize>,
    pub contacts: ContactSet,
    /// Smallest circle through the contacts.
    pub generator: Disk,
    /// Maximal disk of the event.
    pub disk: Disk,
    /// Packedness of `disk`.
    pub value: f64,
}

fn meeting(edges: &[Segment], d: &Disk) -> Vec<usize> {
    (0..edges.len()).filter(|&i| d.meets(&edges[i])).collect()
}

/// Largest disk of the family defined by contacts `contacts` and meeting
/// edges `edge_ids`.
///
/// When the smallest circle through the contacts already meets every edge
/// of the family it is returned. Otherwise the smallest circle through two
/// or three endpoints of the contact edges that still meets each contact
/// edge is taken as a pivot, and the answer is the smallest disk enclosing
/// the contacts, the pivot's defining points and the closest point of every
/// family edge to the pivot's center. `None` when no pivot exists.
pub fn maximal_disk(edge_ids: &[usize], contacts: &ContactSet, curve: &PolyCurve) -> Option<Disk> {
    let edges = curve.edges();
    let pts = contacts.points();
    let base = min_circle_through(&pts);
    if edge_ids.iter().all(|&e| base.meets(&edges[e])) {
        return Some(base);
    }

    let mut contact_edges: Vec<usize> = contacts.contacts().iter().map(|c| c.edge).collect();
    contact_edges.sort_unstable();
    contact_edges.dedup();
    let ends: Vec<Point> = contact_edges.iter().flat_map(|&e| [edges[e].a, edges[e].b]).collect();

    let mut pivot: Option<(Disk, Vec<Point>)> = None;
    let mut consider = |subset: Vec<Point>| {
        let d = min_circle_through(&subset);
        if contact_edges.iter().all(|&e| d.meets(&edges[e])) && pivot.as_ref().is_none_or(|(p, _)| d.radius < p.radius) {
            pivot = Some((d, subset));
        }
    };
    for i in 0..ends.len() {
        for j in i + 1..ends.len() {
            consider(vec![ends[i], ends[j]]);
            for k in j + 1..ends.len() {
                consider(vec![ends[i], ends[j], ends[k]]);
            }
        }
    }
    let (pivot, defining) = pivot?;
    let mut all = pts;
    all.extend(defining);
    all.extend(edge_ids.iter().map(|&e| edges[e].closest_point(pivot.center)));
    let d = smallest_enclosing_disk(&all);
    (d.radius > 0.0 && d.radius.is_finite()).then_some(d)
}

/// All events of the pair-based enumeration.
pub fn enumerate_events(curve: &PolyCurve) -> Vec<Event> {
    let edges = curve.edges();
    let m = edges.len();
    let mut events = Vec::new();
    let mut circles: Vec<Disk> = Vec::new();

    for i in 0..m {
        for j in i..m {
            let (pi, pj) = if i == j {
                (edges[i].a, edges[i].b)
            } else {
                let (p, q, _) = closest_points(&edges[i], &edges[j]);
                (p, q)
            };
            circles.clear();
            let base = min_circle_through(&[pi, pj]);
            circles.push(base);
            let base_contacts = ContactSet(vec![Contact { edge: i, point: pi }, Contact { edge: j, point: pj }]);
            push_event(curve, base, base_contacts, &mut events);

            for k in 0..m {
                if k == i || k == j {
                    continue;
                }
                let s = &edges[k];
                for q in [min_circle_point_on_segment(pi, pj, s), s.a, s.b] {
                    if circles.iter().any(|c| c.contains(q)) {
                        continue;
                    }
                    let circle = min_circle_through(&[pi, pj, q]);
                    circles.push(circle);
                    let contacts = ContactSet(vec![
                        Contact { edge: i, point: pi },
                        Contact { edge: j, point: pj },
                        Contact { edge: k, point: q },
                    ]);
                    push_event(curve, circle, contacts, &mut events);
                }
            }
        }
    }
    events
}

fn push_event(curve: &PolyCurve, generator: Disk, contacts: ContactSet, out: &mut Vec<Event>) {
    if !(generator.radius > 0.0) {
        return;
    }
    let family = meeting(curve.edges(), &generator);
    let Some(disk) = maximal_disk(&family, &contacts, curve) else {
        return;
    };
    let value = length_inside(&disk, curve) / disk.radius;
    out.push(Event { edges: meeting(curve.edges(), &disk), contacts, generator, disk, value });
}

/// Number of polished seeds.
const POLISH_SEEDS: usize = 24;

/// Minimum packedness constant of the curve.
pub fn min_c_exact(curve: &PolyCurve) -> PackednessReport {
    let clock = Stopwatch::start();
    let edges = curve.edges();
    let scale = extent(curve).diameter.max(f64::MIN_POSITIVE);
    let mut best = Best::new(Disk::new(curve.vertices()[0], 0.0));
    let mut counters = Counters::default();

    for (p, v) in limit_candidates(curve) {
        best.offer(v, Disk::new(p, 0.0));
    }

    let events = enumerate_events(curve);
    counters.events = events.len() as u64;

    // Seeds: every candidate center with the best packedness over radii.
    let mut centers: Vec<Point> = Vec::with_capacity(2 * events.len() + 2 * edges.len());
    // Disks this small only reproduce the limit values, up to rounding.
    let min_radius = 1e-9 * scale;
    for ev in &events {
        counters.disks_evaluated += 2;
        if ev.disk.radius > min_radius {
            best.offer(ev.value, ev.disk);
        }
        let g = ev.generator;
        if g.radius > min_radius {
            best.offer(length_inside(&g, curve) / g.radius, g);
        }
        centers.push(ev.disk.center);
        centers.push(g.center);
    }
    centers.extend_from_slice(curve.vertices());
    centers.extend(edges.iter().map(|e| e.midpoint()));

    let mut seeds: Vec<(f64, Point, f64)> = centers
        .into_iter()
        .map(|c| {
            counters.disks_evaluated += 1;
            let (v, r) = radial::best_at(c, edges, 0.0);
            (v, c, r)
        })
        .collect();
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut chosen: Vec<(f64, Point, f64)> = Vec::new();
    for s in seeds {
        if chosen.len() == POLISH_SEEDS {
            break;
        }
        if chosen.iter().all(|c| c.1.dist(s.1) > 1e-6 * scale) {
            chosen.push(s);
        }
    }

    for (v, c, r) in chosen {
        best.offer(v, Disk::new(c, r));
        let frame = local_frame(c, curve);
        let step = if r > 0.0 { 0.1 * r } else { 1e-2 * scale };
        let (value, center, radius, evals) = polish(c, frame, step, scale, edges);
        counters.disks_evaluated += evals;
        best.offer(value, Disk::new(center, radius));
    }

    PackednessReport {
        algorithm: "exact".into(),
        c_estimate: best.value,
        certified_lo: best.value,
        certified_hi: best.value,
        witness: best.disk,
        counters,
        wall_time_ms: clock.elapsed_ms(),
    }
}

/// Orthonormal frame whose first axis points from `c` to the nearest vertex
/// (or along the first edge when `c` is a vertex), so the polish commutes
/// with rigid motions and scaling.
fn local_frame(c: Point, curve: &PolyCurve) -> (Point, Point) {
    let scale = extent(curve).diameter;
    let nearest = curve
        .vertices()
        .iter()
        .copied()
        .filter(|v| v.dist(c) > 1e-9 * scale)
        .min_by(|a, b| a.dist2(c).total_cmp(&b.dist2(c)));
    let dir = match nearest {
        Some(v) => v - c,
        None => curve.edges()[0].direction(),
    };
    let u = dir * (1.0 / dir.norm());
    (u, u.perp())
}

/// Nelder-Mead ascent on the center, maximizing over the radius at every
/// step. Restarts with a smaller simplex until no further gain. Returns
/// `(value, center, radius, evaluations)`.
fn polish(start: Point, frame: (Point, Point), step: f64, scale: f64, edges: &[Segment]) -> (f64, Point, f64, u64) {
    let to_point = |x: [f64; 2]| start + frame.0 * x[0] + frame.1 * x[1];
    let mut evals = 0u64;
    let mut f = |x: [f64; 2]| {
        evals += 1;
        radial::best_at(to_point(x), edges, 0.0)
    };

    let mut origin = [0.0, 0.0];
    let mut best = f(origin);
    let mut step = step;
    for _ in 0..6 {
        let (x, v) = nelder_mead(&mut |x| f(x).0, origin, step, 1e-13 * scale, 600);
        if v > best.0 * (1.0 + 1e-15) {
            origin = x;
            best = f(x);
            step *= 0.25;
        } else {
            break;
        }
    }
    (best.0, to_point(origin), best.1, evals)
}

/// Maximizes `f` over the plane starting from a right-angled simplex at
/// `x0`. Stops when the simplex diameter falls below `tol_x` or after
/// `max_iter` iterations.
fn nelder_mead(f: &mut impl FnMut([f64; 2]) -> f64, x0: [f64; 2], step: f64, tol_x: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut simplex = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut vals = [f(simplex[0]), f(simplex[1]), f(simplex[2])];
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    for _ in 0..max_iter {
        // Order descending: best first.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];

        let diam = (0..3)
            .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
            .map(|(a, b)| ((simplex[a][0] - simplex[b][0]).powi(2) + (simplex[a][1] - simplex[b][1]).powi(2)).sqrt())
            .fold(0.0, f64::max);
        if diam < tol_x {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let worst = simplex[2];
        let xr = lerp(centroid, worst, -1.0);
        let fr = f(xr);
        if fr > vals[0] {
            let xe = lerp(centroid, worst, -2.0);
            let fe = f(xe);
            if fe > fr {
                simplex[2] = xe;
                vals[2] = fe;
            } else {
                simplex[2] = xr;
                vals[2] = fr;
            }
        } else if fr > vals[1] {
            simplex[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr > vals[2] {
                let xc = lerp(centroid, worst, -0.5);
                (xc, f(xc))
            } else {
                let xc = lerp(centroid, worst, 0.5);
                (xc, f(xc))
            };
            if fc > vals[2].max(fr) {
                simplex[2] = xc;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    vals[k] = f(simplex[k]);
                }
            }
        }
    }
    let k = (0..3).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (simplex[k], vals[k])
}

/// Packedness range of an α-fat shape whose inscribed disk analogue has
/// packedness `c_circle`.
pub fn fat_bounds(c_circle: f64, alpha: f64) -> Result<Interval, FatnessError> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(FatnessError::AlphaBelowOne(alpha));
    }
    if !(c_circle >= 0.0) || !c_circle.is_finite() {
        return Err(FatnessError::InvalidPackedness(c_circle));
    }
    Ok(Interval::new(c_circle / alpha, c_circle * alpha))
}
