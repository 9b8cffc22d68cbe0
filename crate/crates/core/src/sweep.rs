//! Fixed-radius sweep of a disk whose center travels along the curve, and
//! the geometric radius ladder that turns it into a `2(1+ε)` approximation.

use thiserror::Error;

use crate::curve::{extent, CurveExtent, PolyCurve};
use crate::geometry::{clip_length, Disk, Point, Segment};
use crate::oracle::limit_candidates;
use crate::report::{Best, Counters, PackednessReport, Stopwatch};

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("the curve has no pair of separated non-adjacent edges, so the radius ladder is undefined; use the exact algorithm instead")]
    NoDelta,
}

/// Radii `δ(1+ε)^i` for `i = 0..=⌈log_{1+ε}(L/δ)⌉`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusLadder {
    pub radii: Vec<f64>,
}

pub fn radius_ladder(ext: &CurveExtent, epsilon: f64) -> Result<RadiusLadder, SweepError> {
    if !(epsilon > 0.0) {
        return Err(SweepError::BadEpsilon(epsilon));
    }
    let delta = ext.delta.filter(|d| *d > 0.0).ok_or(SweepError::NoDelta)?;
    let ratio = (ext.diameter / delta).max(1.0);
    let steps = (ratio.ln() / epsilon.ln_1p() - 1e-9).ceil().max(0.0) as i32;
    let radii = (0..=steps).map(|i| delta * (1.0 + epsilon).powi(i)).collect();
    Ok(RadiusLadder { radii })
}

const PROBES: usize = 32;

/// Curve length inside the radius-`r` disk centered at `c`.
fn length_at(edges: &[Segment], c: Point, r: f64) -> f64 {
    let d = Disk::new(c, r);
    edges.iter().map(|e| clip_length(e, &d)).sum()
}

/// Parameters along `s` (arc length from `s.a`) where the radius-`r` disk
/// centered on `s` changes how it meets `other`: an endpoint of `other`
/// crosses the circle, or the circle becomes tangent to its line.
fn events_on(s: &Segment, other: &Segment, r: f64, out: &mut Vec<f64>) {
    let len = s.length();
    let u = s.direction() * (1.0 / len);
    for q in [other.a, other.b] {
        let rel = q - s.a;
        let along = rel.dot(u);
        let off2 = r * r - u.cross(rel).powi(2);
        if off2 >= 0.0 {
            let w = off2.sqrt();
            out.extend([along - w, along + w]);
        }
    }
    let ol = other.length();
    if ol > 0.0 {
        let n = other.direction().perp() * (1.0 / ol);
        let s0 = (s.a - other.a).dot(n);
        let s1 = u.dot(n);
        if s1.abs() > 1e-15 {
            out.extend([(r - s0) / s1, (-r - s0) / s1]);
        }
    }
}

/// Largest packedness of radius-`r` disks centered on the curve, with the
/// center attaining it.
pub fn sweep_fixed_radius(curve: &PolyCurve, r: f64) -> (f64, Point) {
    assert!(r > 0.0, "radius must be positive");
    let edges = curve.edges();
    let mut best = (f64::NEG_INFINITY, curve.vertices()[0]);
    let mut ts = Vec::new();
    for s in edges {
        let len = s.length();
        if len == 0.0 {
            continue;
        }
        let u = s.direction() * (1.0 / len);
        let at = |t: f64| s.a + u * t;
        let f = |t: f64| length_at(edges, at(t), r);
        ts.clear();
        ts.extend([0.0, len]);
        for o in edges {
            events_on(s, o, r, &mut ts);
        }
        ts.retain(|t| *t >= 0.0 && *t <= len);
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let mut offer = |t: f64, v: f64| {
            if v > best.0 {
                best = (v, at(t));
            }
        };
        for w in ts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            offer(lo, f(lo));
            if hi - lo <= 1e-12 * len {
                continue;
            }
            let step = (hi - lo) / PROBES as f64;
            let (mut k, mut kv) = (0, f64::NEG_INFINITY);
            for i in 0..=PROBES {
                let v = f(lo + step * i as f64);
                if v > kv {
                    (k, kv) = (i, v);
                }
            }
            let t = refine(&f, 1e-8 * len, (lo + step * k.saturating_sub(1) as f64).max(lo), (lo + step * (k + 1) as f64).min(hi));
            let (t, v) = if f(t) > kv { (t, f(t)) } else { (lo + step * k as f64, kv) };
            offer(t, v);
        }
        if let Some(&t) = ts.last() {
            offer(t, f(t));
        }
    }
    (best.0 / r, best.1)
}

/// Bisection on the sign of a central-difference derivative, down to
/// width `tol`.
fn refine(f: &impl Fn(f64) -> f64, tol: f64, mut lo: f64, mut hi: f64) -> f64 {
    let h = 1e-9 * (hi - lo).max(1e-300);
    while hi - lo > tol {
        let m = 0.5 * (lo + hi);
        if f(m + h) > f(m - h) {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Ladder of fixed-radius sweeps, combined with the vanishing-radius limits.
/// The true packedness lies in `[ĉ, 2(1+ε)·ĉ]`.
pub fn min_c_sweep(curve: &PolyCurve, epsilon: f64) -> Result<PackednessReport, SweepError> {
    let clock = Stopwatch::start();
    let ladder = radius_ladder(&extent(curve), epsilon)?;
    let mut best = Best::new(Disk::new(curve.vertices()[0], 0.0));
    for &(p, v) in &limit_candidates(curve) {
        best.offer(v, Disk::new(p, 0.0));
    }
    for &r in &ladder.radii {
        let (v, c) = sweep_fixed_radius(curve, r);
        best.offer(v, Disk::new(c, r));
    }
    Ok(PackednessReport {
        algorithm: "sweep".into(),
        c_estimate: best.value,
        certified_lo: best.value,
        certified_hi: 2.0 * (1.0 + epsilon) * best.value,
        witness: best.disk,
        counters: Counters { events: ladder.radii.len() as u64, disks_evaluated: ladder.radii.len() as u64, rounds: None },
        wall_time_ms: clock.elapsed_ms(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_walk;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ext(delta: f64, diameter: f64) -> CurveExtent {
        CurveExtent { diameter, delta: Some(delta) }
    }

    #[test]
    fn ladder_powers_of_two() {
        assert_eq!(radius_ladder(&ext(1.0, 8.0), 1.0).unwrap().radii, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(radius_ladder(&ext(3.0, 3.0), 0.5).unwrap().radii, vec![3.0]);
        assert_eq!(radius_ladder(&ext(1.0, 10.0), 0.1).unwrap().radii.len(), 26);
    }

    #[test]
    fn ladder_needs_delta() {
        let e = CurveExtent { diameter: 4.0, delta: None };
        assert_eq!(radius_ladder(&e, 0.1), Err(SweepError::NoDelta));
        assert_eq!(radius_ladder(&ext(1.0, 4.0), 0.0), Err(SweepError::BadEpsilon(0.0)));
    }

    #[test]
    fn single_edge_fixed_radius() {
        let c = PolyCurve::from_coords(&[(0.0, 0.0), (10.0, 0.0)]).unwrap();
        let (v, at) = sweep_fixed_radius(&c, 1.0);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
        assert!(at.x >= 1.0 - 1e-9 && at.x <= 9.0 + 1e-9);
    }

    #[test]
    fn crossing_small_radius() {
        let c = PolyCurve::from_coords(&[(-2.0, 0.0), (2.0, 0.0), (0.0, 2.0), (0.0, -2.0)]).unwrap();
        let (v, at) = sweep_fixed_radius(&c, 0.01);
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-9);
        assert!(at.norm() <= 0.01);
    }

    #[test]
    fn single_edge_needs_exact_instead() {
        let c = PolyCurve::from_coords(&[(0.0, 0.0), (10.0, 0.0)]).unwrap();
        assert_eq!(min_c_sweep(&c, 0.1), Err(SweepError::NoDelta));
    }

    #[test]
    fn matches_dense_sampling() {
        let c = random_walk(12, 17);
        for r in [0.3, 1.0, 2.5] {
            let (v, _) = sweep_fixed_radius(&c, r);
            let mut dense = 0.0f64;
            let total = c.total_length();
            let samples = 100_000;
            let mut acc = 0.0;
            let mut k = 0;
            for e in c.edges() {
                let len = e.length();
                while k <= samples && (k as f64 / samples as f64) * total <= acc + len {
                    let t = (k as f64 / samples as f64) * total - acc;
                    dense = dense.max(length_at(c.edges(), e.point_at(t / len), r) / r);
                    k += 1;
                }
                acc += len;
            }
            assert!(v >= dense - 1e-12, "r {r}: sweep {v} dense {dense}");
            assert!(v - dense <= 1e-4, "r {r}: sweep {v} dense {dense}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn direction_invariant(seed in 0u64..500, r in 0.2f64..3.0) {
            let c = random_walk(10, seed);
            let (a, _) = sweep_fixed_radius(&c, r);
            let (b, _) = sweep_fixed_radius(&c.reversed(), r);
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn continuous_in_radius(seed in 0u64..500, r in 0.2f64..3.0) {
            let c = random_walk(10, seed);
            let (a, _) = sweep_fixed_radius(&c, r);
            let (b, _) = sweep_fixed_radius(&c, r * (1.0 + 1e-6));
            prop_assert!((a - b).abs() <= 1e-4);
        }
    }
}
