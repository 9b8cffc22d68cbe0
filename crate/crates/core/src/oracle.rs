//! Brute-force reference implementations.
//!
//! Everything here is deliberately naive: packedness of a single disk by
//! linear scan, zero-radius limit values at junctions, and a dense sampling
//! of centers and radii whose maximum is a certified lower bound on the
//! minimum packedness constant. Other modules are checked against these.

use thiserror::Error;

use crate::curve::{extent, self_intersections, PolyCurve};
use crate::geometry::{clip_length, closest_points, Disk, Point};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("packedness is undefined for a disk of radius {0}")]
    NonPositiveRadius(f64),
    #[error("{field} must be at least {min}, got {value}")]
    ResolutionTooSmall { field: &'static str, min: usize, value: usize },
}

/// Curve length inside `d` divided by its radius.
pub fn gamma(d: &Disk, curve: &PolyCurve) -> Result<f64, OracleError> {
    if !(d.radius > 0.0) {
        return Err(OracleError::NonPositiveRadius(d.radius));
    }
    Ok(length_inside(d, curve) / d.radius)
}

/// Curve length inside `d` by linear scan over the edges.
pub fn length_inside(d: &Disk, curve: &PolyCurve) -> f64 {
    curve.edges().iter().map(|e| clip_length(e, d)).sum()
}

/// Packedness of vanishing disks centered at each vertex or crossing: the
/// number of half-edges leaving the point.
pub fn limit_candidates(curve: &PolyCurve) -> Vec<(Point, f64)> {
    self_intersections(curve)
        .into_iter()
        .map(|j| (j.point, j.half_edges as f64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Grid cells per axis over the bounding box inflated by the diameter;
    /// the grid has `cells + 1` points per axis, so doubling nests grids.
    pub grid_cells_per_axis: usize,
    /// Geometric steps between the smallest and largest probe radius.
    pub radius_steps: usize,
    /// Also probe vertices, edge midpoints, closest-pair points and crossings.
    pub include_feature_centers: bool,
}

impl OracleConfig {
    pub const MIN_RESOLUTION: usize = 8;

    pub fn new(grid_cells_per_axis: usize, radius_steps: usize) -> Self {
        Self { grid_cells_per_axis, radius_steps, include_feature_centers: true }
    }

    fn validate(&self) -> Result<(), OracleError> {
        let min = Self::MIN_RESOLUTION;
        if self.grid_cells_per_axis < min {
            return Err(OracleError::ResolutionTooSmall { field: "grid_cells_per_axis", min, value: self.grid_cells_per_axis });
        }
        if self.radius_steps < min {
            return Err(OracleError::ResolutionTooSmall { field: "radius_steps", min, value: self.radius_steps });
        }
        Ok(())
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self::new(64, 64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteResult {
    pub value: f64,
    pub witness: Disk,
    pub probes: u64,
}

/// Per-center precomputation for one edge.
struct EdgeProbe {
    dmin2: f64,
    dmax2: f64,
    len: f64,
    a2: f64,
    b: f64,
    ff: f64,
}

impl EdgeProbe {
    #[inline]
    fn length(&self, r2: f64) -> f64 {
        if r2 <= self.dmin2 {
            0.0
        } else if r2 >= self.dmax2 {
            self.len
        } else {
            let disc = self.b * self.b - self.a2 * (self.ff - r2);
            if disc <= 0.0 {
                return 0.0;
            }
            let sq = disc.sqrt();
            let t1 = ((-self.b - sq) / self.a2).max(0.0);
            let t2 = ((-self.b + sq) / self.a2).min(1.0);
            (t2 - t1).max(0.0) * self.len
        }
    }
}

/// Maximum sampled packedness: a lower bound on the minimum packedness
/// constant that converges to it as the resolution grows.
///
/// Centers: a `(cells+1)²` grid over the bounding box inflated by the
/// vertex diameter, plus curve features when enabled. Radii: a geometric
/// ladder from `δ/2` (or `diameter/1000` when δ is undefined) to twice the
/// diameter, the pairwise vertex distances and half-distances, and each
/// center's distances to all vertices. Zero-radius limit values are
/// included.
pub fn brute_min_c(curve: &PolyCurve, cfg: &OracleConfig) -> Result<BruteResult, OracleError> {
    cfg.validate()?;
    let ext = extent(curve);
    let diameter = ext.diameter;
    let r_lo = ext.delta.map_or(diameter * 1e-3, |d| 0.5 * d).max(diameter * 1e-9);
    let r_hi = 2.0 * diameter;

    let mut radii: Vec<f64> = (0..=cfg.radius_steps)
        .map(|k| r_lo * (r_hi / r_lo).powf(k as f64 / cfg.radius_steps as f64))
        .collect();
    let verts = curve.vertices();
    for (i, p) in verts.iter().enumerate() {
        for q in &verts[i + 1..] {
            let d = p.dist(*q);
            radii.push(d);
            radii.push(0.5 * d);
        }
    }
    radii.retain(|r| *r > 0.0);
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let mut best_value = 0.0;
    let mut best_disk = Disk::new(verts[0], 0.0);
    for (p, v) in limit_candidates(curve) {
        if v > best_value {
            best_value = v;
            best_disk = Disk::new(p, 0.0);
        }
    }

    let mut probes = 0u64;
    let mut probe_center = |c: Point, best_value: &mut f64, best_disk: &mut Disk| {
        let edge_probes: Vec<EdgeProbe> = curve
            .edges()
            .iter()
            .filter(|e| !e.is_degenerate())
            .map(|e| {
                let d = e.direction();
                let f = e.a - c;
                let dmin = e.distance_to(c);
                let dmax = e.farthest_distance(c);
                EdgeProbe { dmin2: dmin * dmin, dmax2: dmax * dmax, len: e.length(), a2: d.norm2(), b: f.dot(d), ff: f.norm2() }
            })
            .collect();
        let nearest2 = edge_probes.iter().map(|e| e.dmin2).fold(f64::INFINITY, f64::min);
        let mut eval = |r: f64| {
            let r2 = r * r;
            if r2 <= nearest2 {
                return;
            }
            probes += 1;
            let len: f64 = edge_probes.iter().map(|e| e.length(r2)).sum();
            let g = len / r;
            if g > *best_value {
                *best_value = g;
                *best_disk = Disk::new(c, r);
            }
        };
        for &r in &radii {
            eval(r);
        }
        for v in verts {
            let r = c.dist(*v);
            if r > 0.0 {
                eval(r);
            }
        }
    };

    let (lo, hi) = curve.bounding_box();
    let lo = Point::new(lo.x - diameter, lo.y - diameter);
    let hi = Point::new(hi.x + diameter, hi.y + diameter);
    let cells = cfg.grid_cells_per_axis;
    for i in 0..=cells {
        let x = lo.x + (hi.x - lo.x) * (i as f64 / cells as f64);
        for j in 0..=cells {
            let y = lo.y + (hi.y - lo.y) * (j as f64 / cells as f64);
            probe_center(Point::new(x, y), &mut best_value, &mut best_disk);
        }
    }

    if cfg.include_feature_centers {
        let mut centers: Vec<Point> = verts.to_vec();
        let edges = curve.edges();
        centers.extend(edges.iter().map(|e| e.midpoint()));
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (p, q, _) = closest_points(&edges[i], &edges[j]);
                centers.push(p);
                centers.push(q);
                centers.push(p.midpoint(q));
            }
        }
        centers.extend(self_intersections(curve).into_iter().map(|j| j.point));
        for c in centers {
            probe_center(c, &mut best_value, &mut best_disk);
        }
    }

    Ok(BruteResult { value: best_value, witness: best_disk, probes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn edge() -> PolyCurve {
        PolyCurve::from_coords(&[(0.0, 0.0), (10.0, 0.0)]).unwrap()
    }

    #[test]
    fn gamma_disk_centered_on_edge() {
        assert_abs_diff_eq!(gamma(&Disk::new(Point::new(5.0, 0.0), 1.0), &edge()).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gamma_disjoint_disk() {
        assert_eq!(gamma(&Disk::new(Point::new(5.0, 7.0), 1.0), &edge()).unwrap(), 0.0);
    }

    #[test]
    fn gamma_rejects_zero_radius() {
        assert_eq!(gamma(&Disk::new(Point::new(0.0, 0.0), 0.0), &edge()), Err(OracleError::NonPositiveRadius(0.0)));
    }

    #[test]
    fn gamma_rigid_motion_invariant() {
        let c = PolyCurve::from_coords(&[(0.0, 0.0), (3.0, 1.0), (1.0, 4.0), (5.0, 5.0)]).unwrap();
        let d = Disk::new(Point::new(2.0, 2.0), 2.5);
        let (s, co) = (0.7f64.sin(), 0.7f64.cos());
        let t = |p: Point| Point::new(co * p.x - s * p.y + 3.0, s * p.x + co * p.y - 8.0);
        let moved = c.map_vertices(t).unwrap();
        let g1 = gamma(&d, &c).unwrap();
        let g2 = gamma(&Disk::new(t(d.center), d.radius), &moved).unwrap();
        assert_abs_diff_eq!(g1, g2, epsilon = 1e-9);
    }

    #[test]
    fn limit_values() {
        let l = PolyCurve::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]).unwrap();
        let v: Vec<f64> = limit_candidates(&l).into_iter().map(|(_, v)| v).collect();
        assert_eq!(v, vec![1.0, 2.0, 1.0]);
        let x = PolyCurve::from_coords(&[(0.0, 0.0), (2.0, 2.0), (0.0, 2.0), (2.0, 0.0)]).unwrap();
        let max = limit_candidates(&x).into_iter().map(|(_, v)| v).fold(0.0, f64::max);
        assert_eq!(max, 4.0);
    }

    #[test]
    fn brute_single_edge_is_two() {
        let r = brute_min_c(&edge(), &OracleConfig::new(16, 16)).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn brute_rejects_low_resolution() {
        assert!(matches!(
            brute_min_c(&edge(), &OracleConfig::new(4, 16)),
            Err(OracleError::ResolutionTooSmall { field: "grid_cells_per_axis", .. })
        ));
        assert!(brute_min_c(&edge(), &OracleConfig::new(16, 7)).is_err());
    }

    #[test]
    fn brute_monotone_in_resolution() {
        let c = PolyCurve::from_coords(&[(0.0, 0.0), (5.0, 1.0), (2.0, 4.0), (6.0, 6.0), (1.0, 7.0)]).unwrap();
        let mut prev = 0.0;
        for k in [8, 16, 32, 64] {
            let v = brute_min_c(&c, &OracleConfig::new(k, k)).unwrap().value;
            assert!(v >= prev - 1e-12, "resolution {k}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn brute_at_least_limit_values() {
        let c = PolyCurve::from_coords(&[(0.0, 0.0), (4.0, 0.0), (4.0, 3.0)]).unwrap();
        let r = brute_min_c(&c, &OracleConfig::new(8, 8)).unwrap();
        assert!(r.value >= 2.0);
    }
}
