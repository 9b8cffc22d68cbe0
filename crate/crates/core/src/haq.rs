//! Exact length queries for arbitrary disks.
//!
//! The index stores the sorted event radii of the exact algorithm as levels
//! and one R-tree over the edges. A query of radius `r` is answered at the
//! smallest level `r* ≥ r`: the candidate edges are those within distance
//! `r*` of the center, which include every edge meeting the query disk, and
//! the length is summed over the candidates only.

use rstar::{RTree, RTreeObject, AABB};

use crate::curve::PolyCurve;
use crate::exact::enumerate_events;
use crate::geometry::{clip_length, tol, Disk, Segment};

struct EdgeBox {
    id: usize,
    envelope: AABB<[f64; 2]>,
}

impl RTreeObject for EdgeBox {
    type Envelope = AABB<[f64; 2]>;

    fn envelope(&self) -> Self::Envelope {
        self.envelope
    }
}

pub struct HaqIndex {
    radii: Vec<f64>,
    edges: Vec<Segment>,
    tree: RTree<EdgeBox>,
    events: usize,
}

/// Answer to a length query with its provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueryAnswer {
    pub length: f64,
    /// Level used; `None` when the radius exceeds every level and the query
    /// fell back to a full scan.
    pub level: Option<f64>,
    /// Candidate edges examined.
    pub candidates: usize,
    /// Candidate edges that actually meet the query disk.
    pub hits: usize,
}

impl QueryAnswer {
    pub fn fell_back(&self) -> bool {
        self.level.is_none()
    }
}

/// Builds the index over the deduplicated event radii of `curve`.
pub fn build_haq(curve: &PolyCurve) -> HaqIndex {
    let events = enumerate_events(curve);
    let radii: Vec<f64> = events.iter().map(|e| e.disk.radius).filter(|r| *r > 0.0).collect();
    build_with_radii(curve, radii, events.len())
}

fn build_with_radii(curve: &PolyCurve, mut radii: Vec<f64>, events: usize) -> HaqIndex {
    radii.sort_by(f64::total_cmp);
    let slack = 1e-9 * radii.last().copied().unwrap_or(0.0);
    // Keep the largest radius of each cluster so the level still covers
    // every query in it.
    let mut levels: Vec<f64> = Vec::with_capacity(radii.len());
    for r in radii {
        match levels.last_mut() {
            Some(last) if r - *last <= slack => *last = r,
            _ => levels.push(r),
        }
    }
    let edges = curve.edges().to_vec();
    let boxes = edges
        .iter()
        .enumerate()
        .map(|(id, s)| EdgeBox {
            id,
            envelope: AABB::from_corners([s.a.x.min(s.b.x), s.a.y.min(s.b.y)], [s.a.x.max(s.b.x), s.a.y.max(s.b.y)]),
        })
        .collect();
    HaqIndex { radii: levels, edges, tree: RTree::bulk_load(boxes), events }
}

impl HaqIndex {
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn event_count(&self) -> usize {
        self.events
    }

    /// Smallest level at least `r`.
    pub fn level_for(&self, r: f64) -> Option<f64> {
        let i = self.radii.partition_point(|&x| x < r);
        self.radii.get(i).copied()
    }

    /// Ids, in increasing order, of the edges within distance `level` of
    /// `q`'s center, with the crate tolerance.
    pub fn candidates(&self, q: &Disk, level: f64) -> Vec<usize> {
        let c = q.center;
        let reach = level + tol(level);
        let window = AABB::from_corners([c.x - reach, c.y - reach], [c.x + reach, c.y + reach]);
        let mut ids: Vec<usize> = self
            .tree
            .locate_in_envelope_intersecting(&window)
            .filter(|b| self.edges[b.id].distance_to(c) <= level + tol(level))
            .map(|b| b.id)
            .collect();
        ids.sort_unstable();
        ids
    }
}

/// Curve length inside `q`, answered through the index.
pub fn length_query(index: &HaqIndex, q: &Disk) -> QueryAnswer {
    let Some(level) = index.level_for(q.radius) else {
        let length = index.edges.iter().map(|e| clip_length(e, q)).sum();
        return QueryAnswer { length, level: None, candidates: index.edges.len(), hits: index.edges.iter().filter(|e| q.meets(e)).count() };
    };
    let ids = index.candidates(q, level);
    let mut length = 0.0;
    let mut hits = 0;
    for &i in &ids {
        let l = clip_length(&index.edges[i], q);
        length += l;
        if q.meets(&index.edges[i]) {
            hits += 1;
        }
    }
    QueryAnswer { length, level: Some(level), candidates: ids.len(), hits }
}

/// Curve length inside `q` by scanning every edge.
pub fn length_query_scan(curve: &PolyCurve, q: &Disk) -> f64 {
    curve.edges().iter().map(|e| clip_length(e, q)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_walk;
    use crate::geometry::Point;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn single_edge() {
        let c = PolyCurve::from_coords(&[(0.0, 0.0), (4.0, 0.0)]).unwrap();
        let idx = build_haq(&c);
        assert!(!idx.radii().is_empty());
        let q = Disk::new(Point::new(2.0, 0.0), 1.5);
        let a = length_query(&idx, &q);
        assert!(!a.fell_back());
        assert_abs_diff_eq!(a.length, 3.0, epsilon = 1e-12);
        let far = Disk::new(Point::new(2.0, 9.0), 1.0);
        assert_eq!(length_query(&idx, &far).length, 0.0);
    }

    #[test]
    fn duplicate_radii_collapse() {
        let c = random_walk(5, 1);
        let idx = build_with_radii(&c, vec![1.0, 1.0 + 1e-12, 2.0, 2.0, 3.0], 5);
        assert_eq!(idx.radii(), &[1.0 + 1e-12, 2.0, 3.0]);
        assert!(idx.radii().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn larger_than_every_level_falls_back() {
        let c = random_walk(6, 3);
        let idx = build_haq(&c);
        let q = Disk::new(Point::new(0.0, 0.0), 10.0 * idx.radii().last().unwrap());
        let a = length_query(&idx, &q);
        assert!(a.fell_back());
        assert_abs_diff_eq!(a.length, c.total_length(), epsilon = 1e-9);
    }

    #[test]
    fn fifty_vertex_build() {
        let c = random_walk(50, 4);
        let idx = build_haq(&c);
        assert!(idx.radii().len() <= idx.event_count());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn agrees_with_scan(seed in 0u64..50, x in -6.0f64..6.0, y in -6.0f64..6.0, r in 0.01f64..6.0) {
            let c = random_walk(12, seed);
            let idx = build_haq(&c);
            let q = Disk::new(Point::new(x, y), r);
            let a = length_query(&idx, &q);
            let scan = length_query_scan(&c, &q);
            prop_assert!((a.length - scan).abs() <= 1e-9 * (1.0 + scan));
            let meeting = c.edges().iter().filter(|e| q.meets(e)).count();
            prop_assert!(a.hits == meeting || a.fell_back());
            prop_assert!(a.candidates >= meeting);
        }
    }
}
