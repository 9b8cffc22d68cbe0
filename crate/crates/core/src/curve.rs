//! Polygonal curves: loading, validation, and the global extent quantities
//! (vertex diameter and minimum gap between disjoint edges).

use std::io::Read;

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{closest_points, segment_intersection, tol, Point, Segment, SegmentIntersection};

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON curve: {0}")]
    Json(String),
    #[error("vertex {index} repeats the previous vertex")]
    DuplicateVertex { index: usize },
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("a curve needs at least {needed} vertices, got {found}")]
    TooFewVertices { needed: usize, found: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Json,
}

/// An ordered vertex sequence; edges join consecutive vertices and, when
/// `closed`, the last vertex back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve {
    vertices: Vec<Point>,
    edges: Vec<Segment>,
    closed: bool,
}

impl PolyCurve {
    pub fn new(vertices: Vec<Point>, closed: bool) -> Result<Self, CurveError> {
        let needed = if closed { 3 } else { 2 };
        if vertices.len() < needed {
            return Err(CurveError::TooFewVertices { needed, found: vertices.len() });
        }
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(CurveError::NonFinite { index });
        }
        if let Some(index) = (1..vertices.len()).find(|&i| vertices[i] == vertices[i - 1]) {
            return Err(CurveError::DuplicateVertex { index });
        }
        if closed && vertices[0] == vertices[vertices.len() - 1] {
            return Err(CurveError::DuplicateVertex { index: 0 });
        }
        let mut edges: Vec<Segment> = vertices.windows(2).map(|w| Segment::new(w[0], w[1])).collect();
        if closed {
            edges.push(Segment::new(vertices[vertices.len() - 1], vertices[0]));
        }
        Ok(Self { vertices, edges, closed })
    }

    pub fn open(vertices: Vec<Point>) -> Result<Self, CurveError> {
        Self::new(vertices, false)
    }

    /// Convenience constructor from coordinate pairs.
    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self, CurveError> {
        Self::open(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Segment] {
        &self.edges
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(Segment::length).sum()
    }

    /// Edges sharing a vertex (an edge is adjacent to itself).
    pub fn edges_adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.edges.len();
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        hi - lo <= 1 || (self.closed && lo == 0 && hi == m - 1)
    }

    /// Axis-aligned bounding box as (min corner, max corner).
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices[1..] {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Applies `f` to every vertex and revalidates.
    pub fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Self, CurveError> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect(), self.closed)
    }

    /// Same point set traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self::new(v, self.closed).expect("reversal preserves validity")
    }
}

#[derive(Deserialize)]
struct JsonCurve {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    closed: bool,
}

/// Reads a curve from `source`.
///
/// CSV: one `x,y` pair per line; blank lines and `#` comments are ignored.
/// JSON: `{"vertices": [[x, y], ...], "closed": false}`.
pub fn load_curve<R: Read>(mut source: R, format: CurveFormat) -> Result<PolyCurve, CurveError> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| CurveError::Io(e.to_string()))?;
    match format {
        CurveFormat::Csv => parse_csv(&text),
        CurveFormat::Json => parse_json(&text),
    }
}

pub fn parse_csv(text: &str) -> Result<PolyCurve, CurveError> {
    let mut vertices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CurveError::Parse {
                line,
                message: format!("expected 2 comma-separated fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| CurveError::Parse { line, message: format!("bad number {s:?}: {e}") })
        };
        let p = Point::new(parse(fields[0])?, parse(fields[1])?);
        if !p.is_finite() {
            return Err(CurveError::Parse { line, message: "non-finite coordinate".into() });
        }
        vertices.push(p);
    }
    PolyCurve::open(vertices)
}

pub fn parse_json(text: &str) -> Result<PolyCurve, CurveError> {
    let raw: JsonCurve = serde_json::from_str(text).map_err(|e| CurveError::Json(e.to_string()))?;
    PolyCurve::new(raw.vertices.into_iter().map(|[x, y]| Point::new(x, y)).collect(), raw.closed)
}

/// Writes the CSV form read by [`parse_csv`]. A closed curve repeats its
/// first vertex at the end, which reads back as the same point set.
pub fn to_csv(curve: &PolyCurve) -> String {
    let mut out = String::new();
    let closing = curve.is_closed().then(|| curve.vertices()[0]);
    for p in curve.vertices().iter().chain(closing.as_ref()) {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

/// Global scale quantities of a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveExtent {
    /// Largest distance between two vertices.
    pub diameter: f64,
    /// Smallest distance between two non-adjacent, non-intersecting edges.
    /// `None` when every edge pair is adjacent or crossing.
    pub delta: Option<f64>,
}

pub fn extent(curve: &PolyCurve) -> CurveExtent {
    let v = curve.vertices();
    let mut diameter = 0.0f64;
    for (i, p) in v.iter().enumerate() {
        for q in &v[i + 1..] {
            diameter = diameter.max(p.dist(*q));
        }
    }
    let e = curve.edges();
    let mut delta: Option<f64> = None;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if curve.edges_adjacent(i, j) || segment_intersection(&e[i], &e[j]).is_some() {
                continue;
            }
            let (_, _, d) = closest_points(&e[i], &e[j]);
            delta = Some(delta.map_or(d, |m| m.min(d)));
        }
    }
    CurveExtent { diameter, delta }
}

/// A vertex or crossing point with the number of edge pieces emanating
/// from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Junction {
    pub point: Point,
    /// Half-edges incident to the point: an edge passing straight through
    /// counts 2, an edge ending there counts 1.
    pub half_edges: usize,
}

/// All vertices plus every point where distinct edges meet or overlap,
/// each with its half-edge count.
pub fn self_intersections(curve: &PolyCurve) -> Vec<Junction> {
    let e = curve.edges();
    let scale = {
        let (lo, hi) = curve.bounding_box();
        lo.norm().max(hi.norm()).max(lo.dist(hi))
    };
    let eps = tol(scale) * 10.0;
    let mut points: Vec<Point> = curve.vertices().to_vec();
    let push = |p: Point, pts: &mut Vec<Point>| {
        if !pts.iter().any(|q| q.dist(p) <= eps) {
            pts.push(p);
        }
    };
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            match segment_intersection(&e[i], &e[j]) {
                None => {}
                Some(SegmentIntersection::Point(p)) => push(p, &mut points),
                Some(SegmentIntersection::Overlap(o)) => {
                    push(o.a, &mut points);
                    push(o.b, &mut points);
                    push(o.midpoint(), &mut points);
                }
            }
        }
    }
    points
        .into_iter()
        .map(|p| {
            let half_edges = e
                .iter()
                .map(|s| {
                    if s.a.dist(p) <= eps || s.b.dist(p) <= eps {
                        1
                    } else if s.distance_to(p) <= eps {
                        2
                    } else {
                        0
                    }
                })
                .sum();
            Junction { point: p, half_edges }
        })
        .collect()
}
