//! Seeded random and structured test curves.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::PolyCurve;
use crate::geometry::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Walk,
    Spiral,
    Star,
    Grid,
}

impl FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "walk" => Ok(Self::Walk),
            "spiral" => Ok(Self::Spiral),
            "star" => Ok(Self::Star),
            "grid" => Ok(Self::Grid),
            other => Err(format!("unknown curve kind `{other}` (expected walk, spiral, star or grid)")),
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Walk => "walk",
            Self::Spiral => "spiral",
            Self::Star => "star",
            Self::Grid => "grid",
        })
    }
}

/// Curve of the given kind with `n ≥ 2` vertices (a star needs `n ≥ 3`).
pub fn generate(kind: CurveKind, n: usize, seed: u64) -> PolyCurve {
    match kind {
        CurveKind::Walk => random_walk(n, seed),
        CurveKind::Spiral => spiral(n, seed),
        CurveKind::Star => star(n),
        CurveKind::Grid => grid(n, seed),
    }
}

/// Unit steps in uniformly random directions.
pub fn random_walk(n: usize, seed: u64) -> PolyCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Point::new(0.0, 0.0);
    let mut v = Vec::with_capacity(n);
    v.push(p);
    for _ in 1..n {
        let t: f64 = rng.gen_range(0.0..TAU);
        p = p + Point::new(t.cos(), t.sin());
        v.push(p);
    }
    PolyCurve::open(v).expect("unit steps never repeat a vertex")
}

/// Archimedean spiral with three windings and a seeded phase.
pub fn spiral(n: usize, seed: u64) -> PolyCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase: f64 = rng.gen_range(0.0..TAU);
    let turns = 3.0;
    let v = (0..n)
        .map(|i| {
            let s = (i + 1) as f64 / n as f64;
            let t = phase + s * turns * TAU;
            Point::new(s * t.cos(), s * t.sin()) * 10.0
        })
        .collect();
    PolyCurve::open(v).expect("spiral vertices are distinct")
}

/// Closed star polygon: vertex `i` sits at angle `i·k·2π/n` on a circle,
/// with `k` the largest step below `n/2` coprime to `n` (a plain polygon
/// when no such step exists).
pub fn star(n: usize) -> PolyCurve {
    assert!(n >= 3, "a star needs at least 3 vertices");
    let k = (2..=(n - 1) / 2).rev().find(|&k| gcd(k, n) == 1).unwrap_or(1);
    let v = (0..n)
        .map(|i| {
            let t = (i * k % n) as f64 * TAU / n as f64;
            Point::new(10.0 * t.cos(), 10.0 * t.sin())
        })
        .collect();
    PolyCurve::new(v, true).expect("star vertices are distinct")
}

/// Serpentine through a square lattice with small seeded jitter.
pub fn grid(n: usize, seed: u64) -> PolyCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = (n as f64).sqrt().ceil() as usize;
    let v = (0..n)
        .map(|i| {
            let row = i / cols;
            let col = if row.is_multiple_of(2) { i % cols } else { cols - 1 - i % cols };
            let jx: f64 = rng.gen_range(-0.2..0.2);
            let jy: f64 = rng.gen_range(-0.2..0.2);
            Point::new(col as f64 + jx, row as f64 + jy)
        })
        .collect();
    PolyCurve::open(v).expect("lattice vertices are distinct")
}

/// Open curve with `n` integer vertices in `[0, side]²`; consecutive
/// vertices differ, other repeats are allowed.
pub fn random_lattice(n: usize, side: i64, seed: u64) -> PolyCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Point> = Vec::with_capacity(n);
    while v.len() < n {
        let p = Point::new(rng.gen_range(0..=side) as f64, rng.gen_range(0..=side) as f64);
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    PolyCurve::open(v).expect("consecutive duplicates are skipped")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{self_intersections, to_csv};

    #[test]
    fn deterministic_for_seed() {
        for kind in [CurveKind::Walk, CurveKind::Spiral, CurveKind::Star, CurveKind::Grid] {
            assert_eq!(to_csv(&generate(kind, 40, 7)), to_csv(&generate(kind, 40, 7)));
        }
        assert_ne!(to_csv(&random_walk(40, 1)), to_csv(&random_walk(40, 2)));
    }

    #[test]
    fn pentagram_has_five_crossings() {
        let s = star(5);
        assert!(s.is_closed());
        let crossings = self_intersections(&s).into_iter().filter(|j| j.half_edges == 4).count();
        assert_eq!(crossings, 5);
    }

    #[test]
    fn lattice_bounds() {
        let c = random_lattice(10, 32, 3);
        assert_eq!(c.vertex_count(), 10);
        assert!(c.vertices().iter().all(|p| (0.0..=32.0).contains(&p.x) && p.y.fract() == 0.0));
    }

    #[test]
    fn kinds_parse() {
        assert_eq!("grid".parse::<CurveKind>(), Ok(CurveKind::Grid));
        assert!("blob".parse::<CurveKind>().is_err());
    }
}
