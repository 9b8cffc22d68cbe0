//! Result types shared by all packedness algorithms.

use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::geometry::Disk;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Counters {
    /// Combinatorial events generated (exact algorithm) or event radii
    /// visited (relative and sweep algorithms).
    pub events: u64,
    /// Disks whose packedness was evaluated.
    pub disks_evaluated: u64,
    /// MPC rounds; only set by the parallel simulator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u64>,
}

/// Output of every packedness algorithm. Always satisfies
/// `certified_lo <= c_estimate <= certified_hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackednessReport {
    pub algorithm: String,
    pub c_estimate: f64,
    pub certified_lo: f64,
    /// `+∞` (serialized as `null`) when no finite upper bound is known.
    #[serde(serialize_with = "finite_or_null")]
    pub certified_hi: f64,
    /// Disk attaining `c_estimate`; radius 0 marks a limit value at a point.
    pub witness: Disk,
    pub counters: Counters,
    pub wall_time_ms: f64,
}

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

impl PackednessReport {
    pub fn interval(&self) -> Interval {
        Interval::new(self.certified_lo, self.certified_hi)
    }
}

/// Running maximum of packedness values with the disk attaining it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Best {
    pub value: f64,
    pub disk: Disk,
}

impl Best {
    pub fn new(disk: Disk) -> Self {
        Self { value: 0.0, disk }
    }

    #[inline]
    pub fn offer(&mut self, value: f64, disk: Disk) -> bool {
        if value > self.value {
            self.value = value;
            self.disk = disk;
            true
        } else {
            false
        }
    }
}

pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Self(Instant::now())
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}
