use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Joins between consecutive segments must match to this accuracy.
pub const JOIN_TOL: f64 = 1e-12;

/// One smooth piece of a complex-time path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    Arc { center: Complex64, radius: f64, angle_from: f64, angle_to: f64 },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, angle_from, angle_to, .. } => radius * (angle_to - angle_from).abs(),
        }
    }

    /// Point at normalized parameter `sigma` in `[0, 1]`.
    pub fn point(&self, sigma: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * sigma,
            Segment::Arc { center, radius, angle_from, angle_to } => {
                center + Complex64::from_polar(radius, angle_from + (angle_to - angle_from) * sigma)
            }
        }
    }

    /// Derivative with respect to arc length.
    pub fn unit_tangent(&self, sigma: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                if d.norm() == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    d / d.norm()
                }
            }
            Segment::Arc { angle_from, angle_to, .. } => {
                let th = angle_from + (angle_to - angle_from) * sigma;
                let dir = (angle_to - angle_from).signum();
                Complex64::new(0.0, dir) * Complex64::from_polar(1.0, th)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, angle_from, angle_to } => {
                Segment::Arc { center, radius, angle_from: angle_to, angle_to: angle_from }
            }
        }
    }
}

/// Piecewise smooth path in complex time, traversed `cycles` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimePath {
    pub segments: Vec<Segment>,
    #[serde(default = "one")]
    pub cycles: u32,
}

fn one() -> u32 {
    1
}

impl TimePath {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self { segments, cycles: 1 }
    }

    pub fn line(from: Complex64, to: Complex64) -> Self {
        Self::new(vec![Segment::Line { from, to }])
    }

    /// Full circle(s) around `center` starting at angle `start_angle`;
    /// negative `turns` run clockwise.
    pub fn circle(center: Complex64, radius: f64, start_angle: f64, turns: i32) -> Self {
        let dir = if turns >= 0 { 1.0 } else { -1.0 };
        let seg = Segment::Arc { center, radius, angle_from: start_angle, angle_to: start_angle + dir * TAU };
        Self { segments: vec![seg], cycles: turns.unsigned_abs().max(1) }
    }

    pub fn with_cycles(mut self, cycles: u32) -> Self {
        self.cycles = cycles;
        self
    }

    /// Append another path (one traversal of each).
    pub fn then(mut self, other: &TimePath) -> Self {
        let mine = self.unrolled();
        self.segments = mine;
        self.segments.extend(other.unrolled());
        self.cycles = 1;
        self
    }

    /// Segments of all cycles in traversal order.
    pub fn unrolled(&self) -> Vec<Segment> {
        let mut v = Vec::with_capacity(self.segments.len() * self.cycles as usize);
        for _ in 0..self.cycles {
            v.extend_from_slice(&self.segments);
        }
        v
    }

    pub fn start(&self) -> Complex64 {
        self.segments.first().map(|s| s.start()).unwrap_or_default()
    }

    pub fn end(&self) -> Complex64 {
        self.segments.last().map(|s| s.end()).unwrap_or_default()
    }

    /// Arc length of a single traversal.
    pub fn length_once(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn length(&self) -> f64 {
        self.length_once() * self.cycles as f64
    }

    pub fn is_closed(&self) -> bool {
        (self.end() - self.start()).norm() < JOIN_TOL.max(1e-12 * self.start().norm())
    }

    pub fn reversed(&self) -> TimePath {
        TimePath {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
            cycles: self.cycles,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::Invalid("time path has no segments".into()));
        }
        if self.cycles == 0 {
            return Err(Error::Invalid("time path needs cycles >= 1".into()));
        }
        for (i, s) in self.segments.iter().enumerate() {
            if let Segment::Arc { radius, angle_from, angle_to, center } = *s {
                if !(radius > 0.0 && radius.is_finite()) || !angle_from.is_finite() || !angle_to.is_finite() {
                    return Err(Error::Invalid(format!("segment {i}: arc needs finite positive radius and finite angles")));
                }
                if !center.is_finite() {
                    return Err(Error::Invalid(format!("segment {i}: arc center not finite")));
                }
            }
            if let Segment::Line { from, to } = *s {
                if !from.is_finite() || !to.is_finite() {
                    return Err(Error::Invalid(format!("segment {i}: line endpoints not finite")));
                }
            }
        }
        for (i, w) in self.segments.windows(2).enumerate() {
            let gap = (w[1].start() - w[0].end()).norm();
            let scale = 1.0 + w[0].end().norm();
            if gap > JOIN_TOL * scale {
                return Err(Error::Invalid(format!("segments {i} and {} do not join (gap {gap:.3e})", i + 1)));
            }
        }
        if self.cycles > 1 && !self.is_closed() {
            return Err(Error::Invalid("multi-cycle path must be closed".into()));
        }
        Ok(())
    }
}
