use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One piece of a path in the pencil parameter plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Line {
        #[serde(with = "complex_pair")]
        from: Complex64,
        #[serde(with = "complex_pair")]
        to: Complex64,
    },
    /// Arc of the circle `|y - center| = radius` from `start_angle`, sweeping
    /// `sweep` radians (positive is counter-clockwise).
    Arc {
        #[serde(with = "complex_pair")]
        center: Complex64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Complex64::from_polar(radius, start_angle + sweep * s),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => Segment::Arc {
                center,
                radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Number of sub-pieces used when tracking: arcs get `per_circle` pieces
    /// per full turn, lines one piece.
    pub fn pieces(&self, per_circle: usize) -> usize {
        match *self {
            Segment::Line { .. } => 1,
            Segment::Arc { sweep, .. } => {
                ((per_circle.max(1) as f64) * sweep.abs() / TAU).ceil().max(1.0) as usize
            }
        }
    }

    /// Distance from `c` to the closest point of the segment.
    pub fn distance_to(&self, c: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let dir = to - from;
                let len2 = dir.norm_sqr();
                if len2 == 0.0 {
                    return (c - from).norm();
                }
                let t = ((c - from) * dir.conj()).re / len2;
                (from + dir * t.clamp(0.0, 1.0) - c).norm()
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let rel = c - center;
                let angle = rel.arg();
                let (lo, hi) = if sweep >= 0.0 {
                    (start_angle, start_angle + sweep)
                } else {
                    (start_angle + sweep, start_angle)
                };
                let mut a = angle;
                while a < lo {
                    a += TAU;
                }
                while a > lo + TAU {
                    a -= TAU;
                }
                if a <= hi {
                    (rel.norm() - radius).abs()
                } else {
                    let p0 = center + Complex64::from_polar(radius, lo);
                    let p1 = center + Complex64::from_polar(radius, hi);
                    (c - p0).norm().min((c - p1).norm())
                }
            }
        }
    }
}

/// Closed piecewise path starting and ending at `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopPath {
    #[serde(with = "complex_pair")]
    pub base: Complex64,
    pub segments: Vec<Segment>,
}

impl LoopPath {
    pub fn new(base: Complex64, segments: Vec<Segment>) -> Self {
        LoopPath { base, segments }
    }

    /// Counter-clockwise circle through `base` around `center`.
    pub fn circle(center: Complex64, base: Complex64) -> Self {
        let rel = base - center;
        LoopPath {
            base,
            segments: vec![Segment::Arc {
                center,
                radius: rel.norm(),
                start_angle: rel.arg(),
                sweep: TAU,
            }],
        }
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        let Some(first) = self.segments.first() else {
            return true;
        };
        let last = self.segments.last().unwrap();
        let scale = self.base.norm().max(1.0);
        (first.start() - self.base).norm() <= tol * scale
            && (last.end() - self.base).norm() <= tol * scale
            && self
                .segments
                .windows(2)
                .all(|w| (w[0].end() - w[1].start()).norm() <= tol * scale)
    }

    pub fn reversed(&self) -> LoopPath {
        LoopPath {
            base: self.base,
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    pub fn distance_to(&self, c: Complex64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(c))
            .fold(f64::INFINITY, f64::min)
    }

    /// Concatenation of loops sharing a base point.
    pub fn concat(loops: &[LoopPath]) -> LoopPath {
        let base = loops.first().map_or(Complex64::new(0.0, 0.0), |l| l.base);
        LoopPath {
            base,
            segments: loops.iter().flat_map(|l| l.segments.iter().copied()).collect(),
        }
    }
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub(crate) mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
