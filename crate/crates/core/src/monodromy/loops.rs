use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{SingularValue, SingularValues};
use crate::error::{Error, Result};
use crate::numeric::path::complex_pair;
use crate::numeric::{LoopPath, Segment};

/// Loop from the base point around one singular value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemLoop {
    pub value: SingularValue,
    pub epsilon: f64,
    pub path: LoopPath,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSystem {
    #[serde(with = "complex_pair")]
    pub base: Complex64,
    /// Loops in composition order: the first loop is traversed first.
    pub loops: Vec<SystemLoop>,
    pub big_circle: LoopPath,
    pub big_radius: f64,
}

impl LoopSystem {
    /// Subsystem keeping the loops selected by `keep`, order preserved.
    pub fn filtered(&self, keep: impl Fn(&SystemLoop) -> bool) -> LoopSystem {
        LoopSystem {
            loops: self.loops.iter().filter(|l| keep(l)).cloned().collect(),
            ..self.clone()
        }
    }
}

/// Side on which a path passes an obstacle lying exactly on its line:
/// below in the y-plane, or to the right when travelling vertically.
fn collinear_pass_right(dir: Complex64) -> bool {
    dir.re >= 0.0
}

/// Straight path from `from` to `to` with half-circle detours around every
/// obstacle `(center, radius)` whose disc meets the segment.
pub fn ray_with_detours(
    from: Complex64,
    to: Complex64,
    obstacles: &[(Complex64, f64)],
) -> Result<Vec<Segment>> {
    let len = (to - from).norm();
    if len == 0.0 {
        return Ok(Vec::new());
    }
    let dir = (to - from) / len;
    let mut hits: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    for &(c, r) in obstacles {
        let local = (c - from) * dir.conj();
        let (t, h) = (local.re, local.im);
        if h.abs() >= r {
            continue;
        }
        let w = (r * r - h * h).sqrt();
        if t + w <= 0.0 || t - w >= len {
            continue;
        }
        if t - w <= 0.0 || t + w >= len {
            return Err(Error::PathClearanceFailure {
                value: format!("{c}"),
                detail: "detour disc contains a path endpoint".into(),
            });
        }
        hits.push((t, h, c, r));
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half_chord = |h: f64, r: f64| (r * r - h * h).sqrt();
    for pair in hits.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a.0 + half_chord(a.1, a.3) > b.0 - half_chord(b.1, b.3) {
            return Err(Error::PathClearanceFailure {
                value: format!("{}", pair[1].2),
                detail: "overlapping detours".into(),
            });
        }
    }

    let mut segs = Vec::new();
    let mut cur = from;
    for (t, h, c, r) in hits {
        let w = half_chord(h, r);
        let p_in = from + dir * (t - w);
        let p_out = from + dir * (t + w);
        if (p_in - cur).norm() > 0.0 {
            segs.push(Segment::Line { from: cur, to: p_in });
        }
        let pass_right = if h != 0.0 { h > 0.0 } else { collinear_pass_right(dir) };
        let a_in = (p_in - c).arg();
        let a_out = (p_out - c).arg();
        let sweep = if pass_right {
            (a_out - a_in).rem_euclid(TAU)
        } else {
            -(a_in - a_out).rem_euclid(TAU)
        };
        segs.push(Segment::Arc {
            center: c,
            radius: r,
            start_angle: a_in,
            sweep,
        });
        cur = p_out;
    }
    if (to - cur).norm() > 0.0 {
        segs.push(Segment::Line { from: cur, to });
    }
    Ok(segs)
}

fn epsilons(points: &[Complex64], base: Complex64) -> Vec<f64> {
    points
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut m = (s - base).norm();
            for (j, &o) in points.iter().enumerate() {
                if i != j {
                    m = m.min((s - o).norm());
                }
            }
            0.25 * m
        })
        .collect()
}

fn normalized_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Composition order: ascending argument seen from the base, in (-pi, pi].
/// Points on a common ray are ordered so that a loop passing beside nearer
/// points sits on the correct angular side of them.
fn loop_order(base: Complex64, a: Complex64, b: Complex64) -> Ordering {
    let (ta, tb) = (normalized_arg(a - base), normalized_arg(b - base));
    if (ta - tb).abs() > 1e-12 {
        return ta.total_cmp(&tb);
    }
    let (da, db) = ((a - base).norm(), (b - base).norm());
    let dir = (a - base) / da;
    if collinear_pass_right(dir) {
        db.total_cmp(&da)
    } else {
        da.total_cmp(&db)
    }
}

pub fn build_loop_system(sv: &SingularValues, base: Complex64) -> Result<LoopSystem> {
    let points = sv.points();
    let eps = epsilons(&points, base);
    if eps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::PathClearanceFailure {
            value: format!("{base}"),
            detail: "base point coincides with a singular value".into(),
        });
    }
    let obstacles: Vec<(Complex64, f64)> = points.iter().copied().zip(eps.iter().copied()).collect();

    let mut loops = Vec::with_capacity(points.len());
    for (i, v) in sv.values.iter().enumerate() {
        let s = v.y;
        let e = eps[i];
        let dir = (s - base) / (s - base).norm();
        let target = s - dir * e;
        let others: Vec<(Complex64, f64)> = obstacles
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, o)| *o)
            .collect();
        let outbound = ray_with_detours(base, target, &others)?;
        let mut segments = outbound.clone();
        segments.push(Segment::Arc {
            center: s,
            radius: e,
            start_angle: (target - s).arg(),
            sweep: TAU,
        });
        segments.extend(outbound.iter().rev().map(Segment::reversed));
        let path = LoopPath::new(base, segments);
        check_clearance(&path, &obstacles, Some(i))?;
        loops.push(SystemLoop {
            value: v.clone(),
            epsilon: e,
            path,
        });
    }
    loops.sort_by(|a, b| loop_order(base, a.value.y, b.value.y));

    let big_radius = 2.0 * sv.max_modulus().max(base.norm());
    let down = Complex64::new(base.re, -(big_radius * big_radius - base.re * base.re).sqrt());
    let approach = ray_with_detours(base, down, &obstacles)?;
    let mut segments = approach.clone();
    segments.push(Segment::Arc {
        center: Complex64::new(0.0, 0.0),
        radius: big_radius,
        start_angle: down.arg(),
        sweep: TAU,
    });
    segments.extend(approach.iter().rev().map(Segment::reversed));
    let big_circle = LoopPath::new(base, segments);
    check_clearance(&big_circle, &obstacles, None)?;

    Ok(LoopSystem {
        base,
        loops,
        big_circle,
        big_radius,
    })
}

/// Every segment stays at least half a radius away from each obstacle other
/// than the enclosed one, whose own circle is the only place it is approached.
fn check_clearance(path: &LoopPath, obstacles: &[(Complex64, f64)], enclosed: Option<usize>) -> Result<()> {
    if !path.is_closed(1e-12) {
        return Err(Error::PathClearanceFailure {
            value: format!("{}", path.base),
            detail: "loop is not closed".into(),
        });
    }
    for (j, &(c, r)) in obstacles.iter().enumerate() {
        let d = path.distance_to(c);
        let need = if Some(j) == enclosed { r * (1.0 - 1e-9) } else { 0.5 * r };
        if d < need {
            return Err(Error::PathClearanceFailure {
                value: format!("{c}"),
                detail: format!("distance {d:e} below required {need:e}"),
            });
        }
    }
    Ok(())
}
