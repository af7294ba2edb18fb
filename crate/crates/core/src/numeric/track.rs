use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::LoopPath;
use super::poly::UniPoly;
use crate::error::{Error, Result};

/// A one-parameter family of monic-in-x fibers `y -> f(., y)`.
pub trait FiberFamily: Sync {
    fn degree(&self) -> usize;

    fn fiber(&self, y: Complex64) -> UniPoly;

    /// Newton ratios `f(x)/f'(x)` at each of `xs` in the fiber over `y`.
    fn newton_ratios(&self, y: Complex64, xs: &[Complex64], out: &mut [Complex64]) {
        let poly = self.fiber(y);
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            let (f, df) = poly.eval_with_derivative(*x);
            *o = if f.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { f / df };
        }
    }

    /// Relative backward error of `x` as a root of the fiber over `y`.
    fn residual(&self, y: Complex64, x: Complex64) -> f64 {
        self.fiber(y).residual(x)
    }
}

/// Family given by a closure producing the fiber polynomial.
pub struct PolyFamily<F> {
    degree: usize,
    make: F,
}

impl<F: Fn(Complex64) -> UniPoly + Sync> PolyFamily<F> {
    pub fn new(degree: usize, make: F) -> Self {
        PolyFamily { degree, make }
    }
}

impl<F: Fn(Complex64) -> UniPoly + Sync> FiberFamily for PolyFamily<F> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn fiber(&self, y: Complex64) -> UniPoly {
        (self.make)(y)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    /// Per-step relative motion of every pair of roots, and the corrector's
    /// displacement, must stay below this fraction of the pair distance.
    pub step_ratio: f64,
    /// Largest step, as a fraction of one tracked piece.
    pub max_step: f64,
    /// Smallest step relative to the whole loop length.
    pub min_step_fraction: f64,
    /// Roots closer than this (times the fiber scale) are a collision.
    pub collision_tol: f64,
    pub residual_tol: f64,
    /// Angle of the projection axis used to order strands.
    pub projection_angle: f64,
    /// Pieces per full turn of a circular arc.
    pub circle_pieces: usize,
    pub match_tol: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            step_ratio: 0.25,
            max_step: 0.05,
            min_step_fraction: 1e-9,
            collision_tol: 1e-7,
            residual_tol: 1e-9,
            projection_angle: 0.3,
            circle_pieces: 16,
            match_tol: 1e-6,
        }
    }
}

impl TrackerConfig {
    /// Same tracker with the step bound halved.
    pub fn refined(&self) -> Self {
        TrackerConfig {
            step_ratio: self.step_ratio / 2.0,
            max_step: self.max_step / 2.0,
            ..self.clone()
        }
    }
}

/// Two strands adjacent in the projection order swapping places.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub step: usize,
    /// Labels of the strands in slot `slot` and `slot + 1` before the swap.
    pub labels: (usize, usize),
    /// Zero-based left slot of the swap.
    pub slot: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackedFiber {
    pub t: f64,
    /// Current roots indexed by label; label `i` started at `start_roots[i]`.
    #[serde(with = "super::path::complex_vec")]
    pub roots: Vec<Complex64>,
    pub min_separation: f64,
    /// `permutation[i]` is the label of the start root that strand `i` ends on.
    pub permutation: Vec<usize>,
    pub steps: usize,
}

/// Strand ordering used for braid extraction: projection `u` descending,
/// ties by the transverse coordinate `v` ascending.
#[derive(Clone, Copy, Debug)]
pub struct Projection {
    rot: Complex64,
}

impl Projection {
    pub fn new(angle: f64) -> Self {
        Projection {
            rot: Complex64::from_polar(1.0, -angle),
        }
    }

    pub fn uv(&self, x: Complex64) -> (f64, f64) {
        let z = x * self.rot;
        (z.re, z.im)
    }

    /// Strict order key; smaller keys occupy lower slots.
    fn before(&self, a: (Complex64, usize), b: (Complex64, usize)) -> bool {
        let (ua, va) = self.uv(a.0);
        let (ub, vb) = self.uv(b.0);
        if ua != ub {
            return ua > ub;
        }
        if va != vb {
            return va < vb;
        }
        a.1 < b.1
    }

    /// Labels sorted into slots.
    pub fn order(&self, roots: &[Complex64]) -> Vec<usize> {
        let mut labels: Vec<usize> = (0..roots.len()).collect();
        labels.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.before((roots[a], a), (roots[b], b)) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        labels
    }
}

pub fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

fn fiber_scale(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.norm()).fold(1.0, f64::max)
}

/// Continue the roots of `family` along `path`, recording every adjacent
/// swap in the projection order.
pub fn track_loop(
    family: &dyn FiberFamily,
    path: &LoopPath,
    start_roots: &[Complex64],
    cfg: &TrackerConfig,
) -> Result<(TrackedFiber, Vec<CrossingEvent>)> {
    track_loop_observed(family, path, start_roots, cfg, &mut |_, _, _| {})
}

/// Like [`track_loop`], calling `observe(arclength, y, roots)` after every
/// accepted step.
pub fn track_loop_observed(
    family: &dyn FiberFamily,
    path: &LoopPath,
    start_roots: &[Complex64],
    cfg: &TrackerConfig,
    observe: &mut dyn FnMut(f64, Complex64, &[Complex64]),
) -> Result<(TrackedFiber, Vec<CrossingEvent>)> {
    let d = family.degree();
    if start_roots.len() != d {
        return Err(Error::Invalid(format!(
            "expected {d} start roots, got {}",
            start_roots.len()
        )));
    }
    let projection = Projection::new(cfg.projection_angle);
    let loop_len = path.length().max(f64::MIN_POSITIVE);
    let min_step_len = cfg.min_step_fraction * loop_len;

    let mut roots = start_roots.to_vec();
    let mut order = projection.order(&roots);
    let mut events = Vec::new();
    let mut steps = 0usize;
    let mut overall_min = min_separation(&roots);
    let mut arclength = 0.0;
    let scale0 = fiber_scale(&roots);
    if overall_min < cfg.collision_tol * scale0 {
        let y = path.base;
        return Err(Error::RootCollision {
            re: y.re,
            im: y.im,
            separation: overall_min,
        });
    }
    observe(0.0, path.base, &roots);

    let mut ratios = vec![Complex64::new(0.0, 0.0); d];
    for seg in &path.segments {
        let n = seg.pieces(cfg.circle_pieces);
        let piece_len = seg.length() / n as f64;
        for piece in 0..n {
            let a = piece as f64 / n as f64;
            let b = (piece + 1) as f64 / n as f64;
            let y_at = |tau: f64| seg.point(a + (b - a) * tau);
            let mut tau = 0.0;
            let mut h = cfg.max_step;
            let mut velocity: Option<Vec<Complex64>> = None;
            while tau < 1.0 {
                h = h.min(1.0 - tau);
                let y1 = y_at(tau + h);
                let predicted: Vec<Complex64> = match &velocity {
                    Some(v) => roots.iter().zip(v).map(|(x, dx)| x + dx * h).collect(),
                    None => roots.clone(),
                };
                let step = correct(family, y1, &predicted, &mut ratios, cfg)
                    .filter(|new| acceptable(&roots, &predicted, new, cfg))
                    .and_then(|new| {
                        detect_crossings(&projection, &roots, &new, &order, steps)
                            .map(|(ev, ord)| (new, ev, ord))
                    });
                match step {
                    Some((new, ev, ord)) => {
                        let inv_h = 1.0 / h;
                        velocity = Some(
                            new.iter()
                                .zip(&roots)
                                .map(|(x1, x0)| (x1 - x0) * inv_h)
                                .collect(),
                        );
                        roots = new;
                        order = ord;
                        events.extend(ev);
                        steps += 1;
                        tau += h;
                        arclength += h * piece_len;
                        overall_min = overall_min.min(min_separation(&roots));
                        observe(arclength, y1, &roots);
                        h = (h * 2.0).min(cfg.max_step);
                    }
                    None => {
                        h *= 0.5;
                        velocity = None;
                        if h * piece_len < min_step_len {
                            let y = y_at(tau);
                            return Err(Error::RootCollision {
                                re: y.re,
                                im: y.im,
                                separation: min_separation(&roots),
                            });
                        }
                    }
                }
            }
        }
    }

    let permutation = match_roots(start_roots, &roots, cfg.match_tol)?;
    Ok((
        TrackedFiber {
            t: 1.0,
            roots,
            min_separation: overall_min,
            permutation,
            steps,
        },
        events,
    ))
}

/// Aberth corrector from the predicted positions.
fn correct(
    family: &dyn FiberFamily,
    y: Complex64,
    predicted: &[Complex64],
    ratios: &mut [Complex64],
    cfg: &TrackerConfig,
) -> Option<Vec<Complex64>> {
    let d = predicted.len();
    let mut x = predicted.to_vec();
    let scale = fiber_scale(&x);
    for _ in 0..40 {
        family.newton_ratios(y, &x, ratios);
        let mut max_w = 0.0f64;
        let snapshot = x.clone();
        for k in 0..d {
            let n = ratios[k];
            if !(n.re.is_finite() && n.im.is_finite()) {
                return None;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    let diff = snapshot[k] - snapshot[j];
                    if diff.norm() == 0.0 {
                        return None;
                    }
                    repulsion += diff.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - n * repulsion;
            let w = if denom.norm() == 0.0 { n } else { n / denom };
            x[k] -= w;
            max_w = max_w.max(w.norm());
        }
        if max_w <= 1e-14 * scale {
            break;
        }
    }
    if x.iter().all(|&r| family.residual(y, r) < cfg.residual_tol) {
        Some(x)
    } else {
        None
    }
}

fn acceptable(old: &[Complex64], predicted: &[Complex64], new: &[Complex64], cfg: &TrackerConfig) -> bool {
    let d = old.len();
    let scale = fiber_scale(new);
    for a in 0..d {
        let mut nearest = f64::INFINITY;
        for b in 0..d {
            if a == b {
                continue;
            }
            let sep_old = (old[a] - old[b]).norm();
            let rel = ((new[a] - old[a]) - (new[b] - old[b])).norm();
            if rel >= cfg.step_ratio * sep_old {
                return false;
            }
            let sep_new = (new[a] - new[b]).norm();
            if sep_new < cfg.collision_tol * scale {
                return false;
            }
            nearest = nearest.min((predicted[a] - predicted[b]).norm());
        }
        if d > 1 && (new[a] - predicted[a]).norm() >= cfg.step_ratio * nearest {
            return false;
        }
    }
    true
}

/// Adjacent swaps between two accepted configurations, in time order under
/// linear interpolation. `None` when the swaps cannot be resolved.
fn detect_crossings(
    projection: &Projection,
    old: &[Complex64],
    new: &[Complex64],
    order: &[usize],
    step: usize,
) -> Option<(Vec<CrossingEvent>, Vec<usize>)> {
    let d = old.len();
    let mut swaps: Vec<(f64, usize, usize)> = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let before_old = projection.before((old[a], a), (old[b], b));
            let before_new = projection.before((new[a], a), (new[b], b));
            if before_old != before_new {
                let du_old = projection.uv(old[a]).0 - projection.uv(old[b]).0;
                let du_new = projection.uv(new[a]).0 - projection.uv(new[b]).0;
                let denom = du_old - du_new;
                let t = if denom == 0.0 { 0.5 } else { (du_old / denom).clamp(0.0, 1.0) };
                swaps.push((t, a, b));
            }
        }
    }
    if swaps.is_empty() {
        return Some((Vec::new(), order.to_vec()));
    }
    swaps.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut order = order.to_vec();
    let mut pos = vec![0usize; d];
    for (slot, &label) in order.iter().enumerate() {
        pos[label] = slot;
    }
    let scale = fiber_scale(new);
    let mut events = Vec::with_capacity(swaps.len());
    for (idx, &(t, a, b)) in swaps.iter().enumerate() {
        // simultaneous swaps sharing a strand have no well-defined order
        if let Some(&(t2, a2, b2)) = swaps.get(idx + 1) {
            let shares = a == a2 || a == b2 || b == a2 || b == b2;
            if shares && (t2 - t).abs() < 1e-9 {
                return None;
            }
        }
        let (pa, pb) = (pos[a], pos[b]);
        if pa.abs_diff(pb) != 1 {
            return None;
        }
        let slot = pa.min(pb);
        let left = order[slot];
        let right = order[slot + 1];
        let lerp = |l: usize| old[l] + (new[l] - old[l]) * t;
        let v_left = projection.uv(lerp(left)).1;
        let v_right = projection.uv(lerp(right)).1;
        if (v_left - v_right).abs() < 1e-12 * scale {
            return None;
        }
        let sign = if v_left > v_right { 1 } else { -1 };
        order.swap(slot, slot + 1);
        pos[left] = slot + 1;
        pos[right] = slot;
        events.push(CrossingEvent {
            step,
            labels: (left, right),
            slot,
            sign,
        });
    }
    let expected = projection.order(new);
    if expected != order {
        return None;
    }
    Some((events, order))
}

/// `perm[i]` is the index of the start root closest to end root `i`.
fn match_roots(start: &[Complex64], end: &[Complex64], tol: f64) -> Result<Vec<usize>> {
    let scale = fiber_scale(start);
    let mut used = vec![false; start.len()];
    let mut perm = Vec::with_capacity(end.len());
    for (i, e) in end.iter().enumerate() {
        let (best, dist) = start
            .iter()
            .enumerate()
            .map(|(j, s)| (j, (s - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::MatchFailure("empty fiber".into()))?;
        if dist > tol * scale {
            return Err(Error::MatchFailure(format!(
                "end root {i} is {dist:e} from the nearest start root"
            )));
        }
        if used[best] {
            return Err(Error::MatchFailure(format!("start root {best} matched twice")));
        }
        used[best] = true;
        perm.push(best);
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn sqrt_family() -> PolyFamily<impl Fn(Complex64) -> UniPoly + Sync> {
        PolyFamily::new(2, |y: Complex64| {
            UniPoly::new(vec![-y, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
        })
    }

    #[test]
    fn square_root_monodromy_swaps() {
        let fam = sqrt_family();
        let base = Complex64::new(1.0, 0.0);
        let path = LoopPath::circle(Complex64::new(0.0, 0.0), base);
        let start = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let (end, events) = track_loop(&fam, &path, &start, &TrackerConfig::default()).unwrap();
        assert_eq!(end.permutation, vec![1, 0]);
        let net: i32 = events.iter().map(|e| e.sign as i32).sum();
        assert_eq!(net.abs(), 1);
        assert_eq!(events.len() % 2, 1);
    }

    #[test]
    fn loop_not_enclosing_branch_point_is_trivial() {
        let fam = sqrt_family();
        let base = Complex64::new(1.5, 0.0);
        let path = LoopPath::circle(Complex64::new(1.0, 0.0), base);
        let r = 1.5f64.sqrt();
        let start = [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)];
        let (end, events) = track_loop(&fam, &path, &start, &TrackerConfig::default()).unwrap();
        assert_eq!(end.permutation, vec![0, 1]);
        let net: i32 = events.iter().map(|e| e.sign as i32).sum();
        assert_eq!(net, 0);
    }

    #[test]
    fn events_replay_to_final_order() {
        // three roots of x^3 - y around the origin
        let fam = PolyFamily::new(3, |y: Complex64| {
            UniPoly::new(vec![
                -y,
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ])
            .unwrap()
        });
        let base = Complex64::new(1.0, 0.0);
        let path = LoopPath::circle(Complex64::new(0.0, 0.0), base);
        let start: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 3.0)).collect();
        let cfg = TrackerConfig::default();
        let (end, events) = track_loop(&fam, &path, &start, &cfg).unwrap();
        let projection = Projection::new(cfg.projection_angle);
        let mut order = projection.order(&start);
        for e in &events {
            assert_eq!((order[e.slot], order[e.slot + 1]), e.labels);
            order.swap(e.slot, e.slot + 1);
        }
        assert_eq!(order, projection.order(&end.roots));
        // a 3-cycle
        assert!(end.permutation.iter().enumerate().all(|(i, &j)| i != j));
    }

    #[test]
    fn residuals_bounded_along_the_way() {
        let fam = sqrt_family();
        let base = Complex64::new(1.0, 0.0);
        let path = LoopPath::circle(Complex64::new(0.0, 0.0), base);
        let start = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let cfg = TrackerConfig::default();
        let mut worst = 0.0f64;
        track_loop_observed(&fam, &path, &start, &cfg, &mut |_, y, xs| {
            for &x in xs {
                worst = worst.max(fam.residual(y, x));
            }
        })
        .unwrap();
        assert!(worst < cfg.residual_tol);
    }

    #[test]
    fn collision_is_reported() {
        let fam = sqrt_family();
        // circle passing through the branch point y = 0
        let base = Complex64::new(1.0, 0.0);
        let path = LoopPath::circle(Complex64::new(0.5, 0.0), base);
        let start = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let err = track_loop(&fam, &path, &start, &TrackerConfig::default()).unwrap_err();
        assert!(matches!(err, Error::RootCollision { .. }), "{err}");
    }
}
