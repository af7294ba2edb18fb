pub mod flex;
pub mod loops;
pub mod symbolic;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{
    artin_images, braid_from_events, omega_word, permutation_of, BraidWord, FreeWord, Permutation,
};
use crate::curve::{base_configuration, singular_values, CurveSpec, SingularValue};
use crate::error::{Error, Result, StageExt};
use crate::group::{Presentation, Provenance};
use crate::numeric::{track_loop, FiberFamily, LoopPath, Projection, TrackerConfig};

pub use flex::{flex_redundancy_report, FlexRedundancyReport, InvariantProfile};
pub use loops::{build_loop_system, LoopSystem, SystemLoop};
pub use symbolic::derive_relations_symbolic;

/// Braid of one loop together with tracking diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct LoopBraid {
    pub value: SingularValue,
    pub braid: BraidWord,
    pub raw_crossings: usize,
    pub permutation: Permutation,
    pub steps: usize,
    pub min_separation: f64,
}

/// Everything read off the tracked loop system of one curve.
#[derive(Clone, Debug, Serialize)]
pub struct Monodromy {
    pub degree: usize,
    #[serde(with = "crate::numeric::path::complex_vec")]
    pub base_roots: Vec<Complex64>,
    /// `initial_order[slot]` is the base root in that slot; generator
    /// `g_{slot+1}` is the meridian around it.
    pub initial_order: Vec<usize>,
    pub system: LoopSystem,
    pub braids: Vec<LoopBraid>,
}

impl Monodromy {
    /// Keep only braids for which `keep` holds, preserving order.
    pub fn filtered(&self, keep: impl Fn(&SingularValue) -> bool) -> Monodromy {
        Monodromy {
            braids: self.braids.iter().filter(|b| keep(&b.value)).cloned().collect(),
            system: self.system.filtered(|l| keep(&l.value)),
            ..self.clone()
        }
    }

    pub fn composed_braid(&self) -> BraidWord {
        self.braids
            .iter()
            .fold(BraidWord::identity(self.degree), |acc, b| acc.concat(&b.braid))
    }
}

/// Track `path` from the base fiber and read off its braid in slot order.
pub fn braid_of_loop(
    family: &dyn FiberFamily,
    base_roots: &[Complex64],
    path: &LoopPath,
    cfg: &TrackerConfig,
) -> Result<(BraidWord, usize, Permutation, usize, f64)> {
    let d = base_roots.len();
    let projection = Projection::new(cfg.projection_angle);
    let order = projection.order(base_roots);
    let (end, events) = track_loop(family, path, base_roots, cfg)?;
    let raw = braid_from_events(d, &order, &events)?;
    let perm = permutation_of(&raw);

    // the slot permutation must agree with where the tracked roots landed
    let mut pos = vec![0usize; d];
    for (slot, &label) in order.iter().enumerate() {
        pos[label] = slot;
    }
    for (slot, &label) in order.iter().enumerate() {
        let landed = pos[end.permutation[label]];
        if perm.apply(slot) != landed {
            return Err(Error::InconsistentEvents(format!(
                "strand in slot {slot} ended in slot {landed}, braid says {}",
                perm.apply(slot)
            )));
        }
    }
    Ok((raw.reduced(), events.len(), perm, end.steps, end.min_separation))
}

pub fn compute_monodromy(spec: &CurveSpec, cfg: &TrackerConfig) -> Result<Monodromy> {
    let sv = singular_values(spec).stage("curve")?;
    let base = base_configuration(spec).stage("curve")?;
    let base_roots = base.roots(spec.p);
    let system = build_loop_system(&sv, Complex64::new(base.gamma0, 0.0)).stage("loops")?;
    compute_braids(spec, base_roots, system, cfg)
}

pub fn compute_braids(
    spec: &CurveSpec,
    base_roots: Vec<Complex64>,
    system: LoopSystem,
    cfg: &TrackerConfig,
) -> Result<Monodromy> {
    let family = spec.family();
    let braids: Vec<LoopBraid> = crate::parallel::install(|| {
        system
            .loops
            .par_iter()
            .map(|l| {
                let (braid, raw_crossings, permutation, steps, min_separation) =
                    braid_of_loop(&family, &base_roots, &l.path, cfg)?;
                Ok(LoopBraid {
                    value: l.value.clone(),
                    braid,
                    raw_crossings,
                    permutation,
                    steps,
                    min_separation,
                })
            })
            .collect::<Result<Vec<_>>>()
    })
    .stage("braids")?;
    let initial_order = Projection::new(cfg.projection_angle).order(&base_roots);
    Ok(Monodromy {
        degree: spec.degree(),
        base_roots,
        initial_order,
        system,
        braids,
    })
}

/// A relator with the loop and generator it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedRelator {
    pub word: FreeWord,
    pub source: String,
}

/// Relators from one pipeline path, before any simplification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSet {
    pub generators: Vec<String>,
    pub relators: Vec<TaggedRelator>,
    pub provenance: Provenance,
    /// The product of all meridians, fixed by every monodromy braid.
    pub omega: FreeWord,
}

impl RelationSet {
    pub fn presentation(&self) -> Presentation {
        Presentation::new(
            self.generators.clone(),
            self.relators.iter().map(|r| r.word.clone()).collect(),
            self.provenance,
        )
    }

    pub fn projective_presentation(&self) -> Presentation {
        crate::group::projectivize(&self.presentation(), &self.omega)
    }
}

/// Relators `g_j^-1 * g_j^beta` for every loop braid `beta`, empty ones dropped.
pub fn derive_relations_numeric(m: &Monodromy) -> RelationSet {
    let d = m.degree;
    let mut relators = Vec::new();
    for (n, lb) in m.braids.iter().enumerate() {
        for (j, img) in artin_images(&lb.braid).into_iter().enumerate() {
            let word = FreeWord::gen(j + 1).inverse().mul(&img);
            if !word.is_empty() {
                relators.push(TaggedRelator {
                    word,
                    source: format!("loop {n} at {}, g{}", fmt_value(&lb.value), j + 1),
                });
            }
        }
    }
    RelationSet {
        generators: (1..=d).map(|i| format!("g{i}")).collect(),
        relators,
        provenance: Provenance::Numeric,
        omega: omega_word(d),
    }
}

fn fmt_value(v: &SingularValue) -> String {
    if v.y.im == 0.0 {
        format!("{:.6}", v.y.re)
    } else {
        format!("{:.6}{:+.6}i", v.y.re, v.y.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfinityCheck {
    pub passed: bool,
    pub exponent_sum: i64,
    pub expected_exponent_sum: i64,
    /// Global exponent `e` with `g -> w^e g w^-e`, when one exists.
    pub omega_exponent: Option<i32>,
    pub detail: String,
}

/// The composed braid of the loop system must act as conjugation by a
/// single power `w^e`, `e = +-1`, with exponent sum `d(d-1)`.
pub fn infinity_check(m: &Monodromy) -> InfinityCheck {
    let d = m.degree;
    let composed = m.composed_braid();
    let exponent_sum = composed.exponent_sum();
    let expected = (d * (d - 1)) as i64;
    let images = artin_images(&composed);
    let omega = omega_word(d);
    let mut exponent = None;
    let mut detail = String::new();
    'outer: for e in [1i32, -1] {
        let w = omega.pow(e as i64);
        for (j, img) in images.iter().enumerate() {
            if *img != FreeWord::gen(j + 1).conjugate_by(&w) {
                if detail.is_empty() || e == 1 {
                    detail = format!("generator g{} is not conjugated by w^{e}", j + 1);
                }
                continue 'outer;
            }
        }
        exponent = Some(e);
        break;
    }
    if exponent.is_some() {
        detail.clear();
    }
    if exponent_sum != expected {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&format!("exponent sum {exponent_sum}, expected {expected}"));
    }
    InfinityCheck {
        passed: exponent.is_some() && exponent_sum == expected,
        exponent_sum,
        expected_exponent_sum: expected,
        omega_exponent: exponent,
        detail,
    }
}

/// Expected exponent sum of the loop around the origin.
pub fn origin_exponent_sum(p: usize, q: usize) -> i64 {
    ((p * p * q - 1) * (q - 1) + p * q - 1) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_budget_adds_up() {
        for (p, q) in [(2usize, 2usize), (3, 2), (4, 2), (4, 3), (5, 2), (5, 3)] {
            let d = (p * q) as i64;
            let flexes = (q * (p - 1)) as i64 * (p as i64 - 1);
            assert_eq!(origin_exponent_sum(p, q) + flexes, d * (d - 1));
        }
    }
}
