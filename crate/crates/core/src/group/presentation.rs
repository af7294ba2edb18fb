use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::braid::FreeWord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Numeric,
    Symbolic,
    Expected,
    Derived,
}

/// Finitely presented group. Relators are kept freely and cyclically reduced;
/// trivial relators are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
    pub provenance: Provenance,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<FreeWord>, provenance: Provenance) -> Self {
        let relators = relators
            .into_iter()
            .map(|r| r.cyclic_reduce())
            .filter(|r| !r.is_empty())
            .collect();
        Presentation {
            generators,
            relators,
            provenance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.generators.len();
        for r in &self.relators {
            if r.letters().iter().any(|&l| l == 0 || l.unsigned_abs() as usize > n) {
                return Err(Error::Invalid(format!("relator {:?} uses an unknown generator", r.0)));
            }
        }
        Ok(())
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(FreeWord::len).sum()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Relators as a set up to cyclic rotation and inversion.
    pub fn relator_classes(&self) -> BTreeSet<FreeWord> {
        self.relators.iter().map(canonical_cyclic).collect()
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn word_to_string(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            return "e".into();
        }
        w.letters()
            .iter()
            .map(|&l| {
                let name = &self.generators[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Lexicographically least rotation of the word or its inverse.
pub fn canonical_cyclic(w: &FreeWord) -> FreeWord {
    let w = w.cyclic_reduce();
    let mut best = w.clone();
    for cand in [w.clone(), w.inverse()] {
        let n = cand.len();
        for k in 0..n {
            let mut v = cand.0[k..].to_vec();
            v.extend_from_slice(&cand.0[..k]);
            let rot = FreeWord(v);
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

fn commutator(a: &FreeWord, b: &FreeWord) -> FreeWord {
    a.mul(b).mul(&a.inverse()).mul(&b.inverse())
}

fn expected_generators(q: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=q).map(|j| format!("g{j}")).collect();
    v.push("w".into());
    v
}

/// `< g_1..g_q, w | w (g_1...g_q)^-1, [g_j, w^p] >`.
pub fn expected_affine(p: usize, q: usize) -> Presentation {
    let w = FreeWord(vec![q as i32 + 1]);
    let prod = FreeWord((1..=q as i32).collect());
    let mut rels = vec![w.mul(&prod.inverse())];
    let wp = w.pow(p as i64);
    for j in 1..=q {
        rels.push(commutator(&FreeWord::gen(j), &wp));
    }
    Presentation {
        generators: expected_generators(q),
        relators: rels,
        provenance: Provenance::Expected,
    }
}

/// `< g_1..g_q, w | w^p, w (g_1...g_q)^-1 >`.
pub fn expected_projective(p: usize, q: usize) -> Presentation {
    let w = FreeWord(vec![q as i32 + 1]);
    let prod = FreeWord((1..=q as i32).collect());
    Presentation {
        generators: expected_generators(q),
        relators: vec![w.pow(p as i64), w.mul(&prod.inverse())],
        provenance: Provenance::Expected,
    }
}

/// Adds the relator `omega_word`, killing the loop around all fiber points.
pub fn projectivize(affine: &Presentation, omega_word: &FreeWord) -> Presentation {
    let mut rels = affine.relators.clone();
    rels.push(omega_word.clone());
    Presentation::new(affine.generators.clone(), rels, affine.provenance)
}
