use std::collections::{BTreeSet, HashMap};

use super::{canonical_cyclic, Presentation};
use crate::braid::FreeWord;

/// Relators may grow to this multiple of the starting total length.
pub const DEFAULT_BUDGET_FACTOR: usize = 50;

/// Tietze simplification: repeatedly eliminates a generator that occurs
/// exactly once in some relator, choosing the elimination with the smallest
/// resulting total length (ties: lowest generator, then lowest relator), and
/// shortens relators by substituting long pieces of shorter ones. Surviving
/// generators keep their names.
pub fn tietze_simplify(p: &Presentation) -> Presentation {
    tietze_simplify_with(p, DEFAULT_BUDGET_FACTOR)
}

pub fn tietze_simplify_with(p: &Presentation, budget_factor: usize) -> Presentation {
    let mut gens = p.generators.clone();
    let mut rels = dedupe(p.relators.clone());
    let budget = budget_factor.max(1) * total(&rels).max(1);
    loop {
        if let Some((g, r, image)) = best_elimination(&rels, budget) {
            rels.remove(r);
            rels = eliminate(&rels, g, &image);
            gens.remove(g - 1);
            rels = dedupe(rels);
            continue;
        }
        if !shorten(&mut rels) {
            break;
        }
        rels = dedupe(rels);
    }
    Presentation::new(gens, rels, p.provenance)
}

fn total(rels: &[FreeWord]) -> usize {
    rels.iter().map(FreeWord::len).sum()
}

fn dedupe(rels: Vec<FreeWord>) -> Vec<FreeWord> {
    let mut seen = BTreeSet::new();
    rels.into_iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_empty() && seen.insert(canonical_cyclic(r)))
        .collect()
}

/// Expression for generator `g` from relator `r`, if `g` occurs exactly once.
fn solve_for(r: &FreeWord, g: usize) -> Option<FreeWord> {
    let pos: Vec<usize> = (0..r.len()).filter(|&i| r.0[i].unsigned_abs() as usize == g).collect();
    if pos.len() != 1 {
        return None;
    }
    // rotate so the letter comes first: g^e v = 1
    let k = pos[0];
    let e = r.0[k];
    let mut v = r.0[k + 1..].to_vec();
    v.extend_from_slice(&r.0[..k]);
    let v = FreeWord(v);
    Some(if e > 0 { v.inverse() } else { v })
}

fn substitute_one(w: &FreeWord, g: usize, image: &FreeWord) -> FreeWord {
    let n = w.max_generator().max(g);
    let images: Vec<FreeWord> = (1..=n)
        .map(|i| if i == g { image.clone() } else { FreeWord::gen(i) })
        .collect();
    w.substitute(&images).cyclic_reduce()
}

fn best_elimination(rels: &[FreeWord], budget: usize) -> Option<(usize, usize, FreeWord)> {
    let mut best: Option<(usize, usize, usize, FreeWord)> = None;
    for (ri, r) in rels.iter().enumerate() {
        let mut gs: Vec<usize> = r.0.iter().map(|l| l.unsigned_abs() as usize).collect();
        gs.sort_unstable();
        gs.dedup();
        for g in gs {
            let Some(image) = solve_for(r, g) else { continue };
            let cost: usize = rels
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != ri)
                .map(|(_, s)| {
                    if s.0.iter().any(|l| l.unsigned_abs() as usize == g) {
                        substitute_one(s, g, &image).len()
                    } else {
                        s.len()
                    }
                })
                .sum();
            if cost > budget {
                continue;
            }
            let better = match &best {
                None => true,
                Some((c, bg, br, _)) => (cost, g, ri) < (*c, *bg, *br),
            };
            if better {
                best = Some((cost, g, ri, image));
            }
        }
    }
    best.map(|(_, g, r, image)| (g, r, image))
}

/// Substitute `image` for `g` and renumber the generators above `g`.
fn eliminate(rels: &[FreeWord], g: usize, image: &FreeWord) -> Vec<FreeWord> {
    rels.iter()
        .map(|r| {
            let w = substitute_one(r, g, image);
            FreeWord(
                w.0.iter()
                    .map(|&l| {
                        let a = l.unsigned_abs() as usize;
                        if a > g {
                            l - l.signum()
                        } else {
                            l
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

fn rotations(w: &FreeWord) -> impl Iterator<Item = Vec<i32>> + '_ {
    (0..w.len()).map(move |k| {
        let mut v = w.0[k..].to_vec();
        v.extend_from_slice(&w.0[..k]);
        v
    })
}

/// If a cyclic piece `x` of length more than half of some relator `r = x y`
/// occurs cyclically in another relator, replace it by `y^-1`. Returns true
/// if any relator got shorter.
fn shorten(rels: &mut [FreeWord]) -> bool {
    let mut changed = false;
    let mut idx: Vec<usize> = (0..rels.len()).collect();
    idx.sort_by_key(|&i| rels[i].len());
    for &ri in &idx {
        let r = rels[ri].clone();
        let n = r.len();
        if n == 0 {
            continue;
        }
        let k = n / 2 + 1;
        // every cyclic piece of length k of r or r^-1, with its replacement
        let mut pieces: HashMap<Vec<i32>, FreeWord> = HashMap::new();
        for cand in [r.clone(), r.inverse()] {
            for rot in rotations(&cand) {
                let y = FreeWord(rot[k..].to_vec());
                pieces.entry(rot[..k].to_vec()).or_insert_with(|| y.inverse());
            }
        }
        for si in 0..rels.len() {
            if si == ri || rels[si].len() < k {
                continue;
            }
            loop {
                let s = rels[si].clone();
                let m = s.len();
                if m < k {
                    break;
                }
                let hit = (0..m).find_map(|start| {
                    let window: Vec<i32> = (0..k).map(|t| s.0[(start + t) % m]).collect();
                    pieces.get(&window).map(|rep| (start, rep.clone()))
                });
                let Some((start, rep)) = hit else { break };
                let mut rotated = s.0[start..].to_vec();
                rotated.extend_from_slice(&s.0[..start]);
                let replaced = rep.mul(&FreeWord(rotated[k..].to_vec())).cyclic_reduce();
                if replaced.len() >= m {
                    break;
                }
                rels[si] = replaced;
                changed = true;
            }
        }
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::abelian::abelianization;
    use crate::group::finite::battery_groups;
    use crate::group::homs::count_homomorphisms;
    use crate::group::{expected_affine, expected_projective, Provenance};
    use proptest::prelude::*;

    #[test]
    fn eliminates_defined_generator() {
        let p = expected_projective(3, 2);
        let s = tietze_simplify(&p);
        // g1 = w g2^-1 is the cheapest substitution, leaving < g2, w | w^3 >
        assert_eq!(s.generators, vec!["g2", "w"]);
        assert_eq!(s.relators, vec![FreeWord(vec![2, 2, 2])]);
    }

    #[test]
    fn trivial_group_collapses() {
        let p = Presentation::new(
            vec!["a".into(), "b".into()],
            vec![FreeWord(vec![1]), FreeWord(vec![1, 2, -1])],
            Provenance::Derived,
        );
        let s = tietze_simplify(&p);
        assert!(s.generators.is_empty());
        assert!(s.relators.is_empty());
    }

    #[test]
    fn shortening_uses_long_pieces() {
        let mut rels = vec![FreeWord(vec![1, 2, 3]), FreeWord(vec![1, 2, 2, 2, 1, 2])];
        assert!(shorten(&mut rels));
        // a b = c^-1 so a b b b a b -> c^-1 b b c^-1
        assert_eq!(canonical_cyclic(&rels[1]), canonical_cyclic(&FreeWord(vec![-3, 2, 2, -3])));
    }

    fn invariants(p: &Presentation) -> (String, Vec<u64>) {
        let groups = battery_groups();
        let counts = groups[..6].iter().map(|g| count_homomorphisms(p, g).unwrap()).collect();
        (abelianization(p).unwrap().to_string(), counts)
    }

    #[test]
    fn preserves_invariants_of_expected_groups() {
        for (p, q) in [(2, 2), (3, 2), (4, 3)] {
            for pres in [expected_affine(p, q), expected_projective(p, q)] {
                let s = tietze_simplify(&pres);
                assert!(s.generator_count() <= q);
                if pres.generator_count() <= 4 {
                    assert_eq!(invariants(&pres), invariants(&s));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_presentations_keep_invariants(
            rels in prop::collection::vec(prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2, 3, -3]), 1..7), 1..4)
        ) {
            let p = Presentation::new(
                vec!["a".into(), "b".into(), "c".into()],
                rels.into_iter().map(FreeWord).collect(),
                Provenance::Derived,
            );
            let s = tietze_simplify(&p);
            prop_assert!(s.generator_count() <= 3);
            prop_assert!(s.generators.iter().all(|g| p.generators.contains(g)));
            prop_assert_eq!(invariants(&p), invariants(&s));
        }
    }
}
