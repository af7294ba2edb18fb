use super::finite::FiniteGroupTable;
use super::Presentation;
use crate::error::{Error, Result};

/// Largest generator count accepted by [`count_homomorphisms`].
pub const MAX_GENERATORS: usize = 6;
/// Largest target order accepted by [`count_homomorphisms`].
pub const MAX_TARGET_ORDER: usize = 24;

/// Number of homomorphisms from the presented group to `target`.
///
/// Backtracks over generator images; each relator is checked as soon as all
/// of its generators are assigned.
pub fn count_homomorphisms(p: &Presentation, target: &FiniteGroupTable) -> Result<u64> {
    let n = p.generator_count();
    if n > MAX_GENERATORS || target.order > MAX_TARGET_ORDER {
        return Err(Error::BudgetExceeded(format!(
            "hom count with {n} generators into a group of order {} (limits {MAX_GENERATORS}, {MAX_TARGET_ORDER})",
            target.order
        )));
    }
    p.validate()?;
    let rels: Vec<Vec<(usize, bool)>> = p
        .relators
        .iter()
        .map(|r| r.letters().iter().map(|&l| (l.unsigned_abs() as usize - 1, l > 0)).collect())
        .collect();
    let gens_of = |r: &Vec<(usize, bool)>| -> Vec<usize> {
        let mut g: Vec<usize> = r.iter().map(|x| x.0).collect();
        g.sort_unstable();
        g.dedup();
        g
    };

    // assignment order: greedily complete as many relators as possible early
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let score = |g: usize| {
            rels.iter()
                .filter(|r| {
                    let gs = gens_of(r);
                    gs.contains(&g) && gs.iter().all(|&h| h == g || placed[h])
                })
                .count()
        };
        let next = (0..n)
            .filter(|&g| !placed[g])
            .max_by_key(|&g| (score(g), std::cmp::Reverse(g)))
            .expect("unplaced generator");
        placed[next] = true;
        order.push(next);
    }
    let mut level_of = vec![0usize; n];
    for (lvl, &g) in order.iter().enumerate() {
        level_of[g] = lvl;
    }
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, r) in rels.iter().enumerate() {
        if let Some(lvl) = r.iter().map(|x| level_of[x.0]).max() {
            checks[lvl].push(k);
        }
    }

    let mut images = vec![0u8; n];
    Ok(search(0, &order, &checks, &rels, target, &mut images))
}

fn search(
    level: usize,
    order: &[usize],
    checks: &[Vec<usize>],
    rels: &[Vec<(usize, bool)>],
    g: &FiniteGroupTable,
    images: &mut [u8],
) -> u64 {
    if level == order.len() {
        return 1;
    }
    let mut total = 0;
    for x in 0..g.order as u8 {
        images[order[level]] = x;
        let ok = checks[level].iter().all(|&k| {
            rels[k].iter().fold(0u8, |acc, &(gen, pos)| {
                let y = images[gen];
                g.mul(acc, if pos { y } else { g.inv(y) })
            }) == 0
        });
        if ok {
            total += search(level + 1, order, checks, rels, g, images);
        }
    }
    total
}
