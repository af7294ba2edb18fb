use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Multiplication table of a small finite group; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub name: String,
    pub order: usize,
    table: Vec<Vec<u8>>,
    inverse: Vec<u8>,
}

impl FiniteGroupTable {
    /// Builds the table from a full element list and composition; checks the
    /// group axioms.
    pub fn from_table(name: &str, table: Vec<Vec<u8>>) -> Result<Self> {
        let n = table.len();
        let bad = |why: &str| Error::Invalid(format!("{name}: {why}"));
        if n == 0 || n > 255 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(bad("malformed table"));
        }
        for a in 0..n {
            if table[0][a] as usize != a || table[a][0] as usize != a {
                return Err(bad("element 0 is not the identity"));
            }
        }
        let mut inverse = vec![0u8; n];
        for a in 0..n {
            let inv = (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0);
            inverse[a] = inv.ok_or_else(|| bad("missing inverse"))? as u8;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            name: name.into(),
            order: n,
            table,
            inverse,
        })
    }

    /// Group generated by permutations of `0..degree`.
    pub fn from_permutations(name: &str, degree: usize, gens: &[Vec<u8>]) -> Result<Self> {
        let identity: Vec<u8> = (0..degree as u8).collect();
        let compose = |a: &[u8], b: &[u8]| -> Vec<u8> { a.iter().map(|&i| b[i as usize]).collect() };
        let mut elems: BTreeSet<Vec<u8>> = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity.clone()]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = compose(&x, g);
                if elems.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut list: Vec<Vec<u8>> = vec![identity.clone()];
        list.extend(elems.into_iter().filter(|e| *e != identity));
        let index = |e: &Vec<u8>| list.iter().position(|x| x == e).expect("closed") as u8;
        let table = list
            .iter()
            .map(|a| list.iter().map(|b| index(&compose(a, b))).collect())
            .collect();
        Self::from_table(name, table)
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u8) -> u8 {
        self.inverse[a as usize]
    }
}

fn cycle(n: usize) -> Vec<u8> {
    (0..n as u8).map(|i| (i + 1) % n as u8).collect()
}

/// The fixed targets of the invariant battery, in report order.
pub fn battery_groups() -> Vec<FiniteGroupTable> {
    let specs: Vec<(&str, usize, Vec<Vec<u8>>, usize)> = vec![
        ("Z2", 2, vec![cycle(2)], 2),
        ("Z3", 3, vec![cycle(3)], 3),
        ("Z4", 4, vec![cycle(4)], 4),
        ("Z5", 5, vec![cycle(5)], 5),
        ("S3", 3, vec![vec![1, 0, 2], cycle(3)], 6),
        ("D4", 4, vec![cycle(4), vec![0, 3, 2, 1]], 8),
        ("A4", 4, vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 12),
        ("S4", 4, vec![vec![1, 0, 2, 3], cycle(4)], 24),
    ];
    specs
        .into_iter()
        .map(|(name, deg, gens, order)| {
            let g = FiniteGroupTable::from_permutations(name, deg, &gens).expect("valid embedded group");
            assert_eq!(g.order, order, "{name} has wrong order");
            g
        })
        .collect()
}

pub fn trivial_group() -> FiniteGroupTable {
    FiniteGroupTable::from_table("1", vec![vec![0]]).expect("trivial group")
}
