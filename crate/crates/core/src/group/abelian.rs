use serde::{Deserialize, Serialize};

use super::Presentation;
use crate::error::{Error, Result};

/// `Z^rank + Z/t_1 + ... + Z/t_k` with `t_1 | t_2 | ... | t_k`, all `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn overflow() -> Error {
    Error::ExactArithmeticOverflow("Smith normal form entry exceeds i128".into())
}

/// Diagonal of the Smith normal form (nonzero entries, absolute values).
pub fn smith_diagonal(mut m: Vec<Vec<i128>>, cols: usize) -> Result<Vec<i128>> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let f = m[i][t] / piv;
                if f != 0 {
                    for j in t..cols {
                        let sub = f.checked_mul(m[t][j]).ok_or_else(overflow)?;
                        m[i][j] = m[i][j].checked_sub(sub).ok_or_else(overflow)?;
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / piv;
                if f != 0 {
                    for row in m.iter_mut().skip(t) {
                        let sub = f.checked_mul(row[t]).ok_or_else(overflow)?;
                        row[j] = row[j].checked_sub(sub).ok_or_else(overflow)?;
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder into the pivot and repeat
                let mut best = (t, t);
                for i in t..rows {
                    if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                }
                if best.1 != t {
                    for row in m.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // the pivot must divide the whole remaining block
            let piv = m[t][t];
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % piv != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        m[t][j] = m[t][j].checked_add(m[i][j]).ok_or_else(overflow)?;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

/// Exponent-sum matrix of the relators, one row per relator.
pub fn relation_matrix(p: &Presentation) -> Vec<Vec<i128>> {
    let n = p.generator_count();
    p.relators
        .iter()
        .map(|r| r.exponent_sums(n).into_iter().map(i128::from).collect())
        .collect()
}

pub fn abelianization(p: &Presentation) -> Result<AbelianInvariants> {
    let n = p.generator_count();
    let diag = smith_diagonal(relation_matrix(p), n)?;
    let rank = n - diag.len();
    let mut torsion: Vec<u64> = diag
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| u64::try_from(d).map_err(|_| overflow()))
        .collect::<Result<_>>()?;
    torsion.sort_unstable();
    Ok(AbelianInvariants { rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::FreeWord;
    use crate::group::{expected_affine, expected_projective, Provenance};
    use proptest::prelude::*;

    fn pres(n: usize, rels: &[&[i32]]) -> Presentation {
        Presentation::new(
            (1..=n).map(|i| format!("x{i}")).collect(),
            rels.iter().map(|r| FreeWord(r.to_vec())).collect(),
            Provenance::Derived,
        )
    }

    #[test]
    fn examples() {
        let a = abelianization(&expected_projective(3, 2)).unwrap();
        assert_eq!(a, AbelianInvariants { rank: 1, torsion: vec![3] });
        for (p, q) in [(2, 2), (3, 2), (4, 3), (5, 2)] {
            let a = abelianization(&expected_affine(p, q)).unwrap();
            assert_eq!(a, AbelianInvariants { rank: q, torsion: vec![] });
            let a = abelianization(&expected_projective(p, q)).unwrap();
            assert_eq!(a, AbelianInvariants { rank: q - 1, torsion: vec![p as u64] });
        }
        assert_eq!(abelianization(&pres(1, &[])).unwrap().rank, 1);
    }

    #[test]
    fn divisibility_chain() {
        // Z/4 + Z/6 = Z/2 + Z/12
        let a = abelianization(&pres(2, &[&[1, 1, 1, 1], &[2, 2, 2, 2, 2, 2]])).unwrap();
        assert_eq!(a.torsion, vec![2, 12]);
        assert_eq!(a.to_string(), "Z/2 + Z/12");
    }

    /// Order of the torsion subgroup times the rank must match the
    /// determinant of a square full-rank matrix.
    fn det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn square_matrix_order_is_det(m in prop::collection::vec(prop::collection::vec(-6i128..7, 3), 3)) {
            let d = det(&m).abs();
            let diag = smith_diagonal(m.clone(), 3).unwrap();
            if d == 0 {
                prop_assert!(diag.len() < 3);
            } else {
                prop_assert_eq!(diag.len(), 3);
                prop_assert_eq!(diag.iter().product::<i128>(), d);
                prop_assert!(diag.windows(2).all(|w| w[1] % w[0] == 0));
            }
        }
    }
}
