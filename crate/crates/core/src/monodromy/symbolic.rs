use crate::braid::FreeWord;
use crate::group::Provenance;

use super::{RelationSet, TaggedRelator};

/// Generator index conventions for the planet/satellite generators
/// `a_{i,j}` (`i = 0..p-1`, `j = 1..q`) and `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicIndex {
    pub p: usize,
    pub q: usize,
}

impl SymbolicIndex {
    pub fn a(&self, i: usize, j: usize) -> i32 {
        debug_assert!(i < self.p && (1..=self.q).contains(&j));
        (i * self.q + j) as i32
    }

    pub fn omega(&self) -> i32 {
        (self.p * self.q + 1) as i32
    }

    pub fn generator_count(&self) -> usize {
        self.p * self.q + 1
    }

    pub fn names(&self) -> Vec<String> {
        let mut v = Vec::with_capacity(self.generator_count());
        for i in 0..self.p {
            for j in 1..=self.q {
                v.push(format!("a{i}_{j}"));
            }
        }
        v.push("w".into());
        v
    }

    pub fn a_word(&self, i: usize, j: usize) -> FreeWord {
        FreeWord(vec![self.a(i, j)])
    }

    pub fn omega_pow(&self, n: i64) -> FreeWord {
        FreeWord(vec![self.omega()]).pow(n)
    }

    /// `h_{i,j} = a_{i,1} ... a_{i,j-1}`.
    pub fn h(&self, i: usize, j: usize) -> FreeWord {
        FreeWord((1..j).map(|k| self.a(i, k)).collect())
    }

    /// `g_{i,j} = a_{i,j+1} ... a_{i,q}`.
    pub fn g(&self, i: usize, j: usize) -> FreeWord {
        FreeWord((j + 1..=self.q).map(|k| self.a(i, k)).collect())
    }
}

/// Relator for the equation `lhs = rhs`, written `lhs^-1 rhs`.
pub fn equation(lhs: &FreeWord, rhs: &FreeWord) -> FreeWord {
    lhs.inverse().mul(rhs)
}

/// The closed-form monodromy relations, wrap-around families included.
pub fn derive_relations_symbolic(p: usize, q: usize) -> RelationSet {
    let ix = SymbolicIndex { p, q };
    let pp = p as i64;
    let mut relators = Vec::new();
    let mut push = |word: FreeWord, source: String| {
        relators.push(TaggedRelator { word, source });
    };

    // shift: a_{i,j} = w^{p-1} a_{i+1,j} w^{-(p-1)}, wrap-around with w^{2p-1}
    for i in 0..p {
        for j in 1..=q {
            let (next, power) = if i + 1 < p { (i + 1, pp - 1) } else { (0, 2 * pp - 1) };
            let rhs = ix.a_word(next, j).conjugate_by(&ix.omega_pow(power));
            push(equation(&ix.a_word(i, j), &rhs), format!("shift i={i} j={j}"));
        }
    }

    // twist: a_{i,j} = (g_{i+1,j} h_{i,j})^-1 a_{i+1,j} (g_{i+1,j} h_{i,j});
    // at i = p-1 the conjugator is X = h_{p-1,j}^-1 w^p g_{0,j}^-1, acting as X a X^-1
    for i in 0..p {
        for j in 1..=q {
            let rhs = if i + 1 < p {
                let c = ix.g(i + 1, j).mul(&ix.h(i, j));
                ix.a_word(i + 1, j).conjugate_by(&c.inverse())
            } else {
                let x = ix
                    .h(p - 1, j)
                    .inverse()
                    .mul(&ix.omega_pow(pp))
                    .mul(&ix.g(0, j).inverse());
                ix.a_word(0, j).conjugate_by(&x)
            };
            push(equation(&ix.a_word(i, j), &rhs), format!("twist i={i} j={j}"));
        }
    }

    // (S): w = a_{0,1} ... a_{0,q}
    let prod = FreeWord((1..=q).map(|j| ix.a(0, j)).collect());
    push(
        FreeWord(vec![ix.omega()]).mul(&prod.inverse()),
        "S".into(),
    );

    // the product of all meridians in the pencil fiber
    let mut omega_full = FreeWord::empty();
    for i in 0..p {
        omega_full = omega_full.mul(&FreeWord((1..=q).map(|j| ix.a(i, j)).collect()));
    }

    RelationSet {
        generators: ix.names(),
        relators,
        provenance: Provenance::Symbolic,
        omega: omega_full,
    }
}

/// True for the wrap-around relators (`i = p-1`).
pub fn is_wraparound(source: &str, p: usize) -> bool {
    source.contains(&format!("i={} ", p - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let r = derive_relations_symbolic(2, 2);
        assert_eq!(r.generators.len(), 5);
        assert_eq!(r.relators.len(), 4 + 4 + 1);
        let r = derive_relations_symbolic(4, 3);
        assert_eq!(r.relators.len(), 12 + 12 + 1);
    }

    #[test]
    fn three_two_examples() {
        let ix = SymbolicIndex { p: 3, q: 2 };
        let r = derive_relations_symbolic(3, 2);
        let find = |s: &str| r.relators.iter().find(|t| t.source == s).unwrap().word.clone();
        // a_{0,2}^-1 a_{0,1}^-1 a_{1,2} a_{0,1}
        assert_eq!(
            find("twist i=0 j=2"),
            FreeWord(vec![-ix.a(0, 2), -ix.a(0, 1), ix.a(1, 2), ix.a(0, 1)])
        );
        // a_{0,1} = w^2 a_{1,1} w^-2
        let w = ix.omega();
        assert_eq!(
            find("shift i=0 j=1"),
            FreeWord(vec![-ix.a(0, 1), w, w, ix.a(1, 1), -w, -w])
        );
        assert_eq!(find("S"), FreeWord(vec![w, -ix.a(0, 2), -ix.a(0, 1)]));
    }

    #[test]
    fn wraparound_tags() {
        let r = derive_relations_symbolic(3, 2);
        let n = r.relators.iter().filter(|t| is_wraparound(&t.source, 3)).count();
        assert_eq!(n, 4);
    }

    #[test]
    fn h_and_g_words() {
        let ix = SymbolicIndex { p: 3, q: 3 };
        assert!(ix.h(1, 1).is_empty());
        assert!(ix.g(1, 3).is_empty());
        assert_eq!(ix.h(1, 3), FreeWord(vec![ix.a(1, 1), ix.a(1, 2)]));
        assert_eq!(ix.g(2, 1), FreeWord(vec![ix.a(2, 2), ix.a(2, 3)]));
    }
}
