use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CrossingEvent;

/// Word in a free group; letter `+i` is generator `i` (1-based), `-i` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeWord(pub Vec<i32>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        FreeWord(vec![i as i32])
    }

    pub fn from_letters(letters: &[i32]) -> Self {
        free_reduce(&FreeWord(letters.to_vec()))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        FreeWord(out)
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `c * self * c^-1`.
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.mul(self).mul(&c.inverse())
    }

    /// Highest generator index used.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exponent sum of each generator `1..=n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Substitute `images[i-1]` for generator `i`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &m in &img.0 {
                    push_reduced(&mut out, m);
                }
            } else {
                for &m in img.0.iter().rev() {
                    push_reduced(&mut out, -m);
                }
            }
        }
        FreeWord(out)
    }

    /// Cyclically reduced form.
    pub fn cyclic_reduce(&self) -> FreeWord {
        let w = free_reduce(self);
        let mut a = 0;
        let mut b = w.0.len();
        while b - a >= 2 && w.0[a] == -w.0[b - 1] {
            a += 1;
            b -= 1;
        }
        FreeWord(w.0[a..b].to_vec())
    }
}

fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

pub fn free_reduce(w: &FreeWord) -> FreeWord {
    let mut out = Vec::with_capacity(w.0.len());
    for &l in &w.0 {
        push_reduced(&mut out, l);
    }
    FreeWord(out)
}

/// Product `g_1 g_2 ... g_d`, the element fixed by every braid.
pub fn omega_word(d: usize) -> FreeWord {
    FreeWord((1..=d as i32).collect())
}

/// Braid on `strands` strands; letter `+k` is the positive generator
/// exchanging positions `k` and `k+1`.
/// Serializes as the bare letter array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    letters: Letters,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Letters(Vec<i32>);

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.0.serialize(s)
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if let Some(bad) = letters
            .iter()
            .find(|l| **l == 0 || l.unsigned_abs() as usize >= strands)
        {
            return Err(Error::Invalid(format!(
                "braid letter {bad} out of range for {strands} strands"
            )));
        }
        Ok(BraidWord {
            strands,
            letters: Letters(letters),
        })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Letters(Vec::new()),
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters.0
    }

    pub fn len(&self) -> usize {
        self.letters.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.0.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.0.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: Letters(self.letters.0.iter().rev().map(|l| -l).collect()),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut v = self.letters.0.clone();
        v.extend_from_slice(&other.letters.0);
        BraidWord {
            strands: self.strands.max(other.strands),
            letters: Letters(v),
        }
        .reduced()
    }

    /// Cancels adjacent `s s^-1` pairs.
    pub fn reduced(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.len());
        for &l in &self.letters.0 {
            push_reduced(&mut out, l);
        }
        BraidWord {
            strands: self.strands,
            letters: Letters(out),
        }
    }
}

/// Permutation of `0..n`, `images[i]` being the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle lengths in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Position permutation: the strand starting at position `i` ends at `perm[i]`.
pub fn permutation_of(b: &BraidWord) -> Permutation {
    let mut at = (0..b.strands).collect::<Vec<_>>();
    for &l in b.letters() {
        let k = l.unsigned_abs() as usize - 1;
        at.swap(k, k + 1);
    }
    // at[slot] = starting position of the strand now in `slot`
    Permutation(at).inverse()
}

/// `(s_1 s_2 ... s_{d-1})^d`.
pub fn full_twist(d: usize) -> BraidWord {
    let row: Vec<i32> = (1..d as i32).collect();
    let letters = row.iter().copied().cycle().take(row.len() * d).collect();
    BraidWord {
        strands: d,
        letters: Letters(letters),
    }
}

/// Braid word read off crossing events, given the starting slot order.
pub fn braid_from_events(
    d: usize,
    initial_order: &[usize],
    events: &[CrossingEvent],
) -> Result<BraidWord> {
    if initial_order.len() != d {
        return Err(Error::InconsistentEvents(format!(
            "initial order has {} strands, expected {d}",
            initial_order.len()
        )));
    }
    let mut order = initial_order.to_vec();
    let mut letters = Vec::with_capacity(events.len());
    for (n, e) in events.iter().enumerate() {
        if e.slot + 1 >= d {
            return Err(Error::InconsistentEvents(format!("event {n}: slot {} out of range", e.slot)));
        }
        if (order[e.slot], order[e.slot + 1]) != e.labels {
            return Err(Error::InconsistentEvents(format!(
                "event {n}: strands {:?} are not in slots {} and {}",
                e.labels,
                e.slot,
                e.slot + 1
            )));
        }
        if e.sign != 1 && e.sign != -1 {
            return Err(Error::InconsistentEvents(format!("event {n}: sign {}", e.sign)));
        }
        order.swap(e.slot, e.slot + 1);
        letters.push(e.sign as i32 * (e.slot as i32 + 1));
    }
    BraidWord::new(d, letters)
}

/// Images of all generators under the Artin automorphism of `b`.
///
/// `s_k` sends `g_k -> g_k g_{k+1} g_k^-1` and `g_{k+1} -> g_k`; a word acts
/// as the composite `phi(s_1) o phi(s_2) o ...`, so the product
/// `g_1 ... g_d` is fixed.
pub fn artin_images(b: &BraidWord) -> Vec<FreeWord> {
    let d = b.strands;
    let mut img: Vec<FreeWord> = (1..=d).map(FreeWord::gen).collect();
    for &l in b.letters() {
        let k = l.unsigned_abs() as usize - 1;
        let (a, c) = (img[k].clone(), img[k + 1].clone());
        if l > 0 {
            img[k] = a.mul(&c).mul(&a.inverse());
            img[k + 1] = a;
        } else {
            img[k] = c.clone();
            img[k + 1] = c.inverse().mul(&a).mul(&c);
        }
    }
    img
}

pub fn artin_action(b: &BraidWord, w: &FreeWord) -> FreeWord {
    w.substitute(&artin_images(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fw(v: &[i32]) -> FreeWord {
        FreeWord(v.to_vec())
    }

    fn bw(d: usize, v: &[i32]) -> BraidWord {
        BraidWord::new(d, v.to_vec()).unwrap()
    }

    /// Independent oracle: substitute into the whole word one letter at a
    /// time, innermost letter first.
    fn naive_action(b: &BraidWord, w: &FreeWord) -> FreeWord {
        let d = b.strands;
        let mut cur = w.clone();
        for &l in b.letters().iter().rev() {
            let k = l.unsigned_abs() as usize;
            let mut images: Vec<FreeWord> = (1..=d).map(FreeWord::gen).collect();
            let (gk, gk1) = (k as i32, k as i32 + 1);
            if l > 0 {
                images[k - 1] = fw(&[gk, gk1, -gk]);
                images[k] = fw(&[gk]);
            } else {
                images[k - 1] = fw(&[gk1]);
                images[k] = fw(&[-gk1, gk, gk1]);
            }
            cur = cur.substitute(&images);
        }
        cur
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(free_reduce(&fw(&[1, -1])), fw(&[]));
        assert_eq!(free_reduce(&fw(&[1, 2, -2, 1])), fw(&[1, 1]));
        assert_eq!(free_reduce(&fw(&[1, 2, 1])), fw(&[1, 2, 1]));
        assert_eq!(fw(&[-2, 1, 3, 2]).cyclic_reduce(), fw(&[1, 3]));
    }

    #[test]
    fn artin_examples() {
        let s1 = bw(2, &[1]);
        assert_eq!(artin_action(&s1, &fw(&[1])), fw(&[1, 2, -1]));
        assert_eq!(artin_action(&s1, &fw(&[1, 2])), fw(&[1, 2]));
    }

    #[test]
    fn full_twist_conjugates_by_omega() {
        for d in 2..=6 {
            let t = full_twist(d);
            assert_eq!(t.exponent_sum(), (d * (d - 1)) as i64);
            assert!(permutation_of(&t).is_identity());
            let om = omega_word(d);
            for g in 1..=d {
                let img = artin_action(&t, &FreeWord::gen(g));
                assert_eq!(img, FreeWord::gen(g).conjugate_by(&om), "d={d} g={g}");
            }
        }
        // d = 3, g_2 written out by hand
        assert_eq!(
            artin_action(&full_twist(3), &fw(&[2])),
            fw(&[1, 2, 3, 2, -3, -2, -1])
        );
        assert_eq!(full_twist(2).letters(), &[1, 1]);
    }

    #[test]
    fn braid_relations_exhaustive() {
        for d in 3..=8 {
            for k in 1..(d as i32 - 1) {
                let a = bw(d, &[k, k + 1, k]);
                let b = bw(d, &[k + 1, k, k + 1]);
                assert_eq!(artin_images(&a), artin_images(&b));
                assert_eq!(permutation_of(&a), permutation_of(&b));
            }
            for i in 1..d as i32 {
                for j in i + 2..d as i32 {
                    assert_eq!(artin_images(&bw(d, &[i, j])), artin_images(&bw(d, &[j, i])));
                }
            }
        }
    }

    #[test]
    fn permutation_examples() {
        assert_eq!(permutation_of(&bw(2, &[1])), Permutation(vec![1, 0]));
        // strand at 0 goes to 1, then to 2
        assert_eq!(permutation_of(&bw(3, &[1, 2])), Permutation(vec![2, 0, 1]));
    }

    #[test]
    fn events_to_word() {
        assert!(braid_from_events(2, &[0, 1], &[]).unwrap().is_empty());
        let e = CrossingEvent {
            step: 0,
            labels: (0, 1),
            slot: 0,
            sign: 1,
        };
        assert_eq!(braid_from_events(2, &[0, 1], &[e]).unwrap().letters(), &[1]);
        // labels out of place
        assert!(braid_from_events(2, &[1, 0], &[e]).is_err());
    }

    #[test]
    fn braid_json_is_int_array() {
        let b = bw(3, &[1, -2, 1]);
        assert_eq!(serde_json::to_string(&b).unwrap(), "[1,-2,1]");
        assert_eq!(serde_json::to_string(&fw(&[2, -1])).unwrap(), "[2,-1]");
    }

    fn braid_strategy() -> impl Strategy<Value = BraidWord> {
        (2usize..7).prop_flat_map(|d| {
            prop::collection::vec((1..d as i32, any::<bool>()), 0..12).prop_map(move |v| {
                let letters = v.into_iter().map(|(k, s)| if s { k } else { -k }).collect();
                BraidWord::new(d, letters).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn action_matches_naive_oracle(b in braid_strategy(), g in 0usize..6) {
            let w = FreeWord::gen(g % b.strands + 1);
            prop_assert_eq!(artin_action(&b, &w), naive_action(&b, &w));
        }

        #[test]
        fn action_fixes_omega(b in braid_strategy()) {
            let om = omega_word(b.strands);
            prop_assert_eq!(artin_action(&b, &om), om);
        }

        #[test]
        fn action_is_homomorphism(a in braid_strategy(), c in 0usize..6) {
            let d = a.strands;
            let b = BraidWord::new(d, a.letters().iter().rev().map(|l| -l).take(5).collect()).unwrap();
            let ab = a.concat(&b);
            let w = FreeWord::gen(c % d + 1);
            prop_assert_eq!(artin_action(&ab, &w), artin_action(&a, &artin_action(&b, &w)));
            prop_assert_eq!(permutation_of(&ab), permutation_of(&a).then(&permutation_of(&b)));
        }

        #[test]
        fn inverse_braid_undoes_action(b in braid_strategy()) {
            let w = FreeWord(vec![1, -2, 1]);
            let back = artin_action(&b, &artin_action(&b.inverse(), &w));
            prop_assert_eq!(back, w);
        }

        #[test]
        fn reduce_is_idempotent(v in prop::collection::vec(prop_oneof![-3i32..0, 1i32..4], 0..20)) {
            let once = free_reduce(&FreeWord(v));
            prop_assert_eq!(free_reduce(&once), once.clone());
            prop_assert!(once.0.windows(2).all(|w| w[0] != -w[1]));
        }
    }
}
