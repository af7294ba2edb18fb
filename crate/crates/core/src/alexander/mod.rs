//! Alexander polynomials from presentations (Fox calculus) and the closed
//! forms they are compared against.

pub mod zpoly;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{tietze_simplify, Presentation};
use zpoly::{det_bareiss, ZPoly};

/// Integer Laurent polynomial `sum coeffs[k] t^(lo + k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub lo: i64,
    pub coeffs: Vec<i64>,
}

impl LaurentPoly {
    /// Trims zero coefficients at both ends; the zero polynomial has `lo = 0`.
    pub fn new(lo: i64, mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == coeffs.len() {
            return LaurentPoly { lo: 0, coeffs: Vec::new() };
        }
        coeffs.drain(..lead);
        LaurentPoly { lo: lo + lead as i64, coeffs }
    }

    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        Self::new(e, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    fn from_terms(terms: &BTreeMap<i64, i64>) -> Self {
        let Some((&lo, _)) = terms.iter().find(|(_, &c)| c != 0) else {
            return Self::zero();
        };
        let hi = *terms.keys().next_back().unwrap();
        let coeffs = (lo..=hi).map(|e| terms.get(&e).copied().unwrap_or(0)).collect();
        Self::new(lo, coeffs)
    }

    /// Lowest exponent moved to 0 and leading coefficient made positive.
    pub fn normalized(&self) -> Self {
        let sign = if self.coeffs.last().is_some_and(|&c| c < 0) { -1 } else { 1 };
        Self::new(0, self.coeffs.iter().map(|c| c * sign).collect())
    }

    /// Equality up to units `+-t^k`.
    pub fn equivalent(&self, other: &LaurentPoly) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * t.powi((self.lo + k as i64) as i32))
            .sum()
    }

    fn from_zpoly(p: &ZPoly) -> Result<Self> {
        let coeffs = p
            .0
            .iter()
            .map(|c| {
                c.to_i64()
                    .ok_or_else(|| Error::ExactArithmeticOverflow(format!("coefficient {c} exceeds i64")))
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(0, coeffs))
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let e = self.lo + k as i64;
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mono = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            match (a, mono.is_empty()) {
                (1, false) => write!(f, "{mono}")?,
                (_, true) => write!(f, "{a}")?,
                _ => write!(f, "{a}{mono}")?,
            }
        }
        Ok(())
    }
}

/// Image `t^weight` of each generator under an epimorphism to `Z = <t>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMap {
    pub generators: Vec<String>,
    pub weights: Vec<i64>,
}

impl DegreeMap {
    pub fn weight_of(&self, name: &str) -> Option<i64> {
        self.generators.iter().position(|g| g == name).map(|i| self.weights[i])
    }

    /// The same map on a presentation whose generators are a subset by name.
    pub fn restrict(&self, p: &Presentation) -> Result<DegreeMap> {
        let weights = p
            .generators
            .iter()
            .map(|g| {
                self.weight_of(g)
                    .ok_or_else(|| Error::InconsistentWeights(format!("no weight for generator {g}")))
            })
            .collect::<Result<_>>()?;
        Ok(DegreeMap {
            generators: p.generators.clone(),
            weights,
        })
    }

    fn word_weight(&self, letters: &[i32]) -> i64 {
        letters.iter().map(|&l| l.signum() as i64 * self.weights[l.unsigned_abs() as usize - 1]).sum()
    }

    /// Every relator must have total weight zero.
    pub fn check(&self, p: &Presentation) -> Result<()> {
        for r in &p.relators {
            let w = self.word_weight(r.letters());
            if w != 0 {
                return Err(Error::InconsistentWeights(format!(
                    "relator {} has weight {w}",
                    p.word_to_string(r)
                )));
            }
        }
        Ok(())
    }
}

/// Geometric meridians are every generator except the fiber loop `w`.
pub fn meridian_flags(p: &Presentation) -> Vec<bool> {
    p.generators.iter().map(|g| g != "w").collect()
}

/// Weight 1 on meridians; the remaining weights are solved from the
/// abelianized relators.
pub fn meridian_degree_map(p: &Presentation, meridians: &[bool]) -> Result<DegreeMap> {
    let n = p.generator_count();
    if meridians.len() != n {
        return Err(Error::Invalid(format!("{} meridian flags for {n} generators", meridians.len())));
    }
    if !meridians.iter().any(|&m| m) {
        return Err(Error::InconsistentWeights("no meridian generator".into()));
    }
    let mut weights: Vec<Option<i64>> = meridians.iter().map(|&m| m.then_some(1)).collect();
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| r.exponent_sums(n)).collect();
    loop {
        let mut progress = false;
        for row in &rows {
            let unknown: Vec<usize> = (0..n).filter(|&g| row[g] != 0 && weights[g].is_none()).collect();
            if unknown.len() != 1 {
                continue;
            }
            let g = unknown[0];
            let known: i64 = (0..n).filter(|&k| k != g).map(|k| row[k] * weights[k].unwrap_or(0)).sum();
            let (w, rem) = (-known).div_rem(&row[g]);
            if rem != 0 {
                return Err(Error::InconsistentWeights(format!(
                    "weight of {} would be {}/{}",
                    p.generators[g], -known, row[g]
                )));
            }
            weights[g] = Some(w);
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(g, w)| w.ok_or_else(|| Error::InconsistentWeights(format!("weight of {} is undetermined", p.generators[g]))))
        .collect::<Result<Vec<_>>>()?;
    let map = DegreeMap {
        generators: p.generators.clone(),
        weights,
    };
    map.check(p)?;
    Ok(map)
}

/// Abelianized Fox derivatives; entry `(r, g)` is `d(relator r)/d(generator g)`.
pub fn fox_jacobian(p: &Presentation, map: &DegreeMap) -> Vec<Vec<LaurentPoly>> {
    let n = p.generator_count();
    p.relators
        .iter()
        .map(|r| {
            let mut terms: Vec<BTreeMap<i64, i64>> = vec![BTreeMap::new(); n];
            let mut prefix = 0i64;
            for &l in r.letters() {
                let g = l.unsigned_abs() as usize - 1;
                let wg = map.weights[g];
                if l > 0 {
                    *terms[g].entry(prefix).or_default() += 1;
                    prefix += wg;
                } else {
                    prefix -= wg;
                    *terms[g].entry(prefix).or_default() -= 1;
                }
            }
            terms.iter().map(LaurentPoly::from_terms).collect()
        })
        .collect()
}

/// Largest generator count for exhaustive minor enumeration.
pub const MAX_MINOR_GENERATORS: usize = 8;
/// Cap on the number of minors evaluated.
pub const MAX_MINORS: usize = 200_000;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Gcd of all codimension-one minors of the Fox Jacobian, normalized.
/// Presentations with more than [`MAX_MINOR_GENERATORS`] generators are
/// Tietze-simplified first, keeping weights by generator name.
pub fn alexander_polynomial(p: &Presentation, map: &DegreeMap) -> Result<LaurentPoly> {
    map.check(p)?;
    let (p, map) = if p.generator_count() > MAX_MINOR_GENERATORS {
        let s = tietze_simplify(p);
        let m = map.restrict(&s)?;
        (s, m)
    } else {
        (p.clone(), map.clone())
    };
    let n = p.generator_count();
    if n == 0 {
        return Ok(LaurentPoly::monomial(1, 0));
    }
    if n > MAX_MINOR_GENERATORS {
        return Err(Error::BudgetExceeded(format!("{n} generators after simplification")));
    }
    // rows are shifted independently, which only changes minors by units
    let jac = shift_rows(&p, &map);
    let m = jac.len();
    let k = n - 1;
    let count = binomial(m, k).saturating_mul(n);
    if count > MAX_MINORS {
        return Err(Error::BudgetExceeded(format!("{count} minors of a {m}x{n} Fox matrix")));
    }
    if m < k {
        return Err(Error::ZeroIdeal);
    }
    let row_sets = combinations(m, k);
    let minors: Vec<ZPoly> = crate::parallel::install(|| {
        row_sets
            .par_iter()
            .flat_map_iter(|rows| (0..n).map(move |skip| (rows.clone(), skip)))
            .map(|(rows, skip)| {
                let sub: Vec<Vec<ZPoly>> = rows
                    .iter()
                    .map(|&r| (0..n).filter(|&c| c != skip).map(|c| jac[r][c].clone()).collect())
                    .collect();
                det_bareiss(sub)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let g = minors.iter().fold(ZPoly::zero(), |g, d| g.gcd(d));
    if g.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    Ok(LaurentPoly::from_zpoly(&g)?.normalized())
}

/// Fox Jacobian with each row multiplied by a power of `t` that makes all
/// its exponents nonnegative.
fn shift_rows(p: &Presentation, map: &DegreeMap) -> Vec<Vec<ZPoly>> {
    fox_jacobian(p, map)
        .into_iter()
        .map(|row| {
            let lo = row.iter().filter(|e| !e.is_zero()).map(|e| e.lo).min().unwrap_or(0);
            row.iter()
                .map(|e| {
                    if e.is_zero() {
                        ZPoly::zero()
                    } else {
                        let mut c = vec![0i64; (e.lo - lo) as usize];
                        c.extend_from_slice(&e.coeffs);
                        ZPoly::from_i64(&c)
                    }
                })
                .collect()
        })
        .collect()
}

/// Simplify, take the meridian degree map and compute the polynomial.
pub fn alexander_of_presentation(p: &Presentation) -> Result<LaurentPoly> {
    let map = meridian_degree_map(p, &meridian_flags(p))?;
    let s = tietze_simplify(p);
    let m = map.restrict(&s)?;
    alexander_polynomial(&s, &m)
}

/// Alexander polynomial, or the marker for a vanishing elementary ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlexanderValue {
    Polynomial(LaurentPoly),
    ZeroIdeal,
}

impl AlexanderValue {
    pub fn polynomial(&self) -> Option<&LaurentPoly> {
        match self {
            AlexanderValue::Polynomial(p) => Some(p),
            AlexanderValue::ZeroIdeal => None,
        }
    }
}

impl std::fmt::Display for AlexanderValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlexanderValue::Polynomial(p) => write!(f, "{p}"),
            AlexanderValue::ZeroIdeal => write!(f, "zero ideal"),
        }
    }
}

/// [`alexander_of_presentation`] with the zero ideal as a value.
pub fn alexander_value(p: &Presentation) -> Result<AlexanderValue> {
    match alexander_of_presentation(p) {
        Ok(d) => Ok(AlexanderValue::Polynomial(d)),
        Err(Error::ZeroIdeal) => Ok(AlexanderValue::ZeroIdeal),
        Err(e) => Err(e),
    }
}

fn t_pow_minus_one(n: usize) -> ZPoly {
    let mut c = vec![0i64; n + 1];
    c[0] = -1;
    c[n] = 1;
    ZPoly::from_i64(&c)
}

fn pow(p: &ZPoly, k: usize) -> ZPoly {
    (0..k).fold(ZPoly::one(), |acc, _| acc.mul(p))
}

/// `(t^{pq} - 1)^{q-1} (t - 1) / (t^q - 1)`.
pub fn closed_form_generic_linear(p: usize, q: usize) -> Result<LaurentPoly> {
    let num = pow(&t_pow_minus_one(p * q), q - 1).mul(&t_pow_minus_one(1));
    LaurentPoly::from_zpoly(&num.div_exact(&t_pow_minus_one(q))?).map(|l| l.normalized())
}

/// `(t^{pq/r} - 1)^r (t - 1) / ((t^p - 1)(t^q - 1))` with `r = gcd(p, q)`.
pub fn closed_form_tame_maximal(p: usize, q: usize) -> Result<LaurentPoly> {
    let r = p.gcd(&q);
    let num = pow(&t_pow_minus_one(p * q / r), r).mul(&t_pow_minus_one(1));
    let den = t_pow_minus_one(p).mul(&t_pow_minus_one(q));
    LaurentPoly::from_zpoly(&num.div_exact(&den)?).map(|l| l.normalized())
}
