use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::exact::{int_poly_div_monic, is_all_zero};
use super::{unit_root, AlphaMode, CurveSpec};
use crate::error::{Error, Result};

/// Outcome of comparing `prod_j (zeta^j y^p - y + x^p)` with
/// `c * ((y^q)^p - (y - x^p)^q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusIdentity {
    pub p: usize,
    pub q: usize,
    pub c: i32,
    pub holds: bool,
    pub method: String,
}

const EXACT_MAX_Q: usize = 6;

pub fn torus_form_identity(spec: &CurveSpec) -> Result<TorusIdentity> {
    spec.validate()?;
    if spec.mode != AlphaMode::RootsOfUnity {
        return Err(Error::Invalid("torus identity needs roots-of-unity parameters".into()));
    }
    if spec.q <= EXACT_MAX_Q {
        Ok(exact_identity(spec.p, spec.q))
    } else {
        Ok(sampled_identity(spec.p, spec.q))
    }
}

/// Integer cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(n: usize) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let (quot, rem) = int_poly_div_monic(&num, &cyclotomic(d)).expect("monic divisor");
        debug_assert!(is_all_zero(&rem));
        num = quot;
    }
    num
}

type Monomial = (usize, usize);

/// Bivariate polynomial in `(x, y)` over the group ring `Z[z]/(z^q - 1)`.
struct RingPoly {
    q: usize,
    terms: BTreeMap<Monomial, Vec<BigInt>>,
}

impl RingPoly {
    fn one(q: usize) -> Self {
        let mut c = vec![BigInt::zero(); q];
        c[0] = BigInt::one();
        RingPoly {
            q,
            terms: BTreeMap::from([((0, 0), c)]),
        }
    }

    fn mul(&self, other: &RingPoly) -> RingPoly {
        let q = self.q;
        let mut terms: BTreeMap<Monomial, Vec<BigInt>> = BTreeMap::new();
        for (&(ax, ay), ac) in &self.terms {
            for (&(bx, by), bc) in &other.terms {
                let entry = terms
                    .entry((ax + bx, ay + by))
                    .or_insert_with(|| vec![BigInt::zero(); q]);
                for (i, a) in ac.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                    for (j, b) in bc.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                        entry[(i + j) % q] += a * b;
                    }
                }
            }
        }
        terms.retain(|_, c| !is_all_zero(c));
        RingPoly { q, terms }
    }
}

fn exact_identity(p: usize, q: usize) -> TorusIdentity {
    let phi = cyclotomic(q);
    let mut lhs = RingPoly::one(q);
    for j in 0..q {
        let mut terms = BTreeMap::new();
        let mut zj = vec![BigInt::zero(); q];
        zj[j] = BigInt::one();
        terms.insert((0, p), zj);
        let mut c = vec![BigInt::zero(); q];
        c[0] = -BigInt::one();
        terms.insert((0, 1), c);
        let mut c = vec![BigInt::zero(); q];
        c[0] = BigInt::one();
        terms.insert((p, 0), c);
        lhs = lhs.mul(&RingPoly { q, terms });
    }

    // reduce every coefficient modulo Phi_q; all must be rational integers
    let mut reduced: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    let mut integral = true;
    for (m, c) in &lhs.terms {
        let (_, rem) = int_poly_div_monic(c, &phi).expect("monic cyclotomic");
        if rem.iter().skip(1).any(|r| !r.is_zero()) {
            integral = false;
        }
        let c0 = rem.first().cloned().unwrap_or_default();
        if !c0.is_zero() {
            reduced.insert(*m, c0);
        }
    }

    // (y^q)^p - (y - x^p)^q
    let mut rhs: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    *rhs.entry((0, p * q)).or_default() += BigInt::one();
    for k in 0..=q {
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let term = -(binomial(q, k) * sign);
        *rhs.entry((p * k, q - k)).or_default() += term;
    }
    rhs.retain(|_, c| !c.is_zero());

    let lead_l = reduced.get(&(p * q, 0)).cloned().unwrap_or_default();
    let lead_r = rhs.get(&(p * q, 0)).cloned().unwrap_or_default();
    let c = if !lead_r.is_zero() && (&lead_l % &lead_r).is_zero() {
        (&lead_l / &lead_r).to_i32().unwrap_or(0)
    } else {
        0
    };
    let holds = integral
        && c != 0
        && c.abs() == 1
        && reduced.len() == rhs.len()
        && rhs
            .iter()
            .all(|(m, v)| reduced.get(m) == Some(&(v * BigInt::from(c))));
    TorusIdentity {
        p,
        q,
        c,
        holds,
        method: "exact-cyclotomic".into(),
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn sampled_identity(p: usize, q: usize) -> TorusIdentity {
    let mut rng = StdRng::seed_from_u64(0x5eed_0000 + (p * 1000 + q) as u64);
    let mut c_est: Option<f64> = None;
    let mut holds = true;
    for _ in 0..20 {
        let x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let y = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let xp = x.powu(p as u32);
        let yp = y.powu(p as u32);
        let lhs: Complex64 = (0..q).map(|j| unit_root(j, q) * yp - y + xp).product();
        let rhs = y.powu((q * p) as u32) - (y - xp).powu(q as u32);
        let ratio = lhs / rhs;
        let c = *c_est.get_or_insert(ratio.re.round());
        if (ratio - c).norm() > 1e-9 {
            holds = false;
        }
    }
    let c = c_est.unwrap_or(0.0) as i32;
    TorusIdentity {
        p,
        q,
        c,
        holds: holds && c.abs() == 1,
        method: "numeric-sampling".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn cyclotomic_small() {
        let as_i64 = |v: Vec<BigInt>| v.iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(cyclotomic(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic(6)), vec![1, -1, 1]);
    }

    #[test]
    fn constant_alternates_with_q() {
        for q in 2..=6 {
            for p in [2usize, 3, 4] {
                let spec = CurveSpec::roots_of_unity(p, q).unwrap();
                let t = torus_form_identity(&spec).unwrap();
                assert!(t.holds, "({p},{q})");
                assert_eq!(t.c, if q % 2 == 0 { -1 } else { 1 });
            }
        }
    }

    #[test]
    fn three_two_by_hand() {
        // (x^3 - y)^2 - y^6 = -(y^6 - (y - x^3)^2)
        let t = exact_identity(3, 2);
        assert_eq!(t.c, -1);
        assert!(t.holds);
    }

    #[test]
    fn sampling_agrees_with_exact() {
        for q in 2..=5 {
            let a = exact_identity(3, q);
            let b = sampled_identity(3, q);
            assert_eq!(a.c, b.c);
            assert!(b.holds);
        }
        let big = torus_form_identity(&CurveSpec::roots_of_unity(2, 7).unwrap()).unwrap();
        assert_eq!(big.method, "numeric-sampling");
        assert!(big.holds);
        assert_eq!(big.c, 1);
    }

    #[test]
    fn real_mode_rejected() {
        let spec = CurveSpec::new(3, 2, vec![2.0, 1.0]).unwrap();
        assert!(torus_form_identity(&spec).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert!(binomial(6, 3).is_positive());
    }
}
