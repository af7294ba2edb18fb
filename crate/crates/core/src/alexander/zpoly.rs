//! Dense integer polynomials in `t` with exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.0.last()
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    /// Exact quotient `self / d`; errors if the division leaves a remainder
    /// or needs fractions.
    pub fn div_exact(&self, d: &ZPoly) -> Result<ZPoly> {
        let dl = d.lead().ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let dd = d.degree().unwrap();
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return if self.is_zero() {
                Ok(ZPoly::zero())
            } else {
                Err(Error::InexactDivision("divisor has higher degree".into()))
            };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd];
            if c.is_zero() {
                continue;
            }
            let (quo, rem) = c.div_rem(dl);
            if !rem.is_zero() {
                return Err(Error::InexactDivision("non-integral quotient coefficient".into()));
            }
            for (i, dc) in d.0.iter().enumerate() {
                r[k + i] -= &quo * dc;
            }
            q[k] = quo;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision("nonzero remainder".into()));
        }
        Ok(Self::new(q))
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let dl = d.lead().expect("nonzero divisor").clone();
        let dd = d.degree().unwrap();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let rl = r.lead().unwrap().clone();
            let shift = rd - dd;
            let mut next: Vec<BigInt> = r.0.iter().map(|c| c * &dl).collect();
            for (i, dc) in d.0.iter().enumerate() {
                next[shift + i] -= &rl * dc;
            }
            r = Self::new(next);
        }
        r
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut c = self.content();
        if self.lead().unwrap().is_negative() {
            c = -c;
        }
        Self::new(self.0.iter().map(|x| x / &c).collect())
    }

    /// Greatest common divisor with positive leading coefficient, via the
    /// primitive remainder sequence.
    pub fn gcd(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return o.normalized_sign();
        }
        if o.is_zero() {
            return self.normalized_sign();
        }
        let content = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&content)
    }

    fn normalized_sign(&self) -> ZPoly {
        if self.lead().is_some_and(|l| l.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }
}

/// Determinant by fraction-free Gaussian elimination.
pub fn det_bareiss(mut m: Vec<Vec<ZPoly>>) -> Result<ZPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(ZPoly::one());
    }
    let mut sign = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(ZPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { d.neg() } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn gcd_examples() {
        // (t-1)(t+2) and (t-1)(t-3)
        assert_eq!(p(&[-2, 1, 1]).gcd(&p(&[3, -4, 1])), p(&[-1, 1]));
        // contents combine
        assert_eq!(p(&[2, 2]).gcd(&p(&[4, 4])), p(&[2, 2]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[1, 0, 1])), p(&[1]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-1, 1])).unwrap(), p(&[1, 1, 1, 1, 1, 1]));
        assert!(a.div_exact(&p(&[1, 2])).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![
            vec![p(&[1, 1]), p(&[0, 1]), p(&[2])],
            vec![p(&[0]), p(&[1, 0, 1]), p(&[-1, 1])],
            vec![p(&[3]), p(&[1]), p(&[0, 0, 1])],
        ];
        let cof = |a: &ZPoly, b: &ZPoly, c: &ZPoly, d: &ZPoly| a.mul(d).sub(&b.mul(c));
        let expected = m[0][0]
            .mul(&cof(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            .sub(&m[0][1].mul(&cof(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
            .add(&m[0][2].mul(&cof(&m[1][0], &m[1][1], &m[2][0], &m[2][1])));
        assert_eq!(det_bareiss(m).unwrap(), expected);
    }

    fn arb_poly() -> impl Strategy<Value = ZPoly> {
        prop::collection::vec(-5i64..6, 0..5).prop_map(|c| ZPoly::from_i64(&c))
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let (x, y) = (a.mul(&c), b.mul(&c));
            let g = x.gcd(&y);
            if !g.is_zero() {
                prop_assert!(x.div_exact(&g).is_ok());
                prop_assert!(y.div_exact(&g).is_ok());
                // the common factor survives up to content
                if !c.is_zero() {
                    prop_assert!(g.div_exact(&c.primitive()).is_ok());
                }
            }
        }
    }
}
