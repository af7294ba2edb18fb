use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlphaMode, CurveSpec};
use crate::error::{Error, Result};

/// Dense polynomial in `y` over the rationals, lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly(vec![c]).trimmed()
    }

    pub fn monomial(c: BigRational, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = c;
        QPoly(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Order of vanishing at `y = 0`.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .trimmed()
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly(v).trimmed()
    }

    /// Quotient, failing unless the division is exact.
    pub fn div_exact(&self, d: &QPoly) -> Result<QPoly> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let mut rem = self.0.clone();
        if rem.len() < dd + 1 {
            return if self.is_zero() {
                Ok(QPoly::zero())
            } else {
                Err(Error::InexactDivision("divisor degree exceeds dividend".into()))
            };
        }
        let lead = &d.0[dd];
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (i, dc) in d.0.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision("nonzero remainder".into()));
        }
        Ok(QPoly(quot).trimmed())
    }
}

/// Determinant by fraction-free (Bareiss) elimination over `Q[y]`.
pub fn bareiss_det(mut m: Vec<Vec<QPoly>>) -> Result<QPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(QPoly::constant(BigRational::one()));
    }
    let mut sign_neg = false;
    let mut prev = QPoly::constant(BigRational::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return Ok(QPoly::zero()),
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
    let det = m[n - 1][n - 1].clone();
    Ok(if sign_neg { det.neg() } else { det })
}

/// Sylvester matrix of two polynomials in `x` with coefficients in `Q[y]`,
/// coefficient lists lowest degree first.
pub fn sylvester(f: &[QPoly], g: &[QPoly]) -> Vec<Vec<QPoly>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![QPoly::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![QPoly::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

pub fn resultant_x(f: &[QPoly], g: &[QPoly]) -> Result<QPoly> {
    bareiss_det(sylvester(f, g))
}

fn rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Invalid(format!("non-finite parameter {v}")))
}

/// `x^p - psi(y, alpha)` as coefficients in `x` over `Q[y]`.
pub fn component_exact(p: usize, alpha: f64) -> Result<Vec<QPoly>> {
    let a = rational(alpha)?;
    let psi = QPoly::monomial(BigRational::one(), 1).sub(&QPoly::monomial(a, p));
    let mut coeffs = vec![QPoly::zero(); p + 1];
    coeffs[0] = psi.neg();
    coeffs[p] = QPoly::constant(BigRational::one());
    Ok(coeffs)
}

/// `ord_{y=0} Res_x(f_i, f_j)` for zero-based component indices.
pub fn intersection_multiplicity_origin(spec: &CurveSpec, i: usize, j: usize) -> Result<usize> {
    spec.validate()?;
    if spec.mode != AlphaMode::RealDescending {
        return Err(Error::Invalid("exact resultant needs rational parameters".into()));
    }
    if i == j || i >= spec.q || j >= spec.q {
        return Err(Error::Invalid(format!("bad component pair ({i}, {j})")));
    }
    if spec.p > 16 {
        return Err(Error::ExactArithmeticOverflow(format!(
            "Sylvester matrix of size {} exceeds the exact-arithmetic budget",
            2 * spec.p
        )));
    }
    let fi = component_exact(spec.p, spec.alphas[i])?;
    let fj = component_exact(spec.p, spec.alphas[j])?;
    let res = resultant_x(&fi, &fj)?;
    res.order_at_zero()
        .ok_or_else(|| Error::Invalid("components share a factor (zero resultant)".into()))
}

/// Integer polynomial helpers used by the torus identity.
pub(crate) fn int_poly_div_monic(num: &[BigInt], den: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let dd = den.len().checked_sub(1)?;
    if !den[dd].is_one() && !(-&den[dd]).is_one() {
        return None;
    }
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return Some((vec![], rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] * &den[dd];
        if !c.is_zero() {
            for (i, dc) in den.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
        }
        quot[k] = c;
    }
    rem.truncate(dd);
    Some((quot, rem))
}

pub(crate) fn is_all_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_traits::Signed;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![
            vec![QPoly::constant(r(2)), QPoly::constant(r(1)), QPoly::constant(r(3))],
            vec![QPoly::constant(r(0)), QPoly::constant(r(-1)), QPoly::constant(r(4))],
            vec![QPoly::constant(r(5)), QPoly::constant(r(2)), QPoly::constant(r(0))],
        ];
        // 2(0-8) - 1(0-20) + 3(0+5) = 19
        assert_eq!(bareiss_det(m).unwrap(), QPoly::constant(r(19)));
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res_x(x - y, x + y) = -2y up to the Sylvester sign convention
        let f = vec![QPoly::monomial(r(-1), 1), QPoly::constant(r(1))];
        let g = vec![QPoly::monomial(r(1), 1), QPoly::constant(r(1))];
        let res = resultant_x(&f, &g).unwrap();
        assert_eq!(res.order_at_zero(), Some(1));
        assert_eq!(res.coeffs()[1].abs(), r(2));
    }

    #[test]
    fn multiplicity_examples() {
        let s = CurveSpec::new(3, 2, vec![2.0, 1.0]).unwrap();
        assert_eq!(intersection_multiplicity_origin(&s, 0, 1).unwrap(), 9);
        let s = CurveSpec::new(2, 2, vec![2.0, 1.0]).unwrap();
        assert_eq!(intersection_multiplicity_origin(&s, 0, 1).unwrap(), 4);
        let s = CurveSpec::new(4, 3, vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(intersection_multiplicity_origin(&s, 0, 2).unwrap(), 16);
        assert!(intersection_multiplicity_origin(&s, 1, 1).is_err());
    }

    /// Floating-point oracle: slope of log|Res| against log y for small y,
    /// with the resultant taken as the product of f_j over the roots of f_i.
    fn numeric_order(p: usize, ai: f64, aj: f64) -> f64 {
        let res = |y: f64| -> f64 {
            let pi = y - ai * y.powi(p as i32);
            let pj = y - aj * y.powi(p as i32);
            let mut acc = 0.0;
            for k in 0..p {
                let root = Complex64::from_polar(pi.abs().powf(1.0 / p as f64), std::f64::consts::TAU * k as f64 / p as f64);
                acc += (root.powu(p as u32) - pi + (pi - pj)).norm().ln();
            }
            acc
        };
        let (y1, y2) = (1e-2f64, 1e-3f64);
        (res(y1) - res(y2)) / (y1.ln() - y2.ln())
    }

    #[test]
    fn exact_order_agrees_with_numeric_slope() {
        for (p, q) in [(2usize, 2usize), (3, 2), (4, 2), (4, 3), (5, 2)] {
            let spec = CurveSpec::with_default_alphas(p, q).unwrap();
            for i in 0..q {
                for j in i + 1..q {
                    let exact = intersection_multiplicity_origin(&spec, i, j).unwrap();
                    let slope = numeric_order(p, spec.alphas[i], spec.alphas[j]);
                    assert!((slope - exact as f64).abs() < 0.05, "{p},{q}: {slope} vs {exact}");
                }
            }
        }
    }
}
