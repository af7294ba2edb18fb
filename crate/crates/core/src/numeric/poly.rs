use num_complex::Complex64;
use crate::error::{Error, Result};

/// Dense univariate polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Invalid("polynomial degree must be at least 1".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Invalid("non-finite polynomial coefficient".into()));
        }
        if coeffs.last().is_none_or(|c| c.norm() == 0.0) {
            return Err(Error::Invalid("leading coefficient vanishes".into()));
        }
        Ok(UniPoly { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            coeffs = mul_linear(&coeffs, r);
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            df = df * x + f;
            f = f * x + c;
        }
        (f, df)
    }

    /// `sum |a_i| |x|^i`, the natural scale for the backward error at `x`.
    pub fn scale_at(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Relative backward error `|p(x)| / sum |a_i| |x|^i`.
    pub fn residual(&self, x: Complex64) -> f64 {
        let s = self.scale_at(x);
        if s == 0.0 {
            0.0
        } else {
            self.eval(x).norm() / s
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly { coeffs: out }
    }

    /// Cauchy bound `1 + max |a_i / a_d|` on the root moduli.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().norm();
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max)
    }
}

fn mul_linear(coeffs: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

const MAX_ABERTH_ITERATIONS: usize = 2000;

/// All roots of `poly` by Aberth-Ehrlich simultaneous iteration followed by a
/// Newton polish. Multiple roots are returned with their multiplicity, as a
/// cluster of nearby approximations.
pub fn solve_fiber_roots(poly: &UniPoly, tol: f64) -> Result<Vec<Complex64>> {
    if !(tol > 0.0) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let d = poly.degree();
    let radius = poly.cauchy_bound();
    let mut roots: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ABERTH_ITERATIONS {
        iterations += 1;
        let mut max_step = 0.0f64;
        for k in 0..d {
            let (f, df) = poly.eval_with_derivative(roots[k]);
            if f.norm() == 0.0 {
                continue;
            }
            let newton = f / df;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = roots[k] - roots[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() == 0.0 || !newton.re.is_finite() {
                // derivative vanished: nudge off the critical point
                Complex64::new(1e-8 * radius, 1e-8 * radius)
            } else {
                newton / denom
            };
            roots[k] -= step;
            max_step = max_step.max(step.norm() / roots[k].norm().max(1.0));
        }
        let all_small = roots.iter().all(|&r| poly.residual(r) < tol);
        if all_small && max_step < 1e-3 {
            converged = true;
            break;
        }
        if max_step < 1e-15 {
            converged = roots.iter().all(|&r| poly.residual(r) < tol);
            break;
        }
    }

    for r in roots.iter_mut() {
        polish(poly, r);
    }

    let residuals: Vec<f64> = roots.iter().map(|&r| poly.residual(r)).collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    if !converged && max_residual >= tol {
        return Err(Error::NumericFailure {
            iterations,
            max_residual,
            residuals,
        });
    }
    if max_residual >= tol {
        return Err(Error::NumericFailure {
            iterations,
            max_residual,
            residuals,
        });
    }
    Ok(roots)
}

/// Newton steps that are only kept while they reduce the residual.
fn polish(poly: &UniPoly, root: &mut Complex64) {
    let mut best = poly.residual(*root);
    for _ in 0..8 {
        let (f, df) = poly.eval_with_derivative(*root);
        if df.norm() == 0.0 || f.norm() == 0.0 {
            return;
        }
        let candidate = *root - f / df;
        let r = poly.residual(candidate);
        if r < best {
            best = r;
            *root = candidate;
        } else {
            return;
        }
    }
}
