pub mod exact;
pub mod torus;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{FiberFamily, UniPoly};

pub use exact::intersection_multiplicity_origin;
pub use torus::{torus_form_identity, TorusIdentity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaMode {
    RealDescending,
    RootsOfUnity,
}

/// The curve `prod_j (x^p - psi(y, alpha_j)) = 0` with `psi(y, a) = y - a y^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: usize,
    pub q: usize,
    /// Real parameters in real-descending mode; ignored (may be empty) in
    /// roots-of-unity mode, where `alpha_j = zeta^(j-1)`.
    #[serde(default)]
    pub alphas: Vec<f64>,
    pub mode: AlphaMode,
}

impl CurveSpec {
    pub fn new(p: usize, q: usize, alphas: Vec<f64>) -> Result<Self> {
        let spec = CurveSpec {
            p,
            q,
            alphas,
            mode: AlphaMode::RealDescending,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn roots_of_unity(p: usize, q: usize) -> Result<Self> {
        let spec = CurveSpec {
            p,
            q,
            alphas: Vec::new(),
            mode: AlphaMode::RootsOfUnity,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default parameters `(q+1, q, ..., 2)`.
    pub fn with_default_alphas(p: usize, q: usize) -> Result<Self> {
        Self::new(p, q, default_alphas(q))
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 || self.q < 2 {
            return Err(Error::Invalid(format!(
                "need p, q >= 2 (got p={}, q={})",
                self.p, self.q
            )));
        }
        if self.p * self.q > 64 {
            return Err(Error::Invalid(format!(
                "degree pq = {} is beyond the supported range",
                self.p * self.q
            )));
        }
        if self.mode == AlphaMode::RootsOfUnity {
            return Ok(());
        }
        if self.alphas.len() != self.q {
            return Err(Error::Invalid(format!(
                "expected {} alphas, got {}",
                self.q,
                self.alphas.len()
            )));
        }
        if self.alphas.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::Invalid("alphas must be finite and positive".into()));
        }
        if self.alphas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid("alphas must be strictly descending".into()));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.p * self.q
    }

    /// True when `p <= q`, outside the range where the curve is a torus curve
    /// of maximal contact in the usual sense. Computation still proceeds.
    pub fn p_not_above_q(&self) -> bool {
        self.p <= self.q
    }

    pub fn alpha_values(&self) -> Vec<Complex64> {
        match self.mode {
            AlphaMode::RealDescending => {
                self.alphas.iter().map(|&a| Complex64::new(a, 0.0)).collect()
            }
            AlphaMode::RootsOfUnity => (0..self.q)
                .map(|j| unit_root(j, self.q))
                .collect(),
        }
    }

    /// `gamma_j` with `gamma_j^(p-1) = 1/alpha_j` (principal branch).
    pub fn gammas(&self) -> Vec<Complex64> {
        let e = 1.0 / (self.p as f64 - 1.0);
        self.alpha_values()
            .into_iter()
            .map(|a| {
                let g = a.inv().powf(e);
                snap_real(g)
            })
            .collect()
    }

    pub fn family(&self) -> CurveFamily {
        CurveFamily {
            p: self.p,
            alphas: self.alpha_values(),
        }
    }
}

pub fn default_alphas(q: usize) -> Vec<f64> {
    (0..q).map(|j| (q + 1 - j) as f64).collect()
}

/// `exp(2 pi i k / n)`, exact on the real axis.
pub fn unit_root(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if k == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * k == n {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
    }
}

fn snap_real(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1e-15 * z.norm() {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

pub fn psi_eval(y: Complex64, alpha: Complex64, p: usize) -> Complex64 {
    y - alpha * y.powu(p as u32)
}

/// Monic degree-`pq` fiber `prod_j (x^p - psi(y0, alpha_j))`.
pub fn fiber_polynomial(spec: &CurveSpec, y0: Complex64) -> UniPoly {
    spec.family().fiber(y0)
}

/// Root-tracking family with Newton ratios evaluated in product form.
#[derive(Clone, Debug)]
pub struct CurveFamily {
    p: usize,
    alphas: Vec<Complex64>,
}

impl CurveFamily {
    pub fn psis(&self, y: Complex64) -> Vec<Complex64> {
        self.alphas.iter().map(|&a| psi_eval(y, a, self.p)).collect()
    }
}

impl FiberFamily for CurveFamily {
    fn degree(&self) -> usize {
        self.p * self.alphas.len()
    }

    fn fiber(&self, y: Complex64) -> UniPoly {
        let zero = Complex64::new(0.0, 0.0);
        let mut acc: Option<UniPoly> = None;
        for psi in self.psis(y) {
            let mut c = vec![zero; self.p + 1];
            c[0] = -psi;
            c[self.p] = Complex64::new(1.0, 0.0);
            let factor = UniPoly::new(c).expect("monic factor");
            acc = Some(match acc {
                None => factor,
                Some(a) => a.mul(&factor),
            });
        }
        acc.expect("q >= 1")
    }

    fn newton_ratios(&self, y: Complex64, xs: &[Complex64], out: &mut [Complex64]) {
        let psis = self.psis(y);
        let p = self.p as f64;
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            let xpm1 = x.powu(self.p as u32 - 1);
            let xp = xpm1 * x;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut exact = false;
            for psi in &psis {
                let f = xp - psi;
                if f.norm() == 0.0 {
                    exact = true;
                    break;
                }
                sum += xpm1 * p / f;
            }
            *o = if exact || sum.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                sum.inv()
            };
        }
    }

    fn residual(&self, y: Complex64, x: Complex64) -> f64 {
        let xp = x.powu(self.p as u32);
        self.psis(y)
            .into_iter()
            .map(|psi| {
                let s = xp.norm() + psi.norm();
                if s == 0.0 {
                    0.0
                } else {
                    (xp - psi).norm() / s
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularValue {
    #[serde(with = "crate::numeric::path::complex_pair")]
    pub y: Complex64,
    /// Zero-based component index for flexes, `None` for the origin.
    pub component: Option<usize>,
    /// Power of `xi` for flexes.
    pub k: usize,
}

impl SingularValue {
    pub fn is_origin(&self) -> bool {
        self.component.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularValues {
    pub values: Vec<SingularValue>,
    pub non_real_geometry: bool,
}

impl SingularValues {
    pub fn points(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v.y).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.y.norm()).fold(0.0, f64::max)
    }
}

/// The origin and the flexes `gamma_j xi^k`, `k = 0..p-2`.
pub fn singular_values(spec: &CurveSpec) -> Result<SingularValues> {
    spec.validate()?;
    let mut values = vec![SingularValue {
        y: Complex64::new(0.0, 0.0),
        component: None,
        k: 0,
    }];
    for (j, g) in spec.gammas().into_iter().enumerate() {
        for k in 0..spec.p - 1 {
            values.push(SingularValue {
                y: snap_real(g * unit_root(k, spec.p - 1)),
                component: Some(j),
                k,
            });
        }
    }
    let scale = values.iter().map(|v| v.y.norm()).fold(0.0, f64::max);
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            if (values[a].y - values[b].y).norm() < 1e-8 * scale {
                return Err(Error::DegenerateSpec(format!(
                    "singular values {} and {} coincide",
                    values[a].y, values[b].y
                )));
            }
        }
    }
    Ok(SingularValues {
        values,
        non_real_geometry: spec.mode == AlphaMode::RootsOfUnity,
    })
}

/// Base point `gamma_0 = gamma_1 / 2` and the satellite order there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseConfiguration {
    pub gamma0: f64,
    /// `psi(gamma_0, alpha_j)`, certified strictly increasing and positive.
    pub psi: Vec<f64>,
}

pub fn base_configuration(spec: &CurveSpec) -> Result<BaseConfiguration> {
    spec.validate()?;
    if spec.mode != AlphaMode::RealDescending {
        return Err(Error::Invalid(
            "base configuration needs real-descending parameters".into(),
        ));
    }
    let gamma1 = spec.gammas()[0].re;
    let gamma0 = gamma1 / 2.0;
    let psi: Vec<f64> = spec
        .alphas
        .iter()
        .map(|&a| gamma0 - a * gamma0.powi(spec.p as i32))
        .collect();
    if psi.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::OrderViolation(format!("non-positive value in {psi:?}")));
    }
    if psi.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::OrderViolation(format!("not increasing: {psi:?}")));
    }
    Ok(BaseConfiguration { gamma0, psi })
}

impl BaseConfiguration {
    /// Fiber roots over `gamma_0` in flat order `i*q + (j-1)`: planet `i` is
    /// the lift angle `eta^i`, satellite `j` the component.
    pub fn roots(&self, p: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(p * self.psi.len());
        for i in 0..p {
            let eta = unit_root(i, p);
            for &v in &self.psi {
                out.push(eta * v.powf(1.0 / p as f64));
            }
        }
        out
    }
}
