use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cpoly::CPoly;
use super::index::{IndexBox, MultiIndex};
use crate::error::{Error, Result};

/// A real trigonometric polynomial on `T^d`,
///
/// `P(xi) = sum_{alpha in Gamma_n} r_alpha (conj(xi)^alpha + xi^alpha)/2
///                               + s_alpha (conj(xi)^alpha - xi^alpha)/(2i)`,
///
/// which is `Re sum (r_alpha + i s_alpha) xi^alpha`. The sine coefficient at
/// `alpha = 0` multiplies zero and is kept only for layout.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    bx: IndexBox,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(bx: IndexBox, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        for v in [&cos, &sin] {
            if v.len() != bx.len() {
                return Err(Error::DimensionMismatch { expected: bx.len(), got: v.len() });
            }
        }
        Ok(TrigPoly { bx, cos, sin })
    }

    pub fn zero(bx: IndexBox) -> Self {
        let n = bx.len();
        TrigPoly { bx, cos: vec![0.0; n], sin: vec![0.0; n] }
    }

    /// Sets `(r_alpha, s_alpha)`; panics outside the box.
    pub fn with_term(mut self, alpha: impl Into<MultiIndex>, r: f64, s: f64) -> Self {
        let pos = self.bx.offset(&alpha.into()).expect("index inside the box");
        self.cos[pos] = r;
        self.sin[pos] = s;
        self
    }

    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub fn index_box(&self) -> &IndexBox {
        &self.bx
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// `(r_alpha, s_alpha)`, zero outside the box.
    pub fn coeff(&self, alpha: &MultiIndex) -> (f64, f64) {
        self.bx.offset(alpha).map(|p| (self.cos[p], self.sin[p])).unwrap_or((0.0, 0.0))
    }

    /// The holomorphic polynomial `h = sum (r_alpha + i s_alpha) z^alpha`,
    /// so that `P = Re h` on the torus.
    pub fn analytic_part(&self) -> CPoly {
        let terms = self.bx.iter().zip(self.cos.iter().zip(&self.sin)).map(|(a, (r, s))| {
            let s = if a.is_zero() { 0.0 } else { *s };
            (a, Complex64::new(*r, s))
        });
        CPoly::from_terms(self.dim(), terms).expect("box dimension is consistent")
    }

    pub fn evaluate(&self, xi: &[Complex64]) -> Result<f64> {
        if xi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: xi.len() });
        }
        Ok(self.eval(xi))
    }

    /// Unchecked evaluation; `xi` is expected on the torus but any point is
    /// accepted and the analytic-part formula applied.
    pub fn eval(&self, xi: &[Complex64]) -> f64 {
        let mut powers: Vec<Vec<Complex64>> = Vec::with_capacity(self.dim());
        for (j, &n) in self.bx.bound().entries().iter().enumerate() {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..=n {
                row.push(p);
                p *= xi[j];
            }
            powers.push(row);
        }
        let mut acc = 0.0;
        for (pos, alpha) in self.bx.iter().enumerate() {
            let mono: Complex64 = alpha.entries().iter().enumerate().map(|(j, &a)| powers[j][a]).product();
            acc += self.cos[pos] * mono.re - self.sin[pos] * mono.im;
        }
        acc
    }

    /// Evaluation at `xi_j = exp(i theta_j)`.
    pub fn eval_angles(&self, theta: &[f64]) -> f64 {
        let xi: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        self.eval(&xi)
    }
}

#[derive(Serialize, Deserialize)]
struct TrigJson {
    dim: usize,
    #[serde(rename = "box")]
    bx: Vec<usize>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrigJson {
            dim: self.dim(),
            bx: self.bx.bound().entries().to_vec(),
            cos: self.cos.clone(),
            sin: self.sin.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TrigJson::deserialize(d)?;
        if raw.bx.len() != raw.dim || raw.dim == 0 {
            return Err(serde::de::Error::custom("box length must equal dim >= 1"));
        }
        TrigPoly::new(IndexBox::new(raw.bx), raw.cos, raw.sin).map_err(serde::de::Error::custom)
    }
}
