use num_complex::Complex64;

use super::rif::CayleyInner;
use crate::error::{Error, Result};
use crate::multipoly::CPoly;

/// A holomorphic function on the polydisk with nonnegative real part.
pub trait Herglotz: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[Complex64]) -> Complex64;

    /// Numerator and denominator when the function is rational; the phase
    /// transform then evaluates on the torus directly instead of taking
    /// radial limits.
    fn rational_parts(&self) -> Option<(&CPoly, &CPoly)> {
        None
    }
}

impl Herglotz for CayleyInner {
    fn dim(&self) -> usize {
        CayleyInner::dim(self)
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        CayleyInner::eval(self, z)
    }

    fn rational_parts(&self) -> Option<(&CPoly, &CPoly)> {
        Some((self.num(), self.den()))
    }
}

/// A rational function `num / den`, assumed Herglotz by its constructor's
/// caller (constants with nonnegative real part, convex mixtures).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalHerglotz {
    num: CPoly,
    den: CPoly,
}

impl RationalHerglotz {
    pub fn constant(dim: usize, c: Complex64) -> Result<Self> {
        if c.re < 0.0 {
            return Err(Error::NotHerglotz { re: c.re, im: c.im });
        }
        Ok(RationalHerglotz { num: CPoly::constant(dim, c), den: CPoly::constant(dim, Complex64::new(1.0, 0.0)) })
    }

    pub fn from_cayley(c: &CayleyInner) -> Self {
        RationalHerglotz { num: c.num().clone(), den: c.den().clone() }
    }

    /// The convex mixture `(1 - t) a + t b`, which stays Herglotz.
    pub fn mixture(a: &dyn Herglotz, b: &dyn Herglotz, t: f64) -> Option<Self> {
        let (an, ad) = a.rational_parts()?;
        let (bn, bd) = b.rational_parts()?;
        let s = |x: f64| Complex64::new(x, 0.0);
        let num = an.mul(bd).scale(s(1.0 - t)).add(&bn.mul(ad).scale(s(t)));
        Some(RationalHerglotz { num, den: ad.mul(bd) })
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }
}

impl Herglotz for RationalHerglotz {
    fn dim(&self) -> usize {
        self.num.dim()
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    fn rational_parts(&self) -> Option<(&CPoly, &CPoly)> {
        Some((&self.num, &self.den))
    }
}

/// A Herglotz function given only as a closure; its boundary values are
/// obtained by radial limits.
pub struct FnHerglotz<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[Complex64]) -> Complex64 + Send + Sync> FnHerglotz<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnHerglotz { dim, f }
    }
}

impl<F: Fn(&[Complex64]) -> Complex64 + Send + Sync> Herglotz for FnHerglotz<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        (self.f)(z)
    }
}
