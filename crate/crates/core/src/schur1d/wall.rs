use num_complex::Complex64;

use super::chain::SchurChain;
use crate::error::{Error, Result};
use crate::multipoly::{series_divide, CPoly, IndexBox, MultiIndex};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The Wall polynomials `A_n, B_n, A*_n, B*_n` of a chain of length `n+1`,
/// with `omega_n = prod_(j=0..n) (1 - |gamma_j|^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WallQuadruple {
    pub a: CPoly,
    pub b: CPoly,
    pub a_star: CPoly,
    pub b_star: CPoly,
    pub omega: f64,
    degree: usize,
}

impl WallQuadruple {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `B*_n B_n - A*_n A_n - omega_n z^n`, which vanishes identically.
    pub fn identity_defect(&self) -> f64 {
        let lhs = self.b_star.mul(&self.b).sub(&self.a_star.mul(&self.a));
        let rhs = CPoly::monomial(MultiIndex::from([self.degree]), Complex64::new(self.omega, 0.0));
        lhs.max_coeff_diff(&rhs)
    }
}

pub fn wall_polynomials(chain: &SchurChain) -> WallQuadruple {
    wall_from_parameters(chain.parameters())
}

/// The Wall recursion on arbitrary parameters, no modulus checks.
pub fn wall_from_parameters(gammas: &[Complex64]) -> WallQuadruple {
    let (a, b, a_star, b_star) = wall_dense(gammas);
    let omega = gammas.iter().map(|g| 1.0 - g.norm_sqr()).product();
    WallQuadruple {
        a: univariate(&a),
        b: univariate(&b),
        a_star: univariate(&a_star),
        b_star: univariate(&b_star),
        omega,
        degree: gammas.len() - 1,
    }
}

type Dense = Vec<Complex64>;

/// Coefficient vectors of length `n+1` of `(A_n, B_n, A*_n, B*_n)`.
pub(crate) fn wall_dense(gammas: &[Complex64]) -> (Dense, Dense, Dense, Dense) {
    assert!(!gammas.is_empty(), "chain must be nonempty");
    let n = gammas.len() - 1;
    let zero = Complex64::default();
    let mut a = vec![zero; n + 1];
    let mut b = vec![zero; n + 1];
    let mut a_s = vec![zero; n + 1];
    let mut b_s = vec![zero; n + 1];
    a[0] = gammas[0];
    a_s[0] = gammas[0].conj();
    b[0] = ONE;
    b_s[0] = ONE;
    for (k, &g) in gammas.iter().enumerate().skip(1) {
        // Degree k-1 polynomials live in slots 0..k; walk down so the shift
        // by z reads old values.
        for j in (0..=k).rev() {
            let zb_s = if j > 0 { b_s[j - 1] } else { zero };
            let za_s = if j > 0 { a_s[j - 1] } else { zero };
            let (na, nb) = (a[j] + g * zb_s, b[j] + g * za_s);
            let (na_s, nb_s) = (za_s + g.conj() * b[j], zb_s + g.conj() * a[j]);
            a[j] = na;
            b[j] = nb;
            a_s[j] = na_s;
            b_s[j] = nb_s;
        }
    }
    (a, b, a_s, b_s)
}

fn univariate(c: &[Complex64]) -> CPoly {
    CPoly::from_terms(1, c.iter().enumerate().map(|(j, v)| (MultiIndex::from([j]), *v))).unwrap()
}

/// Anything that can be evaluated as a Schur function of one variable.
pub trait SchurFunction {
    fn eval(&self, z: Complex64) -> Complex64;
}

impl<F: Fn(Complex64) -> Complex64> SchurFunction for F {
    fn eval(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}

/// A rational function `num/den` of one variable with `den(0) != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSchur {
    num: CPoly,
    den: CPoly,
}

impl RationalSchur {
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        for p in [&num, &den] {
            if p.dim() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, got: p.dim() });
            }
        }
        if den.coeff(&MultiIndex::from([0])) == Complex64::default() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(RationalSchur { num, den })
    }

    pub fn constant(c: Complex64) -> Self {
        RationalSchur { num: CPoly::constant(1, c), den: CPoly::constant(1, ONE) }
    }

    /// From coefficient lists `num[j] z^j` and `den[j] z^j`.
    pub fn from_coeffs(num: &[Complex64], den: &[Complex64]) -> Result<Self> {
        RationalSchur::new(univariate(num), univariate(den))
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(&[z]) / self.den.eval(&[z])
    }

    /// Taylor coefficients `c_0, ..., c_order` at the origin.
    pub fn taylor(&self, order: usize) -> Vec<Complex64> {
        let bx = IndexBox::new([order]);
        series_divide(&self.num.to_series(&bx), &self.den.to_series(&bx), &bx)
            .expect("denominator has a nonzero constant term")
            .coeffs()
            .to_vec()
    }
}

impl SchurFunction for RationalSchur {
    fn eval(&self, z: Complex64) -> Complex64 {
        RationalSchur::eval(self, z)
    }
}

/// `A_k / B_k` for a chain ending in a unimodular parameter.
pub fn blaschke_from_chain(chain: &SchurChain) -> Result<RationalSchur> {
    if !chain.terminated() {
        return Err(Error::NotTerminated);
    }
    let q = wall_polynomials(chain);
    RationalSchur::new(q.a, q.b)
}

/// `z -> (A_n + z B*_n h) / (B_n + z A*_n h)`.
pub struct Recombined<H> {
    quad: WallQuadruple,
    tail: H,
}

pub fn schur_recombine<H: SchurFunction>(quad: WallQuadruple, tail: H) -> Recombined<H> {
    Recombined { quad, tail }
}

impl<H: SchurFunction> Recombined<H> {
    pub fn quadruple(&self) -> &WallQuadruple {
        &self.quad
    }

    pub fn tail(&self) -> &H {
        &self.tail
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let h = self.tail.eval(z);
        let q = &self.quad;
        let den = q.b.eval(&[z]) + z * q.a_star.eval(&[z]) * h;
        assert!(den != Complex64::default(), "recombination denominator vanishes at {z}");
        (q.a.eval(&[z]) + z * q.b_star.eval(&[z]) * h) / den
    }
}

impl<H: SchurFunction> SchurFunction for Recombined<H> {
    fn eval(&self, z: Complex64) -> Complex64 {
        Recombined::eval(self, z)
    }
}

impl Recombined<RationalSchur> {
    /// The recombined function as a single fraction, clearing the tail's
    /// denominator.
    pub fn to_rational(&self) -> RationalSchur {
        let q = &self.quad;
        let z = CPoly::variable(1, 0);
        let (hn, hd) = (&self.tail.num, &self.tail.den);
        let num = q.a.mul(hd).add(&z.mul(&q.b_star).mul(hn));
        let den = q.b.mul(hd).add(&z.mul(&q.a_star).mul(hn));
        RationalSchur::new(num, den).expect("B_n(0) h_den(0) is nonzero")
    }
}
