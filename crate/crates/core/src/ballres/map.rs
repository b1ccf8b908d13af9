use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::series::BallPowerSeries;
use crate::error::{Error, Result};
use crate::multipoly::CPoly;
use crate::sampling::{random_ball_point, random_sphere_point, rng};

/// A degree-one rational map of `C^d`,
/// `F(z) = (a^(0) + a^(1) z_1 + ... + a^(d) z_d) / (b_0 + b_1 z_1 + ... + b_d z_d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallMap {
    /// Rows `a^(0), ..., a^(d)`, each in `C^d`.
    a: Vec<Vec<Complex64>>,
    b: Vec<Complex64>,
}

impl BallMap {
    pub fn new(a: Vec<Vec<Complex64>>, b: Vec<Complex64>) -> Result<Self> {
        let d =
            b.len().checked_sub(1).filter(|&d| d >= 1).ok_or(Error::DimensionMismatch { expected: 2, got: b.len() })?;
        if a.len() != d + 1 {
            return Err(Error::DimensionMismatch { expected: d + 1, got: a.len() });
        }
        if let Some(row) = a.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        Ok(BallMap { a, b })
    }

    pub fn dim(&self) -> usize {
        self.b.len() - 1
    }

    pub fn numerator_rows(&self) -> &[Vec<Complex64>] {
        &self.a
    }

    pub fn denominator_coeffs(&self) -> &[Complex64] {
        &self.b
    }

    /// The same map with `b_0 = 1`.
    pub fn normalized(&self) -> Result<BallMap> {
        let b0 = self.b[0];
        if b0 == Complex64::default() {
            return Err(Error::ZeroConstantTerm);
        }
        let a = self.a.iter().map(|r| r.iter().map(|x| x / b0).collect()).collect();
        Ok(BallMap { a, b: self.b.iter().map(|x| x / b0).collect() })
    }

    /// `F(r z)`, again of degree one.
    pub fn precompose_scaling(&self, r: f64) -> BallMap {
        let a = self
            .a
            .iter()
            .enumerate()
            .map(|(k, row)| row.iter().map(|x| if k == 0 { *x } else { x * r }).collect())
            .collect();
        let b = self.b.iter().enumerate().map(|(k, x)| if k == 0 { *x } else { x * r }).collect();
        BallMap { a, b }
    }

    pub fn denominator(&self, z: &[Complex64]) -> Complex64 {
        self.b[0] + self.b[1..].iter().zip(z).map(|(b, z)| b * z).sum::<Complex64>()
    }

    /// `b(z) F(z)`, the numerator vector.
    pub fn numerator(&self, z: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|j| self.a[0][j] + (0..self.dim()).map(|k| self.a[k + 1][j] * z[k]).sum::<Complex64>())
            .collect()
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.dim(), "dimension mismatch");
        let b = self.denominator(z);
        self.numerator(z).into_iter().map(|x| x / b).collect()
    }

    /// `min |b|` over the closed ball, `|b_0| - ||(b_1, ..., b_d)||`; a
    /// nonpositive value means `b` vanishes somewhere on the closed ball.
    pub fn b_min(&self) -> f64 {
        self.b[0].norm() - self.b[1..].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `min |b|` over `samples` random sphere points, an upper estimate of
    /// [`BallMap::b_min`].
    pub fn b_min_sampled(&self, samples: usize, seed: u64) -> f64 {
        let mut r = rng(seed, 0xb1);
        (0..samples)
            .map(|_| self.denominator(&random_sphere_point(&mut r, self.dim())).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `||b||^2` in `L^2` of the normalized sphere measure: `|b_0|^2 + sum |b_k|^2 / d`.
    pub fn b_l2_sqr(&self) -> f64 {
        self.b[0].norm_sqr() + self.b[1..].iter().map(|x| x.norm_sqr()).sum::<f64>() / self.dim() as f64
    }

    /// `max |sum_j |b F_j|^2 - |b|^2|` over random sphere points; zero for an
    /// automorphism.
    pub fn boundary_identity_defect(&self, samples: usize, seed: u64) -> f64 {
        let mut r = rng(seed, 0xb2);
        (0..samples)
            .map(|_| {
                let xi = random_sphere_point(&mut r, self.dim());
                let lhs: f64 = self.numerator(&xi).iter().map(|x| x.norm_sqr()).sum();
                (lhs - self.denominator(&xi).norm_sqr()).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Checks that `b` has no zero on the closed ball and that `F` maps
    /// random interior points into the closed ball (up to `1e-9`).
    pub fn certify(&self, samples: usize, seed: u64) -> Result<()> {
        let min = self.b_min();
        if min <= 0.0 {
            return Err(Error::DenominatorVanishes { min });
        }
        let mut r = rng(seed, 0xb3);
        for _ in 0..samples {
            let z = random_ball_point(&mut r, self.dim(), 1.0);
            let norm = self.eval(&z).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1.0 + 1e-9 {
                return Err(Error::OutsideBall { norm });
            }
        }
        Ok(())
    }

    /// Taylor series at the origin to total degree `degree`, from
    /// `1/b = (1/b_0) sum_m (-(b - b_0)/b_0)^m`.
    pub fn series(&self, degree: usize) -> Result<BallPowerSeries> {
        let d = self.dim();
        let b0 = self.b[0];
        if b0 == Complex64::default() {
            return Err(Error::ZeroConstantTerm);
        }
        let lin = |c: &[Complex64], k0: Complex64| {
            let terms = std::iter::once((crate::multipoly::MultiIndex::zeros(d), k0))
                .chain(c.iter().enumerate().map(|(k, &x)| (crate::multipoly::MultiIndex::axis(d, k, 1), x)));
            CPoly::from_terms(d, terms).expect("consistent dimension")
        };
        let ell = lin(&self.b[1..].iter().map(|x| -x / b0).collect::<Vec<_>>(), Complex64::default());
        let mut inv = CPoly::constant(d, Complex64::new(1.0, 0.0) / b0);
        let mut power = CPoly::constant(d, Complex64::new(1.0, 0.0) / b0);
        for _ in 0..degree {
            power = power.mul_truncated_total(&ell, degree);
            inv = inv.add(&power);
        }
        let comps = (0..d)
            .map(|j| {
                let row: Vec<Complex64> = (0..d).map(|k| self.a[k + 1][j]).collect();
                lin(&row, self.a[0][j]).mul_truncated_total(&inv, degree)
            })
            .collect();
        BallPowerSeries::new(comps, degree)
    }

    /// Bound on the sphere `L^2` norm of the part of the series above total
    /// degree `degree`. With `ell = -(b - b_0)/b_0` and `r = ||b'||/|b_0| < 1`,
    /// the degree-`m` part of `F_j` is `(a_0j ell^m + A_j ell^(m-1)) / b_0`,
    /// `|A_j| <= ||a_j'||` on the sphere and `||ell^m||^2 = r^(2m) / C(d-1+m, m)`
    /// by unitary invariance; parts of different degree are orthogonal.
    pub fn tail_bound(&self, degree: usize) -> f64 {
        let d = self.dim();
        let b0 = self.b[0].norm();
        let r = self.b[1..].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() / b0;
        if r >= 1.0 {
            return f64::INFINITY;
        }
        // ||ell^m|| for m = 0, 1, ..., via C(d-1+m, m) = C(d-2+m, m-1) (d-1+m)/m.
        let ell_norm = |m: usize| -> f64 {
            let mut binom = 1.0;
            for i in 1..=m {
                binom *= (d - 1 + i) as f64 / i as f64;
            }
            r.powi(m as i32) / binom.sqrt()
        };
        let mut total = 0.0;
        for j in 0..d {
            let a0 = self.a[0][j].norm();
            let a1 = (1..=d).map(|k| self.a[k][j].norm_sqr()).sum::<f64>().sqrt();
            let mut m = degree + 1;
            loop {
                let t = (a0 * ell_norm(m) + a1 * ell_norm(m - 1)) / b0;
                total += t * t;
                if t < 1e-20 || m > degree + 100_000 {
                    break;
                }
                m += 1;
            }
        }
        total.sqrt()
    }
}

/// The involutive automorphism exchanging `0` and `a`,
/// `phi_a(z) = (a - s z - <z, a> a/(1 + s)) / (1 - <z, a>)` with
/// `s = sqrt(1 - |a|^2)`, so `b_0 = 1`.
pub fn ball_automorphism(a: &[Complex64]) -> Result<BallMap> {
    let d = a.len();
    let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm >= 1.0 {
        return Err(Error::OutsideBall { norm });
    }
    let s = (1.0 - norm * norm).sqrt();
    let mut rows = vec![a.to_vec()];
    for k in 0..d {
        rows.push((0..d).map(|j| -a[k].conj() * a[j] / (1.0 + s) - if j == k { s } else { 0.0 }).collect());
    }
    let mut b = vec![Complex64::new(1.0, 0.0)];
    b.extend(a.iter().map(|x| -x.conj()));
    BallMap::new(rows, b)
}

/// A random automorphism with `|a|` uniform in `[0, max_norm)` direction-wise.
pub fn random_automorphism<R: Rng>(rng: &mut R, d: usize, max_norm: f64) -> BallMap {
    ball_automorphism(&random_ball_point(rng, d, max_norm)).expect("point inside the ball")
}

#[derive(Serialize, Deserialize)]
struct BallJson {
    #[serde(rename = "A")]
    a: Vec<Vec<[f64; 2]>>,
    b: Vec<[f64; 2]>,
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Serialize for BallMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BallJson {
            a: self.a.iter().map(|r| r.iter().map(pair).collect()).collect(),
            b: self.b.iter().map(pair).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BallJson::deserialize(d)?;
        let c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        BallMap::new(j.a.iter().map(|r| r.iter().map(c).collect()).collect(), j.b.iter().map(c).collect())
            .map_err(serde::de::Error::custom)
    }
}
