//! Seeded random and quasi-random point sets, plus small scalar search
//! helpers shared by the sweeps.
//!
//! Every randomized estimator in the crate draws from [`rng`] so that a
//! config seed fixes all output bits.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A ChaCha stream keyed by `(seed, stream)`. Different call sites use
/// different stream ids so their draws do not overlap.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform point of the real ball of radius `radius` around `center`.
pub fn uniform_in_real_ball<R: Rng>(rng: &mut R, center: &[f64], radius: f64) -> Vec<f64> {
    let dim = center.len();
    let g: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    center.iter().zip(&g).map(|(c, x)| c + r * x / norm).collect()
}

pub fn random_torus_point<R: Rng>(rng: &mut R, d: usize) -> Vec<Complex64> {
    (0..d).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect()
}

/// Point of the polydisk of polyradius `r`, each coordinate uniform in its disk.
pub fn random_polydisk_point<R: Rng>(rng: &mut R, d: usize, r: f64) -> Vec<Complex64> {
    (0..d)
        .map(|_| {
            let rho = r * rng.gen::<f64>().sqrt();
            Complex64::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// Uniform point of the unit sphere of `C^d` (normalized complex Gaussian).
pub fn random_sphere_point<R: Rng>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let g: Vec<Complex64> =
        (0..d).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    g.into_iter().map(|z| z / norm).collect()
}

/// Uniform point of the open unit ball of `C^d` scaled by `r`.
pub fn random_ball_point<R: Rng>(rng: &mut R, d: usize, r: f64) -> Vec<Complex64> {
    let s = random_sphere_point(rng, d);
    let rho = r * rng.gen::<f64>().powf(1.0 / (2 * d) as f64);
    s.into_iter().map(|z| z * rho).collect()
}

/// Additive recurrence `frac(shift + i * a)` with the generalized golden
/// ratio directions, a low-discrepancy sequence in `[0,1)^dim`.
pub struct Kronecker {
    alpha: Vec<f64>,
    shift: Vec<f64>,
}

impl Kronecker {
    /// The shift is drawn from the seeded stream so that different seeds
    /// give different (equally good) point sets.
    pub fn new(dim: usize, seed: u64) -> Self {
        // phi_d is the positive root of x^(d+1) = x + 1.
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|k| phi.powi(-(k as i32)).fract()).collect();
        let mut r = rng(seed, 0x4b72);
        let shift = (0..dim).map(|_| r.gen::<f64>()).collect();
        Kronecker { alpha, shift }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.alpha.iter().zip(&self.shift).map(|(a, s)| (s + i as f64 * a).fract()).collect()
    }
}

/// Minimizes a unimodal `f` on `[a, b]` by golden-section search; returns
/// `(argmin, min)`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximum of `f` over the box `[lo, hi]` (one interval per coordinate):
/// a uniform grid with `n` points per axis, then `levels` rounds of an
/// 11-point-per-axis local grid around the running maximum, each round
/// shrinking the spacing by 5.
pub fn grid_max(f: impl Fn(&[f64]) -> f64 + Sync, lo: &[f64], hi: &[f64], n: usize, levels: usize) -> (Vec<f64>, f64) {
    use rayon::prelude::*;
    let k = lo.len();
    let total = n.pow(k as u32);
    let step: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / (n - 1) as f64).collect();
    let at = |mut idx: usize, center: Option<(&[f64], &[f64])>, side: usize| -> Vec<f64> {
        let mut x = vec![0.0; k];
        for j in (0..k).rev() {
            let i = idx % side;
            idx /= side;
            x[j] = match center {
                None => lo[j] + i as f64 * step[j],
                Some((c, h)) => (c[j] + (i as f64 - (side / 2) as f64) * h[j]).clamp(lo[j], hi[j]),
            };
        }
        x
    };
    let best_of = |count: usize, point: &(dyn Fn(usize) -> Vec<f64> + Sync)| -> (usize, f64) {
        (0..count).into_par_iter().map(|i| (i, f(&point(i)))).reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a },
        )
    };
    let (i0, mut best) = best_of(total, &|i| at(i, None, n));
    let mut x = at(i0, None, n);
    let mut h = step.clone();
    for _ in 0..levels {
        h.iter_mut().for_each(|v| *v /= 5.0);
        let (c, hh) = (x.clone(), h.clone());
        let (i, v) = best_of(11usize.pow(k as u32), &|i| at(i, Some((&c, &hh)), 11));
        if v > best {
            best = v;
            x = at(i, Some((&c, &hh)), 11);
        }
    }
    (x, best)
}
