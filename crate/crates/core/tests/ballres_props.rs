use std::f64::consts::TAU;

use herglotz::ballres::{random_automorphism, sphere_mean, sphere_weight, verify_ball_bound, BallTarget};
use herglotz::multipoly::MultiIndex;
use herglotz::sampling::{random_sphere_point, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

/// All exponents of total degree at most `k` in `d` variables.
fn monomials(d: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|a: Vec<usize>| {
                let used: usize = a.iter().sum();
                (0..=k - used).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex::new).collect()
}

fn mono(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    alpha.entries().iter().zip(z).map(|(&a, x)| x.powi(a as i32)).product()
}

/// `int f conj(g) dsigma` for polynomial `f, g`: random moduli on the real
/// sphere, exact averaging over a product grid of phases. Monomials with
/// different exponents are orthogonal for every fixed modulus vector, so the
/// phase average decides orthogonality exactly once `k` exceeds the degrees.
fn phase_averaged(
    f: impl Fn(&[Complex64]) -> Complex64,
    g: impl Fn(&[Complex64]) -> Complex64,
    d: usize,
    k: usize,
) -> Complex64 {
    let mut r = rng(5, 0);
    let radii: Vec<Vec<f64>> =
        (0..8).map(|_| random_sphere_point(&mut r, d).iter().map(|z| z.norm()).collect()).collect();
    let total = k.pow(d as u32);
    let mut acc = Complex64::default();
    for rad in &radii {
        for idx in 0..total {
            let mut rest = idx;
            let z: Vec<Complex64> = rad
                .iter()
                .map(|&m| {
                    let j = rest % k;
                    rest /= k;
                    Complex64::from_polar(m, TAU * j as f64 / k as f64)
                })
                .collect();
            acc += f(&z) * g(&z).conj();
        }
    }
    acc / (radii.len() * total) as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_part_is_orthogonal_to_the_tail(seed in 0u64..10_000, d in 2usize..=3) {
        let mut r = rng(seed, 0);
        let f = random_automorphism(&mut r, d, 0.9).normalized().unwrap();
        let tail = f.series(4).unwrap().tail();
        let rows = f.numerator_rows().to_vec();
        for (j, comp) in tail.components().iter().enumerate() {
            // Numerator of component j: a^(0)_j + sum_k a^(k)_j z_k.
            let affine = |z: &[Complex64]| rows[0][j] + z.iter().zip(&rows[1..]).map(|(x, row)| x * row[j]).sum::<Complex64>();
            for (alpha, _) in comp.terms().take(6) {
                let ip = phase_averaged(affine, |z| mono(alpha, z), d, 6);
                prop_assert!(ip.norm() <= 1e-3, "{:?}: {}", alpha.entries(), ip.norm());
            }
        }
    }

    #[test]
    fn automorphisms_satisfy_the_boundary_identity(seed in 0u64..10_000, d in 2usize..=4) {
        let mut r = rng(seed, 1);
        let f = random_automorphism(&mut r, d, 0.95);
        prop_assert!(f.boundary_identity_defect(10_000, seed) <= 1e-9);
    }

    #[test]
    fn scaled_arguments_keep_positive_slack(seed in 0u64..10_000, d in 2usize..=3, s in 0.5..1.0f64) {
        let mut r = rng(seed, 2);
        let f = random_automorphism(&mut r, d, 0.9);
        let row = verify_ball_bound(&f, &BallTarget::from_map(f.precompose_scaling(s)), 12, seed).unwrap();
        prop_assert!(row.slack >= -1e-6, "{:?}", row);
    }
}

#[test]
fn phase_average_reproduces_weights() {
    for alpha in monomials(3, 4) {
        let ip = phase_averaged(|z| mono(&alpha, z), |z| mono(&alpha, z), 3, 6);
        // Exact in the phases; the moduli are only eight random draws, so
        // this checks orthogonality, not the weight.
        assert!(ip.im.abs() < 1e-14 && ip.re > 0.0);
    }
}

/// Two-sided z threshold that gives `k` comparisons together the same
/// false-alarm rate as a single 3 sigma test.
fn family_threshold(k: usize) -> f64 {
    let n = Normal::new(0.0, 1.0).unwrap();
    let single = 2.0 * n.cdf(-3.0);
    let each = 1.0 - (1.0 - single).powf(1.0 / k as f64);
    -n.inverse_cdf(each / 2.0)
}

#[test]
fn weights_match_monte_carlo() {
    let all: Vec<(usize, MultiIndex)> =
        (1..=4).flat_map(|d| monomials(d, 6).into_iter().map(move |a| (d, a))).collect();
    let z = family_threshold(all.len());
    for (d, alpha) in &all {
        let (mean, se) = sphere_mean(|p| mono(alpha, p).norm_sqr(), *d, 40_000, *d as u64);
        let w = sphere_weight(alpha);
        assert!((mean - w).abs() <= z * se, "d = {d}, {:?}: {mean} vs {w} (se {se}, z {z})", alpha.entries());
    }
}
