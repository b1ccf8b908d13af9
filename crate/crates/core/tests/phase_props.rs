use herglotz::multipoly::{CPoly, IndexBox, MultiIndex};
use herglotz::phase::{
    fit_indicator_poly, fourier_coeffs, im_psi_at_origin, phase_function, reconstruct_phi, universal_l, PhaseGrid,
    RadialSchedule,
};
use herglotz::polydisk::{
    pluriharmonic_check, rif_from_denominator, CayleyInner, FnHerglotz, Herglotz, RationalHerglotz,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn inner(dim: usize, terms: &[(&[usize], f64)], m: &[usize]) -> CayleyInner {
    let p = CPoly::from_real_terms(dim, terms).unwrap();
    rif_from_denominator(p, MultiIndex::new(m.to_vec())).unwrap().cayley()
}

fn corpus_1d() -> Vec<CayleyInner> {
    vec![
        inner(1, &[(&[0], 1.0)], &[1]),
        inner(1, &[(&[0], 1.0), (&[1], -0.5)], &[0]),
        inner(1, &[(&[0], 1.0), (&[1], 0.3)], &[1]),
    ]
}

fn corpus_2d() -> Vec<CayleyInner> {
    vec![
        inner(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)], &[0, 0]),
        inner(2, &[(&[0, 0], 4.0), (&[1, 0], -1.0), (&[0, 1], -1.0), (&[1, 1], -1.0)], &[1, 0]),
    ]
}

fn grid(phi: &dyn Herglotz, n: usize) -> PhaseGrid {
    phase_function(phi, n, &RadialSchedule::default()).unwrap()
}

fn origin(d: usize) -> Vec<Complex64> {
    vec![Complex64::default(); d]
}

#[test]
fn taylor_and_grid_coefficients_agree() {
    for (phi, n) in corpus_1d().into_iter().map(|p| (p, 1 << 12)).chain(corpus_2d().into_iter().map(|p| (p, 1 << 9))) {
        let deg = phi.underlying().multi_degree();
        let fft = fourier_coeffs(&grid(&phi, n), deg.entries()).unwrap();
        let uni = universal_l(&phi.taylor_section(&deg).unwrap()).unwrap();
        let gap = fft.max_diff_on(&uni, &IndexBox::new(deg.clone()));
        assert!(gap < 1e-3, "degree {:?}: {gap}", deg.entries());
    }
}

#[test]
fn reconstruction_round_trip() {
    let points_1d = [c(0.0), c(0.5), c(-0.5), Complex64::new(0.2, 0.4), Complex64::new(0.0, -0.5)];
    for phi in corpus_1d() {
        let g = grid(&phi, 1 << 14);
        let psi0 = im_psi_at_origin(phi.eval(&origin(1)));
        for z in points_1d {
            let err = (reconstruct_phi(&g, psi0, &[z]).unwrap() - phi.eval(&[z])).norm();
            assert!(err < 1e-3, "z = {z}: {err}");
        }
    }
    let points_2d = [[c(0.0), c(0.0)], [c(0.5), c(-0.5)], [Complex64::new(0.2, 0.3), Complex64::new(-0.4, 0.1)]];
    for phi in corpus_2d() {
        let g = grid(&phi, 1 << 12);
        let psi0 = im_psi_at_origin(phi.eval(&origin(2)));
        for z in &points_2d {
            let err = (reconstruct_phi(&g, psi0, z).unwrap() - phi.eval(z)).norm();
            assert!(err < 1e-3, "z = {z:?}: {err}");
        }
    }
}

#[test]
fn cayley_inner_phase_is_an_indicator() {
    for (phi, n) in corpus_1d().into_iter().map(|p| (p, 1 << 12)).chain(corpus_2d().into_iter().map(|p| (p, 1 << 9))) {
        let g = grid(&phi, n);
        let d = g.dim() as f64;
        let fuzzy = g.samples().iter().filter(|v| v.min(1.0 - **v) > 0.02).count() as f64;
        let frac = fuzzy / g.samples().len() as f64;
        assert!(frac <= 4.0 * d / n as f64, "{frac}");
    }
}

#[test]
fn herglotz_tables_are_pluriharmonic() {
    let mut sources: Vec<Box<dyn Herglotz>> = Vec::new();
    for phi in corpus_2d() {
        let one = RationalHerglotz::constant(2, c(1.0)).unwrap();
        sources.push(Box::new(RationalHerglotz::mixture(&phi, &one, 0.3).unwrap()));
        sources.push(Box::new(phi));
    }
    sources.push(Box::new(RationalHerglotz::constant(2, Complex64::new(0.5, 2.0)).unwrap()));
    sources.push(Box::new(FnHerglotz::new(2, |z: &[Complex64]| {
        let a = ((1.0 + z[0]) / (1.0 - z[0])).sqrt();
        let w = z[0] * z[1];
        a + 0.5 * (1.0 + w) / (1.0 - w)
    })));
    for s in &sources {
        let t = fourier_coeffs(&grid(s.as_ref(), 64), &[4, 4]).unwrap();
        assert!(pluriharmonic_check(&t, 5e-3).is_empty());
    }
}

/// Least squares of `2g - 1` against the real basis `Re xi^alpha`,
/// `-Im xi^alpha` on the grid, solved densely.
#[test]
fn indicator_fit_matches_dense_least_squares() {
    let phi = &corpus_2d()[1];
    let n = 32;
    let g = grid(phi, n);
    let deg = MultiIndex::from([2, 1]);
    let bx = IndexBox::new(deg.clone());
    let alphas: Vec<MultiIndex> = bx.iter().collect();
    // Column layout: cos for every alpha, then sin for alpha != 0.
    let cols = 2 * alphas.len() - 1;
    let rows = g.samples().len();
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut b = DVector::<f64>::zeros(rows);
    for k in 0..rows {
        let t = g.angles(k);
        b[k] = 2.0 * g.samples()[k] - 1.0;
        let mut col = 0;
        for alpha in &alphas {
            let phase: f64 = alpha.entries().iter().zip(&t).map(|(&e, x)| e as f64 * x).sum();
            a[(k, col)] = phase.cos();
            col += 1;
        }
        for alpha in alphas.iter().skip(1) {
            let phase: f64 = alpha.entries().iter().zip(&t).map(|(&e, x)| e as f64 * x).sum();
            a[(k, col)] = -phase.sin();
            col += 1;
        }
    }
    let x = a.svd(true, true).solve(&b, 1e-12).unwrap();
    let fit = fit_indicator_poly(&fourier_coeffs(&g, deg.entries()).unwrap(), &deg).unwrap();
    for (i, alpha) in alphas.iter().enumerate() {
        let (r, s) = fit.coeff(alpha);
        assert!((r - x[i]).abs() < 1e-10, "cos {alpha:?}: {r} vs {}", x[i]);
        if i > 0 {
            let sx = x[alphas.len() + i - 1];
            assert!((s - sx).abs() < 1e-10, "sin {alpha:?}: {s} vs {sx}");
        }
    }
}
