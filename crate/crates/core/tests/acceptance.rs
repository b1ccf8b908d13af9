//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use herglotz::ballres::{sphere_mean, sphere_weight};
use herglotz::harness::{execute, ExperimentConfig, ExperimentKind};
use herglotz::multipoly::{CPoly, IndexBox, MultiIndex, TrigPoly};
use herglotz::phase::{fourier_coeffs, phase_function, reconstruct_phi, universal_l, RadialSchedule};
use herglotz::polydisk::{
    demo_lambdas, nonuniqueness_demo, pluriharmonic_check, rif_from_denominator, CayleyInner, FnHerglotz, Herglotz,
    RationalHerglotz, RationalInner,
};
use herglotz::sampling::rng;
use herglotz::schur1d::{
    blaschke_from_chain, perturbation_family, schur_parameters_raw, verify_superres_1d, wall_from_parameters,
    wall_polynomials, DiskGrid, RationalSchur, SchurChain,
};
use herglotz::semialg::{
    default_eps_grid, lambda_decay_check, pushforward_q, superres_sweep, LambdaProfile, PushforwardPoly, SweepConfig,
};
use num_complex::Complex64;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn two_minus_z1_z2() -> CayleyInner {
    let p = CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).unwrap();
    rif_from_denominator(p, MultiIndex::zeros(2)).unwrap().cayley()
}

fn schur_round_trip() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1, 0);
    let (mut taylor_err, mut wall_err, mut unit_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = r.gen_range(1..=10);
        let mut g: Vec<Complex64> =
            (0..n).map(|_| Complex64::from_polar(0.95 * r.gen::<f64>().sqrt(), r.gen_range(0.0..2.0 * PI))).collect();
        g.push(Complex64::from_polar(1.0, r.gen_range(0.0..2.0 * PI)));
        let chain = SchurChain::new(g).unwrap();
        let taylor = blaschke_from_chain(&chain).unwrap().taylor(n);
        // Recovered parameters are rebuilt without the termination test, whose
        // 1e-10 unimodularity tolerance is tighter than the roundoff of deep chains.
        let back = schur_parameters_raw(&taylor);
        unit_err = unit_err.max((back[n].norm() - 1.0).abs());
        let q = wall_from_parameters(&back);
        let again = RationalSchur::new(q.a, q.b).unwrap().taylor(n);
        taylor_err = taylor_err.max(taylor.iter().zip(&again).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        wall_err = wall_err.max(wall_polynomials(&chain).identity_defect());
    }
    let secs = start.elapsed().as_secs_f64();
    (
        taylor_err <= 1e-8 && wall_err <= 1e-11 && secs < 5.0,
        format!(
            "taylor err {taylor_err:.2e}, Wall defect {wall_err:.2e}, max ||gamma_n| - 1| {unit_err:.1e}, {secs:.2} s"
        ),
    )
}

fn disk_certificate() -> Outcome {
    let start = Instant::now();
    let taylor = [c(0.5), c(0.75)];
    let family = perturbation_family(&taylor, 50, 1e-3, 0).unwrap();
    let (cert, rows) = verify_superres_1d(&taylor, &family, &DiskGrid::uniform(0.9, 256), 0).unwrap();
    let worst = rows.iter().map(|r| r.violation).fold(f64::NEG_INFINITY, f64::max);
    let max_eps = rows.iter().map(|r| r.eps).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    (
        (cert.l - 0.5).abs() <= 1e-9 && worst <= 0.0 && max_eps <= 1e-3 && secs < 30.0,
        format!(
            "L = {:.12}, M = {:.4}, worst dist - bound {worst:.3e} over {} rows, {secs:.2} s",
            cert.l,
            cert.m,
            rows.len()
        ),
    )
}

fn phase_anchors() -> Outcome {
    let z = RationalInner::unchecked(CPoly::constant(1, c(1.0)), MultiIndex::from([1])).unwrap();
    let phi = z.cayley();
    let grid = phase_function(&phi, 1 << 12, &RadialSchedule::default()).unwrap();
    let t = fourier_coeffs(&grid, &[4]).unwrap();
    let e0 = (t.get(&[0]).unwrap() - c(0.5)).norm();
    let e1 = (t.get(&[1]).unwrap() - Complex64::new(0.0, 1.0 / PI)).norm();
    let e2 = t.get(&[2]).unwrap().norm();
    let uni = universal_l(&phi.taylor_section(&MultiIndex::from([4])).unwrap()).unwrap();
    let gap = t.max_diff_on(&uni, &IndexBox::new([4]));
    let rec = (reconstruct_phi(&grid, 0.0, &[c(0.5)]).unwrap() - c(3.0)).norm();
    (
        e0 <= 1e-6 && e1 <= 1e-3 && e2 <= 1e-3 && gap <= 1e-3 && rec <= 1e-2,
        format!("|g(0) - 1/2| {e0:.1e}, |g(1) - i/pi| {e1:.1e}, |g(2)| {e2:.1e}, taylor vs grid {gap:.1e}, phi(1/2) err {rec:.1e}"),
    )
}

fn indicator_property() -> Outcome {
    let grid = phase_function(&two_minus_z1_z2(), 1 << 9, &RadialSchedule::default()).unwrap();
    let fuzzy = grid.samples().iter().filter(|g| g.min(1.0 - **g) > 0.02).count();
    let frac = fuzzy as f64 / grid.samples().len() as f64;
    (frac <= 0.02, format!("fraction of cells with min(g, 1 - g) > 0.02: {frac:.3e}"))
}

fn pluriharmonic() -> Outcome {
    let one = RationalHerglotz::constant(2, c(1.0)).unwrap();
    let r = two_minus_z1_z2();
    let p2 = CPoly::from_real_terms(2, &[(&[0, 0], 4.0), (&[1, 0], -1.0), (&[0, 1], -1.0), (&[1, 1], -1.0)]).unwrap();
    let r2 = rif_from_denominator(p2, MultiIndex::from([1, 0])).unwrap().cayley();
    let p3 =
        CPoly::from_real_terms(3, &[(&[0, 0, 0], 3.0), (&[1, 0, 0], -1.0), (&[0, 1, 0], -1.0), (&[0, 0, 1], -1.0)])
            .unwrap();
    let r3 = rif_from_denominator(p3, MultiIndex::zeros(3)).unwrap().cayley();
    let sqrt_mix = FnHerglotz::new(2, |z: &[Complex64]| {
        let w = z[0] * z[1];
        ((1.0 + z[0]) / (1.0 - z[0])).sqrt() + 0.5 * (1.0 + w) / (1.0 - w)
    });
    let sources: Vec<(Box<dyn Herglotz>, usize, Vec<usize>)> = vec![
        (Box::new(RationalHerglotz::mixture(&r, &one, 0.25).unwrap()), 1 << 9, vec![4, 4]),
        (Box::new(RationalHerglotz::mixture(&r, &r2, 0.5).unwrap()), 1 << 9, vec![4, 4]),
        (Box::new(r2), 1 << 9, vec![4, 4]),
        (Box::new(r), 1 << 9, vec![4, 4]),
        (Box::new(r3), 64, vec![3, 3, 3]),
        (Box::new(sqrt_mix), 128, vec![4, 4]),
    ];
    let mut worst = 0usize;
    let mut max_mixed = 0.0f64;
    for (s, n, bound) in &sources {
        let t = fourier_coeffs(&phase_function(s.as_ref(), *n, &RadialSchedule::default()).unwrap(), bound).unwrap();
        worst += pluriharmonic_check(&t, 5e-3).len();
        let mixed = t
            .iter()
            .filter(|(a, _)| a.iter().any(|&x| x > 0) && a.iter().any(|&x| x < 0))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        max_mixed = max_mixed.max(mixed);
    }
    (
        worst == 0,
        format!("{} sources, {worst} flagged coefficients, largest mixed-sign modulus {max_mixed:.2e}", sources.len()),
    )
}

fn pushforward_and_lambda() -> Outcome {
    let p = TrigPoly::zero(IndexBox::new([1])).with_term([1], 0.0, 1.0);
    let q = pushforward_q(&p, &[1], 1).unwrap();
    let exact = q.terms() == [(MultiIndex::from([1]), -2.0)];
    let lin = PushforwardPoly::from_terms(1, &[(&[1], 1.0)]).unwrap();
    let prof = LambdaProfile::new(&lin, 1 << 20, 0);
    let rel = [0.1, 0.2, 0.5].iter().map(|&e| (prof.eval(e).unwrap() / (e * e / 4.0) - 1.0).abs()).fold(0.0, f64::max);
    let slope = lambda_decay_check(&prof, None, &default_eps_grid(1)).unwrap().slope;
    (
        exact && rel <= 0.01 && (slope - 2.0).abs() <= 0.05,
        format!("Q = {:?}, worst relative Lambda error {rel:.2e}, slope {slope:.4}", q.terms()),
    )
}

fn polydisk_sweep() -> Outcome {
    let start = Instant::now();
    let g = RationalHerglotz::constant(2, c(1.0)).unwrap();
    let rep = superres_sweep(&two_minus_z1_z2(), &g, &SweepConfig::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let s = &rep.summary;
    let max_ratio = rep.rows.iter().map(|r| r.bound_b_ratio).fold(0.0, f64::max);
    let errors = rep.rows.iter().filter(|r| r.error.is_some()).count();
    (
        s.sup_monotone && max_ratio <= 1.0 && errors == 0 && s.kappa_pred.is_some() && secs < 300.0,
        format!(
            "{} rows, monotone {}, max sup/(A d + B d^(1/kappa)) {max_ratio:.6}, A {:.4}, B {:.4}, kappa_pred {:?}, headline C {:.3e} (rho {:.2e}), {secs:.1} s",
            rep.rows.len(),
            s.sup_monotone,
            s.a_fit,
            s.b_fit,
            s.kappa_pred,
            s.c_fit,
            s.rho_empirical
        ),
    )
}

/// Two-sided z threshold giving `k` comparisons together the false-alarm
/// rate of a single 3 sigma test.
fn family_threshold(k: usize) -> f64 {
    let n = Normal::new(0.0, 1.0).unwrap();
    let each = 1.0 - (1.0 - 2.0 * n.cdf(-3.0)).powf(1.0 / k as f64);
    -n.inverse_cdf(each / 2.0)
}

fn ball_inequality() -> Outcome {
    let out = execute(&ExperimentConfig::for_kind(ExperimentKind::Ball)).unwrap();
    let col = |name: &str| out.table.header.iter().position(|h| h == name).unwrap();
    let num = |row: &[herglotz::harness::Cell], k: usize| match row[k] {
        herglotz::harness::Cell::Num(v) => v,
        _ => f64::NAN,
    };
    let (ks, kd) = (col("slack"), col("identity_defect"));
    let min_slack = out.table.rows.iter().map(|r| num(r, ks)).fold(f64::INFINITY, f64::min);
    let max_defect = out.table.rows.iter().map(|r| num(r, kd)).fold(0.0, f64::max);

    let mut monos = Vec::new();
    for d in [2usize, 3] {
        for total in 0..=6usize {
            for a in 0..=total {
                let rest = total - a;
                if d == 2 {
                    monos.push(vec![a, rest]);
                } else {
                    for b in 0..=rest {
                        monos.push(vec![a, b, rest - b]);
                    }
                }
            }
        }
    }
    let z = family_threshold(monos.len());
    let mut worst_sigma = 0.0f64;
    for m in &monos {
        let alpha = MultiIndex::new(m.clone());
        let (mean, se) = sphere_mean(
            |p| alpha.entries().iter().zip(p).map(|(&e, x)| x.norm_sqr().powi(e as i32)).product(),
            m.len(),
            40_000,
            7,
        );
        if se > 0.0 {
            worst_sigma = worst_sigma.max((mean - sphere_weight(&alpha)).abs() / se);
        }
    }
    (
        out.table.rows.len() == 100 && min_slack >= -1e-6 && max_defect <= 1e-9 && worst_sigma <= z,
        format!(
            "{} maps, min slack {min_slack:.3e}, max identity defect {max_defect:.1e}, weights worst {worst_sigma:.2} sigma over {} monomials (limit {z:.2})",
            out.table.rows.len(),
            monos.len()
        ),
    )
}

fn nonuniqueness() -> Outcome {
    let rep = nonuniqueness_demo(&demo_lambdas(), 64);
    let dev =
        |f: fn(&herglotz::polydisk::DemoRow) -> f64| rep.rows.iter().map(|r| (f(r) - 1.0).abs()).fold(0.0, f64::max);
    let (df, dg) = (dev(|r| r.sup_f), dev(|r| r.sup_g));
    (
        df <= 1e-4 && dg <= 1e-4 && rep.affine_fixed,
        format!(
            "max |sup f - 1| {df:.1e}, max |sup g - 1| {dg:.4} (g_lambda leaves the bidisk), affine fixed {}",
            rep.affine_fixed
        ),
    )
}

fn determinism() -> Outcome {
    let kinds = [
        ExperimentKind::Schur,
        ExperimentKind::Phase,
        ExperimentKind::Superres,
        ExperimentKind::Lambda,
        ExperimentKind::Ball,
        ExperimentKind::Demo,
    ];
    let mut differ = Vec::new();
    for kind in kinds {
        let cfg = ExperimentConfig::for_kind(kind);
        let a = execute(&cfg).unwrap().table.to_csv().unwrap();
        let b = execute(&cfg).unwrap().table.to_csv().unwrap();
        if a != b {
            differ.push(kind.name());
        }
    }
    (differ.is_empty(), format!("6 experiments at default configs, differing: {differ:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Schur round trip", schur_round_trip),
        ("disk superresolution certificate", disk_certificate),
        ("phase anchors", phase_anchors),
        ("indicator property", indicator_property),
        ("pluriharmonic moments", pluriharmonic),
        ("pushforward and Lambda anchors", pushforward_and_lambda),
        ("polydisk superresolution sweep", polydisk_sweep),
        ("ball inequality", ball_inequality),
        ("nonuniqueness demo", nonuniqueness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!("{} {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
