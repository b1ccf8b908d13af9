use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, ExperimentKind};
use super::output::{write_summary, Cell, Table};
use super::sources::{parse, Source};
use crate::ballres::{random_automorphism, verify_ball_bound, BallMap, BallTarget};
use crate::error::{Error, Result};
use crate::multipoly::{CPoly, IndexBox, MultiIndex};
use crate::phase::{
    fit_indicator_poly, fourier_coeffs, im_psi_at_origin, indicator_fit, phase_function, universal_l, RadialSchedule,
};
use crate::polydisk::{
    demo_lambdas, nonuniqueness_demo, pluriharmonic_check, rif_from_denominator, RationalHerglotz, RationalInner,
};
use crate::sampling::{random_sphere_point, rng};
use crate::schur1d::{perturbation_family, verify_superres_1d, DiskGrid, UNIT_TOL};
use crate::semialg::{
    admissible_index, default_eps_grid, default_ts, lambda_decay_check, superres_sweep, LambdaProfile, SweepConfig,
};

/// Tolerance of the pluriharmonic moment check on phase tables.
pub const PLURIHARMONIC_TOL: f64 = 5e-3;
/// Allowed negative slack in the ball inequality.
pub const BALL_SLACK_TOL: f64 = 1e-6;
/// Allowed boundary identity defect for an automorphism.
pub const AUTOMORPHISM_TOL: f64 = 1e-9;
/// Allowed deviation of the demo sup norms from one.
pub const DEMO_SUP_TOL: f64 = 1e-4;

/// Provenance of one report row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowStatus {
    pub row: usize,
    pub operation: String,
    /// `ok`, `violation` or `error: <message>`.
    pub status: String,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub kind: ExperimentKind,
    /// SHA-256 of the effective config serialized as JSON.
    pub config_hash: String,
    pub tool_version: String,
    pub started: String,
    pub finished: String,
    pub artifacts: Vec<String>,
    /// Rows that break the property the experiment checks.
    pub violations: usize,
    pub rows: Vec<RowStatus>,
}

/// What an experiment produced, before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub table: Table,
    pub summary: Value,
    pub rows: Vec<RowStatus>,
    pub violations: usize,
    /// Extra files as `(name, bytes)`.
    pub extra: Vec<(String, Vec<u8>)>,
}

pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    let bytes = serde_json::to_vec(cfg)?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

/// Validates `cfg`, runs it and writes `<kind>.csv`, `<kind>_summary.json`
/// and `<kind>_manifest.json` (plus any extra artifacts) into `cfg.out`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest> {
    let problems = cfg.validate();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|v| v.to_string()).collect();
        return Err(Error::Config(list.join("; ")));
    }
    let started = chrono::Utc::now().to_rfc3339();
    let out = execute(cfg)?;
    std::fs::create_dir_all(&cfg.out)?;
    let name = cfg.kind.name();
    let mut artifacts = Vec::new();
    let mut path = |file: String| -> PathBuf {
        artifacts.push(file.clone());
        cfg.out.join(file)
    };
    out.table.write(&path(format!("{name}.csv")))?;
    write_summary(&path(format!("{name}_summary.json")), &out.summary)?;
    for (file, bytes) in &out.extra {
        std::fs::write(path(file.clone()), bytes)?;
    }
    let manifest_path = path(format!("{name}_manifest.json"));
    let manifest = RunManifest {
        kind: cfg.kind,
        config_hash: config_hash(cfg)?,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        artifacts,
        violations: out.violations,
        rows: out.rows,
    };
    std::fs::write(manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

/// Runs the experiment without touching the file system.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput> {
    match (cfg.kind, parse(cfg)?) {
        (ExperimentKind::Schur, Source::Taylor(t)) => run_schur(cfg, &t),
        (ExperimentKind::Phase, Source::Inner { rif, .. }) => run_phase(cfg, rif),
        (ExperimentKind::Superres, Source::Inner { rif, mix_with }) => run_superres(cfg, rif, mix_with),
        (ExperimentKind::Lambda, Source::Sublevel(q)) => run_lambda(cfg, &q),
        (ExperimentKind::Ball, Source::Ball(map)) => run_ball(cfg, map),
        (ExperimentKind::Demo, Source::Empty) => run_demo(cfg),
        _ => unreachable!("parse returns the source shape of the kind"),
    }
}

fn tolerances(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn status(row: usize, operation: &str, ok: bool, tol: &BTreeMap<String, f64>) -> RowStatus {
    RowStatus {
        row,
        operation: operation.into(),
        status: if ok { "ok" } else { "violation" }.into(),
        tolerances: tol.clone(),
    }
}

fn run_schur(cfg: &ExperimentConfig, taylor: &[Complex64]) -> Result<RunOutput> {
    let family = perturbation_family(taylor, cfg.count, cfg.max_eps, cfg.seed)?;
    let grid = DiskGrid::uniform(cfg.effective_radius(), cfg.angles);
    let (cert, rows) = verify_superres_1d(taylor, &family, &grid, cfg.seed)?;
    let tol = tolerances(&[("unit_tol", UNIT_TOL), ("max_eps", cfg.max_eps)]);
    let mut table = Table::new(&["eps", "z_radius", "max_distance", "certified_bound", "violation"]);
    let mut statuses = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        table.push(vec![
            r.eps.into(),
            r.z_radius.into(),
            r.max_distance.into(),
            r.certified_bound.into(),
            r.violation.into(),
        ]);
        statuses.push(status(i, "verify_superres_1d", r.violation <= 0.0, &tol));
    }
    let violations = rows.iter().filter(|r| r.violation > 0.0).count();
    let summary = json!({
        "L": cert.l, "M": cert.m, "eps": cert.eps, "margin": cert.margin(),
        "max_violation": rows.iter().map(|r| r.violation).fold(f64::NEG_INFINITY, f64::max),
        "perturbations": family.len(), "rows": rows.len(), "violations": violations,
    });
    Ok(RunOutput { table, summary, rows: statuses, violations, extra: Vec::new() })
}

fn run_phase(cfg: &ExperimentConfig, rif: RationalInner) -> Result<RunOutput> {
    let rif = rif_from_denominator(rif.denominator().clone(), rif.shift().clone())?;
    let phi = rif.cayley();
    let n = rif.multi_degree();
    let bound = MultiIndex::new(cfg.bound.clone().unwrap_or_else(|| n.entries().to_vec()));
    if bound.dim() != rif.dim() {
        return Err(Error::DimensionMismatch { expected: rif.dim(), got: bound.dim() });
    }
    let grid = phase_function(&phi, cfg.grid, &RadialSchedule::default())?;
    let table = fourier_coeffs(&grid, bound.entries())?;
    let uni = universal_l(&phi.taylor_section(&bound)?)?;
    let fit_table = if n.le(&bound) { table.clone() } else { fourier_coeffs(&grid, n.entries())? };
    let indicator = fit_indicator_poly(&fit_table, &n)?;
    let violations = pluriharmonic_check(&table, PLURIHARMONIC_TOL);
    let tol = tolerances(&[("pluriharmonic_tol", PLURIHARMONIC_TOL)]);

    let d = rif.dim();
    let mut header: Vec<String> = (1..=d).map(|j| format!("alpha_{j}")).collect();
    header.extend(["fft_re", "fft_im", "universal_re", "universal_im"].map(String::from));
    let mut out = Table { header, rows: Vec::new() };
    let mut statuses = Vec::new();
    for (i, (alpha, v)) in table.iter().enumerate() {
        let u = uni.get(&alpha).unwrap_or_default();
        let mut row: Vec<Cell> = alpha.iter().map(|&a| Cell::Int(a)).collect();
        row.extend([v.re.into(), v.im.into(), u.re.into(), u.im.into()]);
        out.push(row);
        let flagged = violations.iter().any(|m| m.alpha == alpha);
        statuses.push(status(i, "fourier_coeffs", !flagged, &tol));
    }
    let phi0 = phi.eval(&vec![Complex64::default(); d]);
    let summary = json!({
        "dim": d, "grid": cfg.grid, "bound": bound, "multi_degree": n,
        "mean": grid.mean(), "converged": grid.converged(),
        "universal_vs_fft": uni.max_diff_on(&table, &IndexBox::new(bound.clone())),
        "conjugate_symmetry_defect": table.conjugate_symmetry_defect(),
        "pluriharmonic_violations": violations,
        "im_psi_0": im_psi_at_origin(phi0),
        "indicator": indicator, "indicator_misfit": indicator_fit(&grid, &indicator),
    });
    let mut bytes = Vec::new();
    grid.write_to(&mut bytes)?;
    let count = violations.len();
    Ok(RunOutput {
        table: out,
        summary,
        rows: statuses,
        violations: count,
        extra: vec![("phase_grid.phg".into(), bytes)],
    })
}

fn run_superres(cfg: &ExperimentConfig, rif: RationalInner, mix_with: Option<RationalInner>) -> Result<RunOutput> {
    let rif = rif_from_denominator(rif.denominator().clone(), rif.shift().clone())?;
    let r = rif.cayley();
    let g = match mix_with {
        Some(m) => {
            RationalHerglotz::from_cayley(&rif_from_denominator(m.denominator().clone(), m.shift().clone())?.cayley())
        }
        None => RationalHerglotz::constant(rif.dim(), Complex64::new(1.0, 0.0))?,
    };
    let sweep = SweepConfig {
        ts: cfg.schedule.clone().unwrap_or_else(default_ts),
        radius: cfg.effective_radius(),
        grid: cfg.grid,
        sup_grid: cfg.sup_grid,
        lambda_points: cfg.points,
        seed: cfg.seed,
        ..SweepConfig::default()
    };
    let rep = superres_sweep(&r, &g, &sweep)?;
    let tol = tolerances(&[("snap", sweep.snap), ("ratio_tol", 1e-9)]);
    let mut table =
        Table::new(&["t", "delta", "sup_dist", "phase_l1", "fourier_gap", "bound_a_ratio", "bound_b_ratio"]);
    let mut statuses = Vec::new();
    let mut violations = usize::from(!rep.summary.sup_monotone);
    for (i, row) in rep.rows.iter().enumerate() {
        table.push(vec![
            row.t.into(),
            row.delta.into(),
            row.sup_dist.into(),
            row.phase_l1.into(),
            row.fourier_gap.into(),
            row.bound_a_ratio.into(),
            row.bound_b_ratio.into(),
        ]);
        let mut st = status(i, "superres_sweep", row.bound_b_ratio <= 1.0 + 1e-9 || row.bound_b_ratio.is_nan(), &tol);
        if let Some(e) = &row.error {
            st.status = format!("error: {e}");
        }
        if st.status != "ok" {
            violations += 1;
        }
        statuses.push(st);
    }
    let mut summary = serde_json::to_value(&rep.summary)?;
    let obj = summary.as_object_mut().expect("summary is an object");
    obj.insert("charts".into(), serde_json::to_value(&rep.charts)?);
    obj.insert("indicator".into(), serde_json::to_value(&rep.indicator)?);
    obj.insert("violations".into(), violations.into());
    Ok(RunOutput { table, summary, rows: statuses, violations, extra: Vec::new() })
}

fn run_lambda(cfg: &ExperimentConfig, q: &crate::semialg::PushforwardPoly) -> Result<RunOutput> {
    let profile = LambdaProfile::new(q, cfg.points, cfg.seed);
    let m = admissible_index(q).ok();
    let eps = cfg.schedule.clone().unwrap_or_else(|| default_eps_grid(q.dim()));
    let decay = lambda_decay_check(&profile, m.as_ref(), &eps)?;
    let tol = tolerances(&[("points", cfg.points as f64)]);
    let mut table = Table::new(&["eps", "lambda", "lambda_over_power"]);
    let mut statuses = Vec::new();
    for (i, (e, v)) in decay.eps.iter().zip(&decay.values).enumerate() {
        let norm = decay.exponent.map(|p| v / e.powi(p as i32)).unwrap_or(f64::NAN);
        table.push(vec![(*e).into(), (*v).into(), norm.into()]);
        statuses.push(status(i, "lambda_fn", true, &tol));
    }
    let summary = json!({
        "dim": q.dim(), "points": cfg.points, "seed": cfg.seed, "admissible": m,
        "exponent": decay.exponent, "c_fit": decay.c_fit, "slope": decay.slope,
    });
    Ok(RunOutput { table, summary, rows: statuses, violations: 0, extra: Vec::new() })
}

/// Perturbations cycle through: argument scaling `F(r z)`, an affine shift
/// of size `eta`, and a convex mixture with another automorphism.
fn ball_target<R: Rng>(r: &mut R, f: &BallMap, family: usize) -> BallTarget {
    let d = f.dim();
    let one = Complex64::new(1.0, 0.0);
    match family {
        0 => BallTarget::from_map(f.precompose_scaling(1.0 - 0.1 * r.gen::<f64>())),
        1 => {
            let eta = 10f64.powf(-4.0 + 2.0 * r.gen::<f64>());
            let dir = random_sphere_point(r, d * (d + 1));
            let poly = (0..d)
                .map(|j| {
                    let terms = (0..=d).map(|k| {
                        let alpha = if k == 0 { MultiIndex::zeros(d) } else { MultiIndex::axis(d, k - 1, 1) };
                        (alpha, dir[j * (d + 1) + k] * eta)
                    });
                    CPoly::from_terms(d, terms).expect("consistent dimension")
                })
                .collect();
            BallTarget { maps: vec![(one, f.clone())], poly }
        }
        _ => {
            let s = 0.2 * r.gen::<f64>();
            let g = random_automorphism(r, d, 0.9);
            BallTarget { maps: vec![(one * (1.0 - s), f.clone()), (one * s, g)], poly: Vec::new() }
        }
    }
}

fn run_ball(cfg: &ExperimentConfig, source: Option<BallMap>) -> Result<RunOutput> {
    let mut r = rng(cfg.seed, 0xba11);
    let tol = tolerances(&[("slack_tol", BALL_SLACK_TOL), ("automorphism_tol", AUTOMORPHISM_TOL)]);
    let mut table = Table::new(&[
        "d",
        "rho",
        "lhs",
        "rhs",
        "slack",
        "family",
        "lhs_tail",
        "slack_certified",
        "rhs_bmin_sq",
        "slack_bmin_sq",
        "self_map_excess",
        "identity_defect",
    ]);
    let mut statuses = Vec::new();
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..cfg.count {
        let f = match &source {
            Some(m) => m.normalized()?,
            None => random_automorphism(&mut r, cfg.dims[i % cfg.dims.len()], 0.9),
        };
        let defect = f.boundary_identity_defect(1000, cfg.seed.wrapping_add(i as u64));
        if source.is_some() && defect > AUTOMORPHISM_TOL {
            return Err(Error::NotAutomorphism { defect });
        }
        let family = i % 3;
        let target = ball_target(&mut r, &f, family);
        let row = verify_ball_bound(&f, &target, cfg.degree, cfg.seed.wrapping_add(i as u64))?;
        table.push(vec![
            row.d.into(),
            row.rho.into(),
            row.lhs.into(),
            row.rhs.into(),
            row.slack.into(),
            family.into(),
            row.lhs_tail.into(),
            row.slack_certified.into(),
            row.rhs_bmin_sq.into(),
            row.slack_bmin_sq.into(),
            row.self_map_excess.into(),
            defect.into(),
        ]);
        let ok = row.slack >= -BALL_SLACK_TOL && defect <= AUTOMORPHISM_TOL;
        violations += usize::from(!ok);
        min_slack = min_slack.min(row.slack);
        statuses.push(status(i, "verify_ball_bound", ok, &tol));
    }
    let col_min = |k: usize| {
        table.rows.iter().map(|r| if let Cell::Num(v) = r[k] { v } else { f64::NAN }).fold(f64::INFINITY, f64::min)
    };
    let summary = json!({
        "rows": cfg.count, "degree": cfg.degree, "min_slack": min_slack,
        "min_slack_certified": col_min(7), "min_slack_bmin_sq": col_min(9),
        "max_identity_defect": -table.rows.iter().map(|r| if let Cell::Num(v) = r[11] { -v } else { f64::NAN }).fold(f64::INFINITY, f64::min),
        "violations": violations,
    });
    Ok(RunOutput { table, summary, rows: statuses, violations, extra: Vec::new() })
}

fn run_demo(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let rep = nonuniqueness_demo(&demo_lambdas(), cfg.sup_grid);
    let tol = tolerances(&[("sup_tol", DEMO_SUP_TOL)]);
    let mut table = Table::new(&["lambda", "sup_f", "sup_g"]);
    let mut statuses = Vec::new();
    let mut violations = usize::from(!rep.affine_fixed);
    for (i, row) in rep.rows.iter().enumerate() {
        table.push(vec![row.lambda.into(), row.sup_f.into(), row.sup_g.into()]);
        let ok = (row.sup_f - 1.0).abs() <= DEMO_SUP_TOL && (row.sup_g - 1.0).abs() <= DEMO_SUP_TOL;
        violations += usize::from(!ok);
        statuses.push(status(i, "nonuniqueness_demo", ok, &tol));
    }
    let dev = |f: fn(&crate::polydisk::DemoRow) -> f64| rep.rows.iter().map(|r| (f(r) - 1.0).abs()).fold(0.0, f64::max);
    let summary = json!({
        "affine_fixed": rep.affine_fixed,
        "max_dev_sup_f": dev(|r| r.sup_f), "max_dev_sup_g": dev(|r| r.sup_g),
        "violations": violations,
    });
    Ok(RunOutput { table, summary, rows: statuses, violations, extra: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_rows_and_determinism() {
        let cfg = ExperimentConfig { sup_grid: 12, ..ExperimentConfig::for_kind(ExperimentKind::Demo) };
        let a = execute(&cfg).unwrap();
        assert_eq!(a.table.rows.len(), 11);
        assert_eq!(a.table.to_csv().unwrap(), execute(&cfg).unwrap().table.to_csv().unwrap());
        // g_lambda leaves the bidisk for lambda > 0.
        assert_eq!(a.violations, 10);
    }

    #[test]
    fn run_writes_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            kind: ExperimentKind::Lambda,
            points: 1 << 12,
            out: dir.path().to_path_buf(),
            ..ExperimentConfig::default()
        };
        let m = run(&cfg).unwrap();
        assert_eq!(m.artifacts, vec!["lambda.csv", "lambda_summary.json", "lambda_manifest.json"]);
        assert_eq!(m.config_hash.len(), 64);
        let csv = std::fs::read_to_string(dir.path().join("lambda.csv")).unwrap();
        assert!(csv.starts_with("eps,lambda,lambda_over_power\n"));
        let bad = ExperimentConfig { grid: 1000, ..cfg };
        assert!(matches!(run(&bad), Err(Error::Config(msg)) if msg.starts_with("grid:")));
    }

    #[test]
    fn small_ball_corpus_holds() {
        let cfg = ExperimentConfig { count: 6, ..ExperimentConfig::for_kind(ExperimentKind::Ball) };
        let out = execute(&cfg).unwrap();
        assert_eq!(out.violations, 0, "{:?}", out.summary);
    }
}
