use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::admissible::{admissible_index, AdmissibleIndex};
use super::charts::{pushforward_q, ChartAtlas};
use super::lambda::{default_eps_grid, lambda_decay_check, ls_slope, LambdaDecay, LambdaProfile};
use crate::error::{Error, Result};
use crate::multipoly::TrigPoly;
use crate::phase::{fit_indicator_poly, fourier_coeffs, indicator_fit, phase_function, PhaseGrid, RadialSchedule};
use crate::polydisk::{taylor_section, CayleyInner, Herglotz, RationalHerglotz};
use crate::sampling::grid_max;

/// `Q` coefficients below this fraction of the largest are dropped in the
/// sweep: near-cancelling indicator coefficients leave residues of order
/// `1e-8` where the exact `Q` has a zero.
const Q_SNAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Mixture weights `t` of `f_t = (1 - t) R + t G`.
    pub ts: Vec<f64>,
    /// `K = {|z_j| <= radius}`.
    pub radius: f64,
    /// Phase grid points per axis (power of two).
    pub grid: usize,
    /// Points per axis of the sup-norm search on the torus of radius `radius`.
    pub sup_grid: usize,
    /// Sample count for the per-chart Lambda profiles.
    pub lambda_points: usize,
    /// Fitted indicator coefficients below this fraction of the largest are
    /// set to zero before the chart analysis; the grid quadrature leaves an
    /// `O(1/N)` residue in coefficients that vanish exactly.
    pub snap: f64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ts: default_ts(),
            radius: 0.5,
            grid: 1 << 9,
            sup_grid: 64,
            lambda_points: 1 << 16,
            snap: 0.02,
            seed: 0,
        }
    }
}

/// `t = 2^-k` for `k = 3..=10`.
pub fn default_ts() -> Vec<f64> {
    (3..=10).map(|k| 2f64.powi(-k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    /// `||T_n(R) - T_n(f_t)||_2` over the coefficients in `Gamma_n`.
    pub delta: f64,
    pub sup_dist: f64,
    pub phase_l1: f64,
    /// `|int (g - h) P dTheta|`.
    pub fourier_gap: f64,
    /// `sup^kappa / (C delta)`.
    pub bound_a_ratio: f64,
    /// `sup / (A delta + B delta^(1/kappa))`.
    pub bound_b_ratio: f64,
    /// Set when the phase of `f_t` could not be computed.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartReport {
    pub chart: Vec<u8>,
    pub q_degree: usize,
    pub admissible: Option<AdmissibleIndex>,
    pub decay: LambdaDecay,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    /// `min 1/(|m_l| + 1)` over the charts; `None` when some chart has no
    /// admissible index, in which case the fits use `kappa = 1`.
    pub kappa_pred: Option<f64>,
    /// Log-log slope of `sup_dist` against `delta`.
    pub slope_fit: f64,
    #[serde(rename = "A_fit")]
    pub a_fit: f64,
    #[serde(rename = "B_fit")]
    pub b_fit: f64,
    /// Smallest `C` with `sup^kappa <= C delta` on every row.
    #[serde(rename = "C_fit")]
    pub c_fit: f64,
    /// Largest `delta` below which `sup^kappa / delta` does not grow as
    /// `delta` decreases; 0 when it grows already at the smallest two rows,
    /// meaning the sweep shows no range where `sup^kappa <= C delta` with a
    /// fixed `C` is stable.
    pub rho_empirical: f64,
    /// Whether `sup_dist` is non-increasing as `delta` decreases.
    pub sup_monotone: bool,
    /// Mean of `|g - chi_(P > 0)|` for the fitted `P`.
    pub indicator_misfit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    /// Sorted by ascending `delta`.
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
    pub indicator: TrigPoly,
    pub charts: Vec<ChartReport>,
}

/// Mixes `R` with a rational Herglotz `G` along `cfg.ts` and measures the
/// distances that enter the polydisk superresolution estimate.
pub fn superres_sweep(r: &CayleyInner, g: &dyn Herglotz, cfg: &SweepConfig) -> Result<ExperimentReport> {
    if !(cfg.radius > 0.0 && cfg.radius < 1.0) {
        return Err(Error::Config(format!("compact radius {} not in (0, 1)", cfg.radius)));
    }
    let d = r.dim();
    let n = r.underlying().multi_degree();
    let schedule = RadialSchedule::default();
    let g_r = phase_function(r, cfg.grid, &schedule)?;
    let indicator = snap_small(&fit_indicator_poly(&fourier_coeffs(&g_r, n.entries())?, &n)?, cfg.snap);
    let indicator_misfit = indicator_fit(&g_r, &indicator);

    let charts = ChartAtlas::new(d)
        .iter()
        .map(|choice| {
            let q = pushforward_q(&indicator, &choice, n.total())?.snap(Q_SNAP);
            let admissible = admissible_index(&q).ok();
            let profile = LambdaProfile::new(&q, cfg.lambda_points, cfg.seed);
            let decay = lambda_decay_check(&profile, admissible.as_ref(), &default_eps_grid(d))?;
            Ok(ChartReport { chart: choice, q_degree: q.total_degree(), admissible, decay })
        })
        .collect::<Result<Vec<_>>>()?;
    let kappa_pred = charts
        .iter()
        .map(|c| c.admissible.as_ref().map(|a| a.kappa()))
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(1.0, f64::min));
    let kappa = kappa_pred.unwrap_or(1.0);

    let p_vals: Vec<f64> =
        (0..g_r.samples().len()).into_par_iter().map(|k| indicator.eval_angles(&g_r.angles(k))).collect();
    let t_r = r.taylor_section(&n)?;
    let mut rows = cfg
        .ts
        .par_iter()
        .map(|&t| {
            let f = RationalHerglotz::mixture(r, g, t)
                .ok_or_else(|| Error::Config("perturbation target must be rational".into()))?;
            let delta = taylor_section(f.num(), f.den(), &n)?.sub(&t_r).norm();
            let sup_dist = sup_on_torus(|z| (r.eval(z) - f.eval(z)).norm(), d, cfg.radius, cfg.sup_grid);
            let (phase_l1, fourier_gap, error) = match phase_function(&f, cfg.grid, &schedule) {
                Ok(h) => {
                    let (l1, gap) = phase_gaps(&g_r, &h, &p_vals);
                    (l1, gap, None)
                }
                Err(e) => (f64::NAN, f64::NAN, Some(e.to_string())),
            };
            Ok(SweepRow {
                t,
                delta,
                sup_dist,
                phase_l1,
                fourier_gap,
                bound_a_ratio: f64::NAN,
                bound_b_ratio: f64::NAN,
                error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.delta.total_cmp(&b.delta));

    let fit_rows: Vec<(f64, f64)> = rows.iter().filter(|r| r.delta > 0.0).map(|r| (r.delta, r.sup_dist)).collect();
    let c_fit = fit_rows.iter().map(|(dl, s)| s.powf(kappa) / dl).fold(0.0, f64::max);
    let (a_fit, b_fit) = fit_two_term(&fit_rows, 1.0 / kappa);
    for row in rows.iter_mut() {
        if row.delta > 0.0 {
            row.bound_a_ratio = row.sup_dist.powf(kappa) / (c_fit * row.delta);
            row.bound_b_ratio = row.sup_dist / (a_fit * row.delta + b_fit * row.delta.powf(1.0 / kappa));
        } else if row.sup_dist == 0.0 {
            row.bound_a_ratio = 0.0;
            row.bound_b_ratio = 0.0;
        }
    }
    let headline: Vec<f64> = fit_rows.iter().map(|(dl, s)| s.powf(kappa) / dl).collect();
    let mut stable = 0;
    while stable + 1 < headline.len() && headline[stable] <= headline[stable + 1] * (1.0 + 1e-9) {
        stable += 1;
    }
    let rho_empirical = if stable == 0 { 0.0 } else { fit_rows[stable].0 };
    let slope_pts: Vec<(f64, f64)> =
        fit_rows.iter().filter(|(_, s)| *s > 0.0).map(|(dl, s)| (dl.ln(), s.ln())).collect();
    let sup_monotone = rows.windows(2).all(|w| w[0].sup_dist <= w[1].sup_dist * (1.0 + 1e-9));
    let summary = SweepSummary {
        kappa_pred,
        slope_fit: ls_slope(&slope_pts),
        a_fit,
        b_fit,
        c_fit,
        rho_empirical,
        sup_monotone,
        indicator_misfit,
    };
    Ok(ExperimentReport { rows, summary, indicator, charts })
}

/// Zeroes the coefficients of `p` below `rel` times the largest one.
pub fn snap_small(p: &TrigPoly, rel: f64) -> TrigPoly {
    let max = p.cos_coeffs().iter().chain(p.sin_coeffs()).fold(0.0f64, |m, c| m.max(c.abs()));
    let cut = |v: &[f64]| v.iter().map(|&c| if c.abs() <= rel * max { 0.0 } else { c }).collect();
    TrigPoly::new(p.index_box().clone(), cut(p.cos_coeffs()), cut(p.sin_coeffs())).expect("same box")
}

/// Max of `f` over the torus `|z_j| = radius`, which bounds it on the closed
/// polydisk of that radius for `f = |holomorphic|`.
fn sup_on_torus(f: impl Fn(&[Complex64]) -> f64 + Sync, d: usize, radius: f64, n: usize) -> f64 {
    let h = |x: &[f64]| {
        let z: Vec<Complex64> = x.iter().map(|&a| Complex64::from_polar(radius, a)).collect();
        f(&z)
    };
    grid_max(h, &vec![0.0; d], &vec![TAU; d], n, 2).1
}

/// `(mean |g - h|, |mean (g - h) P|)` over the grid.
fn phase_gaps(g: &PhaseGrid, h: &PhaseGrid, p_vals: &[f64]) -> (f64, f64) {
    let total = g.samples().len() as f64;
    let (l1, gap) = g
        .samples()
        .iter()
        .zip(h.samples())
        .zip(p_vals)
        .fold((0.0, 0.0), |(a, b), ((x, y), p)| (a + (x - y).abs(), b + (x - y) * p));
    (l1 / total, (gap / total).abs())
}

/// Nonnegative `(A, B)` with `A delta_i + B delta_i^p >= sup_i` on every row,
/// minimizing the summed relative bound `sum (A delta_i + B delta_i^p)/sup_i`.
/// A two-variable linear program, solved by checking every vertex.
pub fn fit_two_term(rows: &[(f64, f64)], p: f64) -> (f64, f64) {
    let rows: Vec<(f64, f64, f64)> = rows.iter().filter(|(_, s)| *s > 0.0).map(|&(d, s)| (d, d.powf(p), s)).collect();
    if rows.is_empty() {
        return (0.0, 0.0);
    }
    let feasible =
        |a: f64, b: f64| a >= 0.0 && b >= 0.0 && rows.iter().all(|(x, y, s)| a * x + b * y >= s * (1.0 - 1e-12));
    let cost = |a: f64, b: f64| rows.iter().map(|(x, y, s)| (a * x + b * y) / s).sum::<f64>();
    let mut cands: Vec<(f64, f64)> = Vec::new();
    for &(x, y, s) in &rows {
        cands.push((s / x, 0.0));
        cands.push((0.0, s / y));
    }
    for (i, &(x1, y1, s1)) in rows.iter().enumerate() {
        for &(x2, y2, s2) in &rows[i + 1..] {
            let det = x1 * y2 - x2 * y1;
            if det.abs() > 1e-14 * (x1 * y2).abs().max((x2 * y1).abs()) {
                cands.push(((s1 * y2 - s2 * y1) / det, (x1 * s2 - x2 * s1) / det));
            }
        }
    }
    cands
        .into_iter()
        .filter(|&(a, b)| feasible(a, b))
        .min_by(|u, v| cost(u.0, u.1).total_cmp(&cost(v.0, v.1)))
        .map(|(a, b)| {
            // Absorb the vertex roundoff so that every ratio is at most one.
            let worst = rows.iter().map(|(x, y, s)| s / (a * x + b * y)).fold(1.0, f64::max);
            (a * worst, b * worst)
        })
        .expect("the pure-A vertex at the largest ratio is always feasible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{CPoly, MultiIndex};
    use crate::polydisk::RationalInner;

    fn one(d: usize) -> RationalHerglotz {
        RationalHerglotz::constant(d, Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn two_term_fit_is_tight() {
        let rows: Vec<(f64, f64)> = [0.1, 0.01, 0.001].iter().map(|&d| (d, 2.0 * d)).collect();
        let (a, b) = fit_two_term(&rows, 3.0);
        assert!((a - 2.0).abs() < 1e-12 && b.abs() < 1e-12);
        let rows: Vec<(f64, f64)> = [0.5, 0.25, 0.1].iter().map(|&d: &f64| (d, d + 4.0 * d.powi(2))).collect();
        let (a, b) = fit_two_term(&rows, 2.0);
        assert!((a - 1.0).abs() < 1e-9 && (b - 4.0).abs() < 1e-9, "{a} {b}");
        assert_eq!(fit_two_term(&[(0.1, 0.0)], 2.0), (0.0, 0.0));
    }

    #[test]
    fn disk_mixture_is_linear() {
        let r = RationalInner::unchecked(CPoly::constant(1, Complex64::new(1.0, 0.0)), MultiIndex::from([1]))
            .unwrap()
            .cayley();
        let cfg = SweepConfig { grid: 1 << 10, ..SweepConfig::default() };
        let rep = superres_sweep(&r, &one(1), &cfg).unwrap();
        assert_eq!(rep.rows.len(), 8);
        assert!(rep.rows.windows(2).all(|w| w[0].delta <= w[1].delta));
        // T_1(R) = 1 + 2z, so delta = t |(1,0) - (1,2)| = 2t; sup over |z| = 1/2
        // of |R - 1| = |2z/(1 - z)| is 2.
        for row in &rep.rows {
            assert!((row.delta - 2.0 * row.t).abs() < 1e-12);
            assert!((row.sup_dist - 2.0 * row.t).abs() < 1e-6);
            assert!(row.bound_b_ratio <= 1.0 + 1e-9 && row.bound_a_ratio <= 1.0 + 1e-9);
            assert!(row.error.is_none());
        }
        assert!((rep.summary.slope_fit - 1.0).abs() < 1e-6);
        assert!(rep.summary.sup_monotone);
        assert!(rep.rows[0].phase_l1 < rep.rows[7].phase_l1);
        assert_eq!(rep.summary.kappa_pred, Some(0.5));
    }

    #[test]
    fn identical_functions_have_zero_distance() {
        let r = RationalInner::unchecked(CPoly::constant(1, Complex64::new(1.0, 0.0)), MultiIndex::from([1]))
            .unwrap()
            .cayley();
        let cfg = SweepConfig { ts: vec![0.0], grid: 64, ..SweepConfig::default() };
        let rep = superres_sweep(&r, &one(1), &cfg).unwrap();
        let row = &rep.rows[0];
        assert_eq!((row.delta, row.sup_dist, row.phase_l1, row.fourier_gap), (0.0, 0.0, 0.0, 0.0));
        assert_eq!((row.bound_a_ratio, row.bound_b_ratio), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_radius() {
        let r = RationalInner::unchecked(CPoly::constant(1, Complex64::new(1.0, 0.0)), MultiIndex::from([1]))
            .unwrap()
            .cayley();
        let cfg = SweepConfig { radius: 1.0, ..SweepConfig::default() };
        assert!(matches!(superres_sweep(&r, &one(1), &cfg), Err(Error::Config(_))));
    }
}
