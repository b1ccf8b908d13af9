//! Polydisk superresolution sweep: mixtures R_t = (1 - t) R + t G of a
//! Cayley inner function R with the constant 1, measured on |z_j| <= 1/2.

use herglotz::multipoly::{CPoly, MultiIndex};
use herglotz::polydisk::{rif_from_denominator, RationalHerglotz};
use herglotz::semialg::{superres_sweep, SweepConfig};
use num_complex::Complex64;

fn main() -> herglotz::Result<()> {
    let p = CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)])?;
    let r = rif_from_denominator(p, MultiIndex::zeros(2))?.cayley();
    let g = RationalHerglotz::constant(2, Complex64::new(1.0, 0.0))?;
    let cfg = SweepConfig { grid: 256, lambda_points: 1 << 14, ..SweepConfig::default() };
    let rep = superres_sweep(&r, &g, &cfg)?;

    println!("{:>10} {:>12} {:>12} {:>8}", "t", "delta", "sup dist", "ratio");
    for row in &rep.rows {
        println!("{:>10.3e} {:>12.4e} {:>12.4e} {:>8.4}", row.t, row.delta, row.sup_dist, row.bound_b_ratio);
    }
    let s = &rep.summary;
    println!("kappa_pred = {:?}, slope = {:.3}, A = {:.4}, B = {:.4}", s.kappa_pred, s.slope_fit, s.a_fit, s.b_fit);
    for c in &rep.charts {
        println!(
            "chart {:?}: Q degree {}, admissible {:?}",
            c.chart,
            c.q_degree,
            c.admissible.as_ref().map(|m| m.m.entries())
        );
    }
    Ok(())
}
