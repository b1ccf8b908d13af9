//! One-variable superresolution: Schur functions whose first Taylor
//! coefficients are close to those of a Blaschke product stay uniformly
//! close to it on compact subdisks.

use herglotz::schur1d::{perturbation_family, verify_superres_1d, DiskGrid};
use num_complex::Complex64;

fn main() -> herglotz::Result<()> {
    // f(z) = (z + 1/2)/(1 + z/2)
    let taylor = [Complex64::new(0.5, 0.0), Complex64::new(0.75, 0.0)];
    let family = perturbation_family(&taylor, 50, 1e-3, 0)?;
    let (cert, rows) = verify_superres_1d(&taylor, &family, &DiskGrid::uniform(0.9, 256), 0)?;
    println!("L = {:.9}, M = {:.4}, eps = {:.3e}, L - M eps = {:.4}", cert.l, cert.m, cert.eps, cert.margin());

    println!("{:>5} {:>12} {:>12}", "|z|", "max dist", "bound");
    for r in DiskGrid::uniform(0.9, 1).radii {
        let worst = rows.iter().filter(|row| row.z_radius == r).max_by(|a, b| a.violation.total_cmp(&b.violation));
        if let Some(w) = worst {
            println!("{r:>5.1} {:>12.3e} {:>12.3e}", w.max_distance, w.certified_bound);
        }
    }
    let bad = rows.iter().filter(|r| r.violation > 0.0).count();
    println!("violations: {bad} of {}", rows.len());
    Ok(())
}
