//! The ball superresolution inequality for a random automorphism of B_3 and
//! a few nearby self-maps.

use herglotz::ballres::{random_automorphism, verify_ball_bound, BallTarget};
use herglotz::sampling::rng;

fn main() -> herglotz::Result<()> {
    let mut r = rng(7, 0);
    let f = random_automorphism(&mut r, 3, 0.8);
    println!("b_min = {:.6}, boundary identity defect = {:.2e}", f.b_min(), f.boundary_identity_defect(1000, 0));

    println!("{:>6} {:>12} {:>12} {:>12}", "scale", "rho", "lhs", "rhs");
    for s in [0.99, 0.95, 0.9, 0.7] {
        let target = BallTarget::from_map(f.precompose_scaling(s));
        let row = verify_ball_bound(&f, &target, 12, 0)?;
        println!("{s:>6.2} {:>12.4e} {:>12.4e} {:>12.4e}", row.rho, row.lhs, row.rhs);
    }
    Ok(())
}
