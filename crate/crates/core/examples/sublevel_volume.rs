//! Pushing a trigonometric polynomial through a half-circle chart, and the
//! sublevel-volume profile of the result.

use herglotz::multipoly::{IndexBox, TrigPoly};
use herglotz::semialg::{
    admissible_index, default_eps_grid, lambda_decay_check, pushforward_q, LambdaProfile, PushforwardPoly,
};

fn main() -> herglotz::Result<()> {
    // P = -Im xi becomes Q(t) = -2t on the right half circle.
    let p = TrigPoly::zero(IndexBox::new([1])).with_term([1], 0.0, 1.0);
    let q = pushforward_q(&p, &[1], 1)?;
    println!("Q terms: {:?}", q.terms());

    let q = PushforwardPoly::from_terms(2, &[(&[1, 0], 1.0), (&[0, 2], 0.5), (&[2, 1], -0.3)])?;
    let m = admissible_index(&q)?;
    println!("admissible index {:?} (order {:?}), kappa = {}", m.m.entries(), m.sigma, m.kappa());

    let profile = LambdaProfile::new(&q, 1 << 18, 0);
    let decay = lambda_decay_check(&profile, Some(&m), &default_eps_grid(2))?;
    for (e, v) in decay.eps.iter().zip(&decay.values) {
        println!("  Lambda({e:.6}) = {v:.6e}");
    }
    println!("log-log slope {:.3}, lower-bound exponent {:?}", decay.slope, decay.exponent);
    Ok(())
}
