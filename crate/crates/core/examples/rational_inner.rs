//! A rational inner function on the bidisk built from a stable polynomial,
//! and its Cayley transform.

use herglotz::multipoly::{CPoly, MultiIndex};
use herglotz::polydisk::{rif_from_denominator, Herglotz};
use num_complex::Complex64;

fn main() -> herglotz::Result<()> {
    let p = CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)])?;
    let f = rif_from_denominator(p, MultiIndex::zeros(2))?;
    println!("multi-degree {:?}", f.multi_degree().entries());

    for k in 0..4 {
        let xi = [Complex64::from_polar(1.0, 0.4 + k as f64), Complex64::from_polar(1.0, -1.3 * k as f64)];
        println!("|f(xi)| = {:.15}", f.eval(&xi).norm());
    }

    let phi = f.cayley();
    let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)];
    println!("Re phi(z) = {:.6} (non-negative inside)", Herglotz::eval(&phi, &z).re);
    let t = phi.taylor_section(&MultiIndex::from([2, 2]))?;
    for (alpha, c) in t.iter() {
        println!("  c{:?} = {:+.6}{:+.6}i", alpha.entries(), c.re, c.im);
    }
    Ok(())
}
