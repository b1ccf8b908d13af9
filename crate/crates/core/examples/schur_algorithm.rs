//! Schur parameters of a finite Blaschke product, the Wall polynomials of
//! the chain, and the product rebuilt from them.

use herglotz::schur1d::{blaschke_from_chain, schur_parameters, wall_polynomials};
use num_complex::Complex64;

fn main() -> herglotz::Result<()> {
    let c = |re: f64| Complex64::new(re, 0.0);
    // f(z) = z (z + 1/2)/(1 + z/2), Taylor data up to z^2.
    let taylor = [c(0.0), c(0.5), c(0.75)];
    let (chain, _) = schur_parameters(&taylor)?;
    println!("parameters: {:?}", chain.parameters());
    println!("terminated: {}", chain.terminated());

    let wall = wall_polynomials(&chain);
    println!("omega = {:.6}, Wall identity defect = {:.2e}", wall.omega, wall.identity_defect());

    let f = blaschke_from_chain(&chain)?;
    let back = f.taylor(4);
    println!("rebuilt Taylor coefficients:");
    for (k, v) in back.iter().enumerate() {
        println!("  c_{k} = {:+.12}", v.re);
    }
    let z = Complex64::from_polar(1.0, 0.7);
    println!("|f| on the circle: {:.15}", f.eval(z).norm());
    Ok(())
}
