//! Phase function of phi(z) = (1 + z)/(1 - z): its Fourier coefficients from
//! the boundary grid and from Taylor data alone, and phi rebuilt from the
//! phase.

use herglotz::multipoly::{CPoly, IndexBox, MultiIndex};
use herglotz::phase::{fourier_coeffs, phase_function, reconstruct_phi, universal_l, RadialSchedule};
use herglotz::polydisk::RationalInner;
use num_complex::Complex64;

fn main() -> herglotz::Result<()> {
    let z = RationalInner::unchecked(CPoly::constant(1, Complex64::new(1.0, 0.0)), MultiIndex::from([1]))?;
    let phi = z.cayley();
    let grid = phase_function(&phi, 1 << 12, &RadialSchedule::default())?;
    println!("mean of g = {:.8}, converged = {}", grid.mean(), grid.converged());

    let fft = fourier_coeffs(&grid, &[4])?;
    let uni = universal_l(&phi.taylor_section(&MultiIndex::from([4]))?)?;
    for k in 0..=4i64 {
        let (a, b) = (fft.get(&[k]).unwrap(), uni.get(&[k]).unwrap());
        println!("g^({k}): fft {:+.6}{:+.6}i   taylor {:+.6}{:+.6}i", a.re, a.im, b.re, b.im);
    }
    println!("max gap on the box: {:.2e}", fft.max_diff_on(&uni, &IndexBox::new([4])));

    let v = reconstruct_phi(&grid, 0.0, &[Complex64::new(0.5, 0.0)])?;
    println!("phi(1/2) from the phase: {:.6}{:+.6}i (exact 3)", v.re, v.im);
    Ok(())
}
