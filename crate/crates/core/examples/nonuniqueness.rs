//! Self-maps with the same affine Taylor section: z_1 + lambda z_2^2 on the
//! ball and (z_1 + z_2)/2 + lambda (z_1^2 - z_2^2) on the bidisk.

use herglotz::polydisk::{demo_lambdas, nonuniqueness_demo};

fn main() {
    let rep = nonuniqueness_demo(&demo_lambdas(), 48);
    println!("affine sections fixed: {}", rep.affine_fixed);
    println!("{:>8} {:>10} {:>10}", "lambda", "sup ball", "sup torus");
    for row in &rep.rows {
        println!("{:>8.4} {:>10.6} {:>10.6}", row.lambda, row.sup_f, row.sup_g);
    }
}
