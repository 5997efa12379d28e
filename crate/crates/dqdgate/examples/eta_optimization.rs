//! Error sensitivity q_s of the polynomial pulse across its shape parameter.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqdgate::harness::linspace;
use dqdgate::pulse_designs::optimize_eta;

fn main() -> dqdgate::Result<()> {
    let scan = optimize_eta(FRAC_PI_4, FRAC_PI_2, &linspace(-1.0, 1.0, 201))?;
    for (eta, q) in scan.etas.iter().zip(&scan.sensitivity).step_by(20) {
        match q {
            Some(q) => println!("eta = {eta:+.2}  q_s = {q:.5e}"),
            None => println!("eta = {eta:+.2}  singular"),
        }
    }
    println!("minimum q_s = {:.5e} at eta = {:.3}", scan.best_sensitivity, scan.best_eta);
    Ok(())
}
