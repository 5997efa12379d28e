//! Numerical Rabi-error sweep against the closed-form law (25 + 7 cos(Delta pi / 2)) / 32.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqdgate::device_model::DeviceParams;
use dqdgate::dynamics::ErrorInjection;
use dqdgate::experiments::{simulate_fsim, FsimDesign, FsimPulse, SimulationOptions};
use dqdgate::fidelity::analytic_rabi_fidelity;
use dqdgate::harness::linspace;

fn main() -> dqdgate::Result<()> {
    let jmax = DeviceParams::default().exchange_max;
    let design = FsimDesign::with_exchange_limit(FsimPulse::Rectangular, FRAC_PI_4, FRAC_PI_2, 1, jmax)?;
    for delta in linspace(-0.1, 0.1, 11) {
        let f = simulate_fsim(&design, ErrorInjection::new(delta, 0.0)?, true, &SimulationOptions::default())?;
        let law = analytic_rabi_fidelity(delta);
        println!("Delta = {delta:+.2}  numeric {:.6}  law {law:.6}  diff {:+.2e}", f.report.average, f.report.average - law);
    }
    Ok(())
}
