//! Rectangular, polynomial and geometric fSim(pi/4, pi/2) schedules at the device exchange limit.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqdgate::device_model::DeviceParams;
use dqdgate::experiments::{FsimDesign, FsimPulse};
use dqdgate::pulse_designs::PolynomialLayout;

fn main() -> dqdgate::Result<()> {
    let jmax = DeviceParams::default().exchange_max;
    let poly = FsimPulse::Polynomial { eta: -1.0 / 3.0, layout: PolynomialLayout::Repeated };
    for (pulse, n) in [(FsimPulse::Rectangular, 1), (FsimPulse::Rectangular, 3), (poly, 1), (poly, 3), (FsimPulse::Geometric, 1)] {
        let design = FsimDesign::with_exchange_limit(pulse, FRAC_PI_4, FRAC_PI_2, n, jmax)?;
        let schedule = design.schedule()?;
        let controls = design.controls()?;
        println!(
            "{:<15} N={n}  T = {:6.2} ns  segments {:>2}  peak 2|j|/2pi = {:5.2} MHz  dEz/2pi = {:6.2} MHz",
            pulse.label(),
            design.duration * 1e9,
            schedule.segments.len(),
            2.0 * schedule.peak_envelope() / std::f64::consts::TAU / 1e6,
            controls.zeeman_difference / std::f64::consts::TAU / 1e6,
        );
    }
    let design = FsimDesign::with_exchange_limit(poly, FRAC_PI_4, FRAC_PI_2, 1, jmax)?;
    let mut csv = Vec::new();
    design.schedule()?.write_csv(&mut csv, 11)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
