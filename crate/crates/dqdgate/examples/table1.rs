//! Gate fidelities with T2 dephasing for the rectangular and eta = -1/3 pulses, N = 1..10.
//! Usage: cargo run --example table1 -- [grid_n]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqdgate::device_model::DeviceParams;
use dqdgate::dynamics::ErrorInjection;
use dqdgate::experiments::{simulate_fsim, FsimDesign, FsimPulse, SimulationOptions};
use dqdgate::pulse_designs::PolynomialLayout;

fn main() -> dqdgate::Result<()> {
    let grid_n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let params = DeviceParams::default();
    let opts = SimulationOptions { grid_n, ..SimulationOptions::with_device_dephasing(&params) };
    let poly = FsimPulse::Polynomial { eta: -1.0 / 3.0, layout: PolynomialLayout::Repeated };
    println!("{:>3} {:>12} {:>12}", "N", "rect F (%)", "poly F (%)");
    for n in 1..=10 {
        let mut row = Vec::new();
        for pulse in [FsimPulse::Rectangular, poly] {
            let d = FsimDesign::with_exchange_limit(pulse, FRAC_PI_4, FRAC_PI_2, n, params.exchange_max)?;
            row.push(simulate_fsim(&d, ErrorInjection::default(), false, &opts)?.report.average * 100.0);
        }
        println!("{n:>3} {:>12.3} {:>12.3}", row[0], row[1]);
    }
    Ok(())
}
