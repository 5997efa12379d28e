//! Average fidelity as one relative phase of the input grid is swept, for N = 1 and N = 10.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use dqdgate::device_model::DeviceParams;
use dqdgate::dynamics::ErrorInjection;
use dqdgate::experiments::{gate_channel, FsimDesign, FsimPulse, SimulationOptions};
use dqdgate::fidelity::{phase_sweep, FidelityConvention, PhaseAxis};
use dqdgate::pulse_designs::PolynomialLayout;

fn main() -> dqdgate::Result<()> {
    let params = DeviceParams::default();
    let opts = SimulationOptions { grid_n: 20, ..SimulationOptions::with_device_dephasing(&params) };
    let poly = FsimPulse::Polynomial { eta: -1.0 / 3.0, layout: PolynomialLayout::Repeated };
    let values: Vec<f64> = (0..8).map(|k| k as f64 * TAU / 8.0).collect();
    for n in [1, 10] {
        let d = FsimDesign::with_exchange_limit(poly, FRAC_PI_4, FRAC_PI_2, n, params.exchange_max)?;
        let (channel, _) = gate_channel(&d.hamiltonian(ErrorInjection::default(), false)?, &opts)?;
        for axis in [PhaseAxis::Phi1, PhaseAxis::Phi2, PhaseAxis::Phi3] {
            let rows = phase_sweep(&channel, &d.target(), axis, &values, opts.grid_n, FidelityConvention::Standard, &d.meta(ErrorInjection::default()))?;
            let f: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.average * 100.0)).collect();
            println!("N={n:<2} {axis:?}: {}", f.join(" "));
        }
    }
    Ok(())
}
