//! Geometric fSim versus rectangular N = 2 under Rabi and detuning errors.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqdgate::device_model::DeviceParams;
use dqdgate::dynamics::{ErrorInjection, Integrator};
use dqdgate::experiments::{
    geometric_subspace_propagator, parallel_transport_profile, simulate_fsim, FsimDesign, FsimPulse, SimulationOptions,
};
use dqdgate::harness::linspace;

fn main() -> dqdgate::Result<()> {
    let jmax = DeviceParams::default().exchange_max;
    let geo = FsimDesign::with_exchange_limit(FsimPulse::Geometric, FRAC_PI_4, FRAC_PI_2, 1, jmax)?;
    let dynamic = FsimDesign { pulse: FsimPulse::Rectangular, repetitions: 2, ..geo };
    let profile = parallel_transport_profile(&geo, 1000)?;
    let worst = profile.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    println!("T = {:.2} ns, max |<b|H_c|b>| T = {:.1e}", geo.duration * 1e9, worst * geo.duration);
    let b = geometric_subspace_propagator(&geo, Integrator::Magnus4)?;
    println!("{{01,10}} block: [[{:.4}, {:.4}], [{:.4}, {:.4}]]", b[0][0], b[0][1], b[1][0], b[1][1]);

    let opts = SimulationOptions::default();
    println!("{:>7} {:>10} {:>10} {:>10} {:>10}", "error", "geo Rabi", "dyn Rabi", "geo det", "dyn det");
    for e in linspace(-0.1, 0.1, 5) {
        let f = |d: &FsimDesign, err| simulate_fsim(d, err, true, &opts).map(|o| o.report.average);
        let (rabi, det) = (ErrorInjection::new(e, 0.0)?, ErrorInjection::new(0.0, e)?);
        println!("{e:>7.3} {:>10.5} {:>10.5} {:>10.5} {:>10.5}", f(&geo, rabi)?, f(&dynamic, rabi)?, f(&geo, det)?, f(&dynamic, det)?);
    }
    Ok(())
}
