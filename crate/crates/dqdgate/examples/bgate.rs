//! Rectangular B gate with one field switch, in the rotating-wave and full frames.

use dqdgate::device_model::DeviceParams;
use dqdgate::dynamics::Integrator;
use dqdgate::experiments::{bgate_trajectory, simulate_bgate};

fn main() -> dqdgate::Result<()> {
    let params = DeviceParams::default();
    for rwa in [true, false] {
        let run = simulate_bgate(&params, rwa, 4.0, Integrator::Magnus4)?;
        println!(
            "{:<8} T = {:.2} ns, switch at {:.2} ns | B1 {:.2e}  B2 {:.2e}  B {:.2e} | state infidelity {:.2e}",
            if rwa { "RWA" } else { "full" },
            run.design.schedule.duration * 1e9,
            run.design.split * 1e9,
            run.first_distance,
            run.second_distance,
            run.total_distance,
            run.state_infidelity,
        );
    }
    println!("populations from (|00> + |01>)/sqrt 2 (full frame):");
    for (t, psi) in bgate_trajectory(&params, false, 9, Integrator::Magnus4)? {
        let p: Vec<String> = psi.iter().map(|a| format!("{:.3}", a.norm_sqr())).collect();
        println!("  t = {:6.2} ns  {}", t * 1e9, p.join("  "));
    }
    Ok(())
}
