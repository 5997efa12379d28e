//! Propagating the engineered Hamiltonian reproduces the closed-form trajectory, which ends on fSim.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::sync::Arc;

use dqdgate::algebra::phase_distance;
use dqdgate::dynamics::{propagate_unitary, FnHamiltonian, Integrator};
use dqdgate::inverse_engineering::{
    fsim_gate, parameterized_hamiltonian, parameterized_propagator, solve_fsim_controls, AzimuthTrajectory,
};
use dqdgate::pulse_designs::fsim_rectangular;

fn main() -> dqdgate::Result<()> {
    let (swap, phase, t, n) = (FRAC_PI_4, FRAC_PI_2, 45e-9, 2);
    let controls = solve_fsim_controls(swap, phase, t, n, false)?;
    let schedule = Arc::new(fsim_rectangular(swap, phase, t, n)?);
    let traj = AzimuthTrajectory::fsim(schedule.clone(), controls.zeeman_mean, controls.zeeman_difference);

    let closed = parameterized_propagator(&traj, t)?;
    println!("closed form vs fSim(pi/4, pi/2): {:.2e}", phase_distance(&closed, &fsim_gate(swap, phase)));

    let tr = traj.clone();
    let h = FnHamiltonian {
        f: move |s| parameterized_hamiltonian(&tr, s),
        duration: t,
        max_frequency: controls.zeeman_difference.abs() + 2.0 * schedule.peak_envelope(),
        breakpoints: schedule.breakpoints(),
    };
    for steps in [250, 1000, 4000] {
        let r = propagate_unitary(&h, steps, Integrator::Magnus4)?;
        println!("{steps:>5} Magnus4 steps: |U_num - U_closed|_F = {:.2e}", (r.operator - closed).frobenius_norm());
    }
    Ok(())
}
