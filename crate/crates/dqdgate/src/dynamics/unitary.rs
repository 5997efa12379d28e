use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{step_grid, TimeDependentHamiltonian};
use crate::algebra::{Mat4, C64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// exp(-i H(t + dt/2) dt), second order.
    #[default]
    Midpoint,
    /// Two-exponential commutator-free Magnus step on Gauss nodes, fourth order.
    Magnus4,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub operator: Mat4,
    pub steps: usize,
    pub unitarity_defect: f64,
}

/// Minimum step count keeping dt <= 1/(50 f_max) over [t0, t1].
pub fn required_steps(h: &dyn TimeDependentHamiltonian, t0: f64, t1: f64) -> usize {
    let f = h.max_frequency().abs() / TAU;
    ((50.0 * f * (t1 - t0)).ceil() as usize).max(1)
}

fn step(h: &dyn TimeDependentHamiltonian, t: f64, dt: f64, integrator: Integrator) -> Mat4 {
    match integrator {
        Integrator::Midpoint => h.at(t + 0.5 * dt).exp_i(dt),
        Integrator::Magnus4 => {
            let r = 3f64.sqrt() / 6.0;
            let h1 = h.at(t + (0.5 - r) * dt);
            let h2 = h.at(t + (0.5 + r) * dt);
            let (a1, a2) = (0.25 - r, 0.25 + r);
            let early = (h1 * a2 + h2 * a1).exp_i(dt);
            let late = (h1 * a1 + h2 * a2).exp_i(dt);
            late * early
        }
    }
}

pub fn propagate_unitary(h: &dyn TimeDependentHamiltonian, steps: usize, integrator: Integrator) -> Result<EvolutionResult> {
    propagate_unitary_window(h, 0.0, h.duration(), steps, integrator)
}

/// Propagator from t0 to t1 with at least `steps` steps.
pub fn propagate_unitary_window(
    h: &dyn TimeDependentHamiltonian,
    t0: f64,
    t1: f64,
    steps: usize,
    integrator: Integrator,
) -> Result<EvolutionResult> {
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidParameter(format!("invalid propagation window [{t0}, {t1}]")));
    }
    let required = required_steps(h, t0, t1);
    if steps < required {
        return Err(Error::StepBudget { requested: steps, required });
    }
    let mut u = Mat4::identity();
    let mut taken = 0;
    for (a, b, n) in step_grid(t0, t1, &h.breakpoints(), steps) {
        let dt = (b - a) / n as f64;
        for k in 0..n {
            u = step(h, a + k as f64 * dt, dt, integrator) * u;
        }
        taken += n;
    }
    Ok(EvolutionResult { unitarity_defect: u.unitarity_defect(), operator: u, steps: taken })
}

/// State amplitudes at `samples` evenly spaced times including both ends.
pub fn propagate_state_trajectory(
    h: &dyn TimeDependentHamiltonian,
    psi0: [C64; 4],
    steps: usize,
    samples: usize,
    integrator: Integrator,
) -> Result<Vec<(f64, [C64; 4])>> {
    let samples = samples.max(2);
    let t_end = h.duration();
    let per = steps.div_ceil(samples - 1).max(1);
    let mut psi = psi0;
    let mut out = vec![(0.0, psi)];
    for k in 1..samples {
        let (a, b) = (t_end * (k - 1) as f64 / (samples - 1) as f64, t_end * k as f64 / (samples - 1) as f64);
        let required = required_steps(h, a, b);
        let piece = propagate_unitary_window(h, a, b, per.max(required), integrator)?;
        psi = piece.operator.apply(&psi);
        out.push((b, psi));
    }
    Ok(out)
}

const BASIS: [&str; 4] = ["00", "01", "10", "11"];

/// Writes t_ns, the four basis populations and the six coherence magnitudes |rho_ab|.
pub fn write_trajectory_csv(out: impl Write, trajectory: &[(f64, [C64; 4])]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t_ns".to_string()];
    header.extend(BASIS.iter().map(|b| format!("p{b}")));
    for a in 0..4 {
        for b in a + 1..4 {
            header.push(format!("c{}_{}", BASIS[a], BASIS[b]));
        }
    }
    w.write_record(&header)?;
    for (t, psi) in trajectory {
        let mut row = vec![format!("{:.6}", t * 1e9)];
        row.extend(psi.iter().map(|a| format!("{:.12}", a.norm_sqr())));
        for a in 0..4 {
            for b in a + 1..4 {
                row.push(format!("{:.12}", psi[a].norm() * psi[b].norm()));
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
