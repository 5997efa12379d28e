//! End-to-end pipelines: pulse design, frame Hamiltonian, propagation and scoring.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_eigenvalues, outer, phase_distance, unvectorize, vectorize, Mat4, C64};
use crate::device_model::{DeviceParams, FrameHamiltonian, Scheme};
use crate::dynamics::{
    lindblad_channel, propagate_state_trajectory, propagate_unitary, propagate_unitary_window, required_steps,
    Dephasing, DephasingForm, ErrorInjection, Integrator, TimeDependentHamiltonian,
};
use crate::error::Result;
use crate::fidelity::{average_fidelity, build_grid, Channel, FidelityConvention, FidelityReport, ReportMeta};
use crate::inverse_engineering::{fsim_gate, solve_fsim_controls, BFactorKind, PhysicalControls};
use crate::kak::{b_factor, b_gate};
use crate::pulse_designs::{
    bgate_rectangular, fsim_geometric, fsim_polynomial, fsim_rectangular, geometric_controls, BGateDesign,
    PolynomialLayout, PulseSchedule,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum FsimPulse {
    Rectangular,
    Polynomial { eta: f64, layout: PolynomialLayout },
    Geometric,
}

impl FsimPulse {
    pub fn label(&self) -> &'static str {
        match self {
            FsimPulse::Rectangular => "fsim_rect",
            FsimPulse::Polynomial { .. } => "fsim_poly",
            FsimPulse::Geometric => "fsim_geometric",
        }
    }
}

/// An fSim pulse design with its gate time fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsimDesign {
    pub pulse: FsimPulse,
    pub swap_angle: f64,
    pub phase: f64,
    /// Ignored by the geometric pulse, whose carrier is fixed at 4 pi / T.
    pub repetitions: u32,
    pub duration: f64,
}

impl FsimDesign {
    /// Chooses T so the exchange peak 2 max|j| equals `exchange_max`.
    pub fn with_exchange_limit(
        pulse: FsimPulse,
        swap_angle: f64,
        phase: f64,
        repetitions: u32,
        exchange_max: f64,
    ) -> Result<Self> {
        let unit = Self { pulse, swap_angle, phase, repetitions, duration: 1.0 };
        let duration = unit.schedule()?.duration_for_exchange_limit(exchange_max);
        Ok(Self { duration, ..unit })
    }

    pub fn schedule(&self) -> Result<PulseSchedule> {
        let (th, xi, t, n) = (self.swap_angle, self.phase, self.duration, self.repetitions);
        match self.pulse {
            FsimPulse::Rectangular => fsim_rectangular(th, xi, t, n),
            FsimPulse::Polynomial { eta, layout } => fsim_polynomial(th, xi, t, n, eta, layout),
            FsimPulse::Geometric => fsim_geometric(th, xi, t),
        }
    }

    pub fn controls(&self) -> Result<PhysicalControls> {
        match self.pulse {
            FsimPulse::Geometric => geometric_controls(self.swap_angle, self.phase, self.duration),
            _ => solve_fsim_controls(self.swap_angle, self.phase, self.duration, self.repetitions, false),
        }
    }

    pub fn scheme(&self) -> Scheme {
        match self.pulse {
            FsimPulse::Geometric => Scheme::Geometric,
            _ => Scheme::Fsim,
        }
    }

    pub fn target(&self) -> Mat4 {
        fsim_gate(self.swap_angle, self.phase)
    }

    pub fn hamiltonian(&self, errors: ErrorInjection, rwa: bool) -> Result<FrameHamiltonian> {
        let (controls, schedule) = errors.apply(&self.controls()?, &self.schedule()?);
        Ok(FrameHamiltonian { scheme: self.scheme(), controls, schedule, rwa })
    }

    pub fn meta(&self, errors: ErrorInjection) -> ReportMeta {
        let zeeman_difference = match self.pulse {
            FsimPulse::Geometric => 4.0 * PI / self.duration,
            _ => 2.0 * self.repetitions as f64 * PI / self.duration,
        };
        ReportMeta {
            scheme: self.pulse.label().into(),
            repetitions: match self.pulse {
                FsimPulse::Geometric => None,
                _ => Some(self.repetitions),
            },
            zeeman_difference,
            gate_time: self.duration,
            errors,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub grid_n: usize,
    pub convention: FidelityConvention,
    /// None switches decoherence off.
    pub dephasing: Option<Dephasing>,
    pub integrator: Integrator,
    /// Multiple of the resolution floor used as the step count.
    pub step_factor: f64,
    pub min_steps: usize,
}

impl SimulationOptions {
    pub fn with_device_dephasing(params: &DeviceParams) -> Self {
        Self { dephasing: Some(Dephasing::from_t2(params.t2, DephasingForm::AsWritten)), ..Self::default() }
    }

    pub fn steps_for(&self, h: &dyn TimeDependentHamiltonian) -> usize {
        let floor = required_steps(h, 0.0, h.duration());
        ((floor as f64 * self.step_factor).ceil() as usize).max(self.min_steps).max(floor)
    }
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            grid_n: 40,
            convention: FidelityConvention::Standard,
            dephasing: None,
            integrator: Integrator::Magnus4,
            step_factor: 4.0,
            min_steps: 2000,
        }
    }
}

/// Numerical health of one simulation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub unitarity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn healthy(&self) -> bool {
        self.unitarity_defect <= 1e-9 && self.trace_defect <= 1e-8 && self.min_eigenvalue >= -1e-9
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutcome {
    pub report: FidelityReport,
    pub diagnostics: Diagnostics,
}

/// Propagator or dephasing channel of a gate Hamiltonian.
pub fn gate_channel(h: &dyn TimeDependentHamiltonian, opts: &SimulationOptions) -> Result<(Channel, Diagnostics)> {
    let steps = opts.steps_for(h);
    match opts.dephasing {
        None => {
            let r = propagate_unitary(h, steps, opts.integrator)?;
            let d = Diagnostics { steps: r.steps, unitarity_defect: r.unitarity_defect, ..Default::default() };
            Ok((Channel::Unitary(r.operator), d))
        }
        Some(dephasing) => {
            let s = lindblad_channel(h, &dephasing, steps)?;
            Ok((Channel::Superoperator(Box::new(s)), Diagnostics { steps, ..Default::default() }))
        }
    }
}

/// Folds the trace defect and smallest eigenvalue of the channel outputs on `states` into `diag`.
/// Unitary channels are left untouched.
pub fn record_density_health(channel: &Channel, states: &[[C64; 4]], diag: &mut Diagnostics) {
    if let Channel::Superoperator(s) = channel {
        for psi in states {
            let rho = unvectorize(&s.apply(&vectorize(&outer(psi, psi))));
            diag.trace_defect = diag.trace_defect.max((rho.trace() - C64::new(1.0, 0.0)).norm());
            diag.min_eigenvalue = diag.min_eigenvalue.min(hermitian_eigenvalues(&rho)[0]);
        }
    }
}

/// Average fidelity of an fSim design against its ideal gate.
pub fn simulate_fsim(
    design: &FsimDesign,
    errors: ErrorInjection,
    rwa: bool,
    opts: &SimulationOptions,
) -> Result<SimulationOutcome> {
    let h = design.hamiltonian(errors, rwa)?;
    let (channel, mut diagnostics) = gate_channel(&h, opts)?;
    let grid = build_grid(opts.grid_n, [0.0; 3])?;
    record_density_health(&channel, &grid.states, &mut diagnostics);
    let report = average_fidelity(&channel, &design.target(), &grid, opts.convention)?.with_meta(design.meta(errors));
    Ok(SimulationOutcome { report, diagnostics })
}

/// Rectangular B-gate run with the device carriers.
#[derive(Clone, Debug, PartialEq)]
pub struct BGateRun {
    pub design: BGateDesign,
    pub first: Mat4,
    pub second: Mat4,
    pub total: Mat4,
    pub first_distance: f64,
    pub second_distance: f64,
    pub total_distance: f64,
    pub initial: [C64; 4],
    pub state_infidelity: f64,
    pub steps: usize,
    pub unitarity_defect: f64,
}

/// Gate time 3 pi / J_max, at which the exchange peak 2|j| reaches J_max.
pub fn bgate_duration(params: &DeviceParams) -> f64 {
    3.0 * PI / params.exchange_max
}

pub fn bgate_hamiltonian(params: &DeviceParams, rwa: bool) -> Result<FrameHamiltonian> {
    let (w1, w2) = params.qubit_carriers();
    let design = bgate_rectangular(bgate_duration(params), w1, w2)?;
    Ok(FrameHamiltonian { scheme: Scheme::BGate, controls: design.first.clone(), schedule: design.schedule, rwa })
}

/// Propagates both B-factor segments and scores them against B1(pi/4), B2(pi/8) and B.
pub fn simulate_bgate(params: &DeviceParams, rwa: bool, step_factor: f64, integrator: Integrator) -> Result<BGateRun> {
    let (w1, w2) = params.qubit_carriers();
    let design = bgate_rectangular(bgate_duration(params), w1, w2)?;
    let h = FrameHamiltonian { scheme: Scheme::BGate, controls: design.first.clone(), schedule: design.schedule.clone(), rwa };
    let t = h.duration();
    let steps_in = |a: f64, b: f64| ((required_steps(&h, a, b) as f64 * step_factor).ceil() as usize).max(200);
    let r1 = propagate_unitary_window(&h, 0.0, design.split, steps_in(0.0, design.split), integrator)?;
    let r2 = propagate_unitary_window(&h, design.split, t, steps_in(design.split, t), integrator)?;
    let total = r2.operator * r1.operator;
    let h2 = FRAC_1_SQRT_2;
    let initial = [C64::new(h2, 0.0), C64::new(h2, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let ideal = b_gate().apply(&initial);
    let got = total.apply(&initial);
    let overlap = crate::algebra::inner(&ideal, &got).norm_sqr();
    Ok(BGateRun {
        first_distance: phase_distance(&r1.operator, &b_factor(BFactorKind::B1, PI / 4.0)),
        second_distance: phase_distance(&r2.operator, &b_factor(BFactorKind::B2, PI / 8.0)),
        total_distance: phase_distance(&total, &b_gate()),
        first: r1.operator,
        second: r2.operator,
        total,
        initial,
        state_infidelity: 1.0 - overlap,
        steps: r1.steps + r2.steps,
        unitarity_defect: total.unitarity_defect(),
        design,
    })
}

/// Population trajectory of the B gate from (|00> + |01>)/sqrt 2.
pub fn bgate_trajectory(
    params: &DeviceParams,
    rwa: bool,
    samples: usize,
    integrator: Integrator,
) -> Result<Vec<(f64, [C64; 4])>> {
    let h = bgate_hamiltonian(params, rwa)?;
    let h2 = FRAC_1_SQRT_2;
    let psi0 = [C64::new(h2, 0.0), C64::new(h2, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let steps = required_steps(&h, 0.0, h.duration()) * 2;
    propagate_state_trajectory(&h, psi0, steps, samples, integrator)
}

/// <b(t)| H_c(t) |b(t)> along the geometric-scheme evolution in the RWA frame,
/// with |b> = (|01> - |10>)/sqrt 2 and H_c the {01, 10} coupling block.
pub fn parallel_transport_profile(design: &FsimDesign, samples: usize) -> Result<Vec<(f64, f64)>> {
    let h = design.hamiltonian(ErrorInjection::default(), true)?;
    let t_end = h.duration();
    let h2 = FRAC_1_SQRT_2;
    let mut b = [C64::new(0.0, 0.0), C64::new(h2, 0.0), C64::new(-h2, 0.0), C64::new(0.0, 0.0)];
    let value = |t: f64, b: &[C64; 4]| {
        let hc = h.at(t);
        let (x, y) = (b[1], b[2]);
        (x.conj() * hc[(1, 2)] * y + y.conj() * hc[(2, 1)] * x).re
    };
    let mut out = Vec::with_capacity(samples);
    let mut prev = 0.0;
    for k in 1..=samples {
        let t = t_end * k as f64 / samples as f64;
        let steps = required_steps(&h, prev, t).max(8);
        let u = propagate_unitary_window(&h, prev, t, steps, Integrator::Magnus4)?.operator;
        b = u.apply(&b);
        // sample just inside the step so the value belongs to the segment the state evolved in
        out.push((t, value(t - 1e-9 * t_end, &b)));
        prev = t;
    }
    Ok(out)
}

/// {01, 10} block of the geometric-scheme propagator in the RWA frame.
pub fn geometric_subspace_propagator(design: &FsimDesign, integrator: Integrator) -> Result<[[C64; 2]; 2]> {
    let h = design.hamiltonian(ErrorInjection::default(), true)?;
    let steps = required_steps(&h, 0.0, h.duration()).max(4000);
    let u = propagate_unitary(&h, steps, integrator)?.operator;
    Ok([[u[(1, 1)], u[(1, 2)]], [u[(2, 1)], u[(2, 2)]]])
}
