//! Spin-qubit double-dot Hamiltonians, rotating frames and the per-scheme frame Hamiltonians.
//!
//! Basis order is |00>, |01>, |10>, |11>; all frequencies are angular (rad/s).

mod params;

pub use params::{DeviceParams, DeviceParamsFile};

use serde::{Deserialize, Serialize};

use crate::algebra::{Mat4, C64, I, ZERO};
use crate::dynamics::TimeDependentHamiltonian;
use crate::inverse_engineering::PhysicalControls;
use crate::pulse_designs::PulseSchedule;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LabControls {
    pub exchange: f64,
    pub drive_left: f64,
    pub drive_right: f64,
}

/// Full lab-frame Hamiltonian with exchange J and transverse fields on both dots.
pub fn lab_hamiltonian(zeeman_mean: f64, zeeman_difference: f64, c: &LabControls) -> Mat4 {
    let (ez, dez, j) = (zeeman_mean, zeeman_difference, c.exchange);
    let (bl, br) = (c.drive_left, c.drive_right);
    let r = |x: f64| C64::new(x, 0.0);
    Mat4::from_rows([
        [r(ez), -I * br, -I * bl, ZERO],
        [I * br, r(-(dez + j) / 2.0), r(j / 2.0), -I * bl],
        [I * bl, r(j / 2.0), r((dez - j) / 2.0), -I * br],
        [ZERO, I * bl, I * br, r(-ez)],
    ])
}

/// Weak-exchange form used for the B gate: left drive off, no exchange shift on the diagonal.
pub fn weak_exchange_hamiltonian(zeeman_mean: f64, zeeman_difference: f64, exchange: f64, drive_right: f64) -> Mat4 {
    let mut h = lab_hamiltonian(zeeman_mean, zeeman_difference, &LabControls { exchange, drive_left: 0.0, drive_right });
    h[(1, 1)] = C64::new(-zeeman_difference / 2.0, 0.0);
    h[(2, 2)] = C64::new(zeeman_difference / 2.0, 0.0);
    h
}

/// Rotating frame U(t) = diag(exp(-i lambda_k t)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub energies: [f64; 4],
}

impl FrameSpec {
    /// Frame that removes the Zeeman difference from the {01, 10} block only.
    pub fn exchange_block(zeeman_difference: f64) -> Self {
        Self { energies: [0.0, -zeeman_difference / 2.0, zeeman_difference / 2.0, 0.0] }
    }

    /// Frame rotating both qubits at their carriers.
    pub fn qubit_carriers(zeeman_mean: f64, zeeman_difference: f64) -> Self {
        Self { energies: [zeeman_mean, -zeeman_difference / 2.0, zeeman_difference / 2.0, -zeeman_mean] }
    }

    pub fn unitary(&self, t: f64) -> Mat4 {
        Mat4::diag(self.energies.map(|l| C64::from_polar(1.0, -l * t)))
    }

    /// U^dag H U - i U^dag dU/dt.
    pub fn transform(&self, h: &Mat4, t: f64) -> Mat4 {
        let ph = self.energies.map(|l| C64::from_polar(1.0, l * t));
        let mut out = Mat4::from_fn(|r, c| ph[r] * h[(r, c)] * ph[c].conj());
        for k in 0..4 {
            out[(k, k)] -= self.energies[k];
        }
        out
    }

    /// Largest level spacing, rad/s.
    pub fn max_spacing(&self) -> f64 {
        let e = self.energies;
        let mut m: f64 = 0.0;
        for a in e {
            for b in e {
                m = m.max((a - b).abs());
            }
        }
        m
    }
}

/// Which rotating frame and RWA rule a scheme uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Fsim,
    BGate,
    Geometric,
}

impl Scheme {
    pub fn frame(&self, controls: &PhysicalControls) -> FrameSpec {
        match self {
            Scheme::Fsim | Scheme::Geometric => FrameSpec::exchange_block(controls.frame_zeeman_difference),
            Scheme::BGate => FrameSpec::qubit_carriers(controls.frame_zeeman_mean, controls.frame_zeeman_difference),
        }
    }
}

/// fSim frame Hamiltonian; the RWA drops the 2 dEz counter-rotating part of the exchange coupling.
pub fn fsim_frame_hamiltonian(controls: &PhysicalControls, schedule: &PulseSchedule, t: f64, rwa: bool) -> Mat4 {
    scheme_hamiltonian(Scheme::Fsim, controls, schedule, t, rwa)
}

pub fn bgate_frame_hamiltonian(controls: &PhysicalControls, schedule: &PulseSchedule, t: f64, rwa: bool) -> Mat4 {
    scheme_hamiltonian(Scheme::BGate, controls, schedule, t, rwa)
}

/// Geometric-scheme frame Hamiltonian, shifted by J(t)/2 so the {01, 10} diagonal carries only detuning.
pub fn geometric_frame_hamiltonian(controls: &PhysicalControls, schedule: &PulseSchedule, t: f64, rwa: bool) -> Mat4 {
    scheme_hamiltonian(Scheme::Geometric, controls, schedule, t, rwa)
}

pub fn scheme_hamiltonian(
    scheme: Scheme,
    controls: &PhysicalControls,
    schedule: &PulseSchedule,
    t: f64,
    rwa: bool,
) -> Mat4 {
    let sample = schedule.sample(t);
    let (ez, dez) = (controls.zeeman_mean, controls.zeeman_difference);
    let frame = scheme.frame(controls);
    let coupling = C64::from_polar(sample.envelope / 2.0, sample.phase);
    let mut h = match scheme {
        Scheme::Fsim | Scheme::Geometric => {
            let lab = lab_hamiltonian(ez, dez, &LabControls { exchange: sample.exchange, ..Default::default() });
            frame.transform(&lab, t)
        }
        Scheme::BGate => {
            let drive = sample.drive.map_or(0.0, |d| 2.0 * d.amplitude * (d.carrier * t - d.phase).cos());
            frame.transform(&weak_exchange_hamiltonian(ez, dez, sample.exchange, drive), t)
        }
    };
    if rwa {
        h[(1, 2)] = coupling;
        h[(2, 1)] = coupling.conj();
        if scheme == Scheme::BGate {
            let d = sample
                .drive
                .map_or(ZERO, |d| -I * C64::from_polar(d.amplitude, d.phase));
            for (r, c) in [(0, 1), (2, 3)] {
                h[(r, c)] = d;
                h[(c, r)] = d.conj();
            }
        }
    }
    match scheme {
        Scheme::Fsim => h - Mat4::identity() * controls.frame_zeeman_mean,
        Scheme::Geometric => h + Mat4::identity() * (sample.exchange / 2.0),
        Scheme::BGate => h,
    }
}

/// Largest frequency present in a scheme Hamiltonian, rad/s.
pub fn scheme_max_frequency(scheme: Scheme, controls: &PhysicalControls, schedule: &PulseSchedule, rwa: bool) -> f64 {
    let carrier = schedule.max_carrier();
    if rwa {
        carrier
    } else {
        scheme.frame(controls).max_spacing() + carrier
    }
}

/// A scheme Hamiltonian bound to its controls and pulse schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameHamiltonian {
    pub scheme: Scheme,
    pub controls: PhysicalControls,
    pub schedule: PulseSchedule,
    pub rwa: bool,
}

impl TimeDependentHamiltonian for FrameHamiltonian {
    fn at(&self, t: f64) -> Mat4 {
        scheme_hamiltonian(self.scheme, &self.controls, &self.schedule, t, self.rwa)
    }

    fn duration(&self) -> f64 {
        self.schedule.duration
    }

    fn max_frequency(&self) -> f64 {
        scheme_max_frequency(self.scheme, &self.controls, &self.schedule, self.rwa)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.schedule.breakpoints()
    }
}
