use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse_engineering::PhysicalControls;
use crate::pulse_designs::PulseSchedule;

/// Systematic control errors: exchange amplitude scaled by (1 + rabi), Zeeman splittings by (1 + detuning).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorInjection {
    pub rabi: f64,
    pub detuning: f64,
}

impl ErrorInjection {
    pub const MAX_MAGNITUDE: f64 = 0.1;

    pub fn new(rabi: f64, detuning: f64) -> Result<Self> {
        for (name, v) in [("Rabi error", rabi), ("detuning error", detuning)] {
            if !(v.abs() <= Self::MAX_MAGNITUDE + 1e-12) {
                return Err(Error::InvalidParameter(format!("{name} {v} outside [-0.1, 0.1]")));
            }
        }
        Ok(Self { rabi, detuning })
    }

    pub fn apply(&self, controls: &PhysicalControls, schedule: &PulseSchedule) -> (PhysicalControls, PulseSchedule) {
        (apply_detuning_error(controls, self.detuning), apply_rabi_error(schedule, self.rabi))
    }
}

pub fn apply_rabi_error(schedule: &PulseSchedule, delta: f64) -> PulseSchedule {
    schedule.with_envelope_scale(1.0 + delta)
}

/// Scales the device splittings; the frame and pulse carriers keep their designed values.
pub fn apply_detuning_error(controls: &PhysicalControls, epsilon: f64) -> PhysicalControls {
    let mut c = controls.clone();
    c.zeeman_mean *= 1.0 + epsilon;
    c.zeeman_difference *= 1.0 + epsilon;
    c
}
