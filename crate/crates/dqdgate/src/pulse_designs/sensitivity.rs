use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::designs::{fsim_polynomial, PolynomialLayout};
use super::schedule::PulseSchedule;
use crate::algebra::{simpson_complex, C64, DEFAULT_PANELS};
use crate::error::{Error, Result};
use crate::inverse_engineering::ExchangeProfile;

/// Second-order sensitivity of the fidelity to the counter-rotating exchange term,
/// |int exp(-2 i theta) j sin(2 dEz t) i/2 dt|^2 with theta the running integral of j.
pub fn error_sensitivity(schedule: &PulseSchedule, zeeman_difference: f64) -> f64 {
    let integrand = |t: f64| {
        let theta = schedule.envelope_integral(t);
        C64::from_polar(1.0, -2.0 * theta)
            * C64::new(0.0, 0.5)
            * (schedule.envelope(t) * (2.0 * zeeman_difference * t).sin())
    };
    let panels = DEFAULT_PANELS.max(
        (zeeman_difference.abs() * schedule.duration / PI * 200.0).ceil() as usize,
    );
    simpson_complex(integrand, 0.0, schedule.duration, &schedule.breakpoints(), panels).norm_sqr()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaScan {
    pub etas: Vec<f64>,
    /// None where the pulse coefficients are singular.
    pub sensitivity: Vec<Option<f64>>,
    pub best_eta: f64,
    pub best_sensitivity: f64,
}

/// Scans eta for the single-repetition polynomial pulse, picking the minimum of the sensitivity.
/// Near-ties go to the smaller |eta|.
pub fn optimize_eta(swap_angle: f64, phase: f64, etas: &[f64]) -> Result<EtaScan> {
    let sensitivity: Vec<Option<f64>> = etas
        .iter()
        .map(|&eta| {
            fsim_polynomial(swap_angle, phase, 1.0, 1, eta, PolynomialLayout::Repeated)
                .ok()
                .map(|s| error_sensitivity(&s, 2.0 * PI))
        })
        .collect();
    let mut best: Option<(f64, f64)> = None;
    for (&eta, q) in etas.iter().zip(&sensitivity) {
        let Some(q) = *q else { continue };
        best = match best {
            None => Some((eta, q)),
            Some((be, bq)) => {
                let tie = (q - bq).abs() <= 1e-12 * bq.abs().max(1e-300);
                if (!tie && q < bq) || (tie && eta.abs() < be.abs()) {
                    Some((eta, q))
                } else {
                    Some((be, bq))
                }
            }
        };
    }
    let (best_eta, best_sensitivity) =
        best.ok_or_else(|| Error::Singular("every eta in the scan gives a singular pulse".into()))?;
    Ok(EtaScan { etas: etas.to_vec(), sensitivity, best_eta, best_sensitivity })
}
