use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::polynomial::Polynomial;
use super::schedule::{DriveTone, PulseSchedule, Segment};
use crate::error::{Error, Result};
use crate::inverse_engineering::{
    b_drive_ratio, check_fsim_range, solve_bgate_controls, solve_fsim_controls, BFactorKind, ConstraintWeight,
    IntegralConstraint, PhysicalControls,
};

/// How a polynomial pulse is laid out for repetition count N.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolynomialLayout {
    /// The N = 1 shape compressed to T/N and tiled N times.
    #[default]
    Repeated,
    /// One polynomial over [0, T] with coefficients solved at N.
    SingleSpan,
}

fn flat_segment(start: f64, end: f64, level: f64, carrier: f64, phase: f64) -> Segment {
    Segment { start, end, envelope: Polynomial::constant(level), carrier, phase, drive: None }
}

fn tile(unit: &[(f64, f64, Polynomial)], duration: f64, repetitions: u32, carrier: f64) -> Vec<Segment> {
    let period = duration / repetitions as f64;
    let mut out = Vec::new();
    for k in 0..repetitions {
        let base = k as f64 * period;
        for (a, b, p) in unit {
            let end = if k + 1 == repetitions && *b == 1.0 { duration } else { base + b * period };
            out.push(Segment { start: base + a * period, end, envelope: p.clone(), carrier, phase: 0.0, drive: None });
        }
    }
    out
}

/// Piecewise-constant fSim pulse: levels (8 vartheta -/+ Xi pi)/(4T) on the outer/inner halves,
/// compressed and repeated N times. Carrier 2 N pi / T.
pub fn fsim_rectangular(swap_angle: f64, phase: f64, duration: f64, repetitions: u32) -> Result<PulseSchedule> {
    solve_fsim_controls(swap_angle, phase, duration, repetitions, false)?;
    let outer = (8.0 * swap_angle - phase * PI) / (4.0 * duration);
    let inner = (8.0 * swap_angle + phase * PI) / (4.0 * duration);
    let unit = [
        (0.0, 0.25, Polynomial::constant(outer)),
        (0.25, 0.75, Polynomial::constant(inner)),
        (0.75, 1.0, Polynomial::constant(outer)),
    ];
    let carrier = 2.0 * repetitions as f64 * PI / duration;
    PulseSchedule::new(format!("fsim-rect-N{repetitions}"), tile(&unit, duration, repetitions, carrier))
}

/// (alpha, beta) of the sextic pulse for vartheta, Xi at repetition N and shape parameter eta.
pub fn polynomial_coefficients(swap_angle: f64, phase: f64, repetitions: u32, eta: f64) -> Result<(f64, f64)> {
    let singular = |why: &str| {
        Error::Singular(format!(
            "{why} (eta = {eta}, N = {repetitions}, Xi/vartheta = {})",
            phase / swap_angle
        ))
    };
    if swap_angle == 0.0 {
        return Err(singular("pulse coefficients need a nonzero swap angle"));
    }
    let np = repetitions as f64 * PI;
    let ratio = phase / swap_angle;
    let a = -(6300.0 + 12600.0 * eta);
    let b = 60.0 * eta + 35.0;
    let den = 18900.0 * eta + a * np.powi(2) + b * np.powi(6) * ratio;
    let num = 2520.0 * np.powi(2) - 14.0 * np.powi(6) * ratio;
    if den.abs() < 1e-9 * num.abs().max(1.0) {
        return Err(singular("beta denominator vanishes"));
    }
    let beta = num / den;
    let alpha_den = 14.0 + 35.0 * beta + 60.0 * eta * beta;
    if alpha_den.abs() < 1e-12 * beta.abs().max(1.0) {
        return Err(singular("alpha denominator vanishes"));
    }
    Ok((840.0 * swap_angle / alpha_den, beta))
}

/// The dimensionless shape j(s) T for given (alpha, beta, eta).
pub fn polynomial_shape(alpha: f64, beta: f64, eta: f64) -> Polynomial {
    Polynomial::new(vec![
        0.0,
        0.0,
        alpha * (1.0 + 2.0 * beta + 3.0 * eta * beta),
        -alpha * (3.0 * beta + 4.0 * eta * beta + 2.0),
        alpha,
        alpha * beta,
        alpha * eta * beta,
    ])
}

pub fn fsim_polynomial(
    swap_angle: f64,
    phase: f64,
    duration: f64,
    repetitions: u32,
    eta: f64,
    layout: PolynomialLayout,
) -> Result<PulseSchedule> {
    solve_fsim_controls(swap_angle, phase, duration, repetitions, false)?;
    let carrier = 2.0 * repetitions as f64 * PI / duration;
    let segments = match layout {
        PolynomialLayout::Repeated => {
            let (a, b) = polynomial_coefficients(swap_angle, phase, 1, eta)?;
            let p = polynomial_shape(a, b, eta).scaled(1.0 / duration);
            tile(&[(0.0, 1.0, p)], duration, repetitions, carrier)
        }
        PolynomialLayout::SingleSpan => {
            let (a, b) = polynomial_coefficients(swap_angle, phase, repetitions, eta)?;
            let p = polynomial_shape(a, b, eta).scaled(1.0 / duration);
            vec![Segment { start: 0.0, end: duration, envelope: p, carrier, phase: 0.0, drive: None }]
        }
    };
    PulseSchedule::new(format!("fsim-poly-N{repetitions}"), segments)
}

/// Four-quarter geometric+dynamical fSim pulse with carrier 4 pi / T.
pub fn fsim_geometric(swap_angle: f64, phase: f64, duration: f64) -> Result<PulseSchedule> {
    check_fsim_range(swap_angle, phase)?;
    let c = swap_angle.cos();
    if c.abs() < 1e-12 {
        return Err(Error::Singular(format!("geometric pulse needs cos(vartheta) != 0 (vartheta = {swap_angle})")));
    }
    let t = duration;
    let omega = 4.0 * PI / t;
    let edge = 2.0 * PI / t;
    let up = (4.0 * PI * c + PI * phase) / (2.0 * c * t);
    let down = (4.0 * PI * c - PI * phase) / (2.0 * c * t);
    let psi = swap_angle - FRAC_PI_2;
    PulseSchedule::new(
        "fsim-geometric",
        vec![
            flat_segment(0.0, t / 4.0, edge, omega, FRAC_PI_2),
            flat_segment(t / 4.0, t / 2.0, up, omega, psi),
            flat_segment(t / 2.0, 3.0 * t / 4.0, down, omega, psi),
            flat_segment(3.0 * t / 4.0, t, edge, omega, FRAC_PI_2),
        ],
    )
}

/// Frequencies and integral constraints of the geometric scheme.
pub fn geometric_controls(swap_angle: f64, phase: f64, duration: f64) -> Result<PhysicalControls> {
    let mut c = solve_fsim_controls(swap_angle, phase, duration, 2, false)?;
    let t = duration;
    let flat = |a: f64, b: f64, target: f64| IntegralConstraint {
        start: a,
        end: b,
        weight: ConstraintWeight::Flat,
        target,
    };
    c.constraints = vec![flat(0.0, t / 4.0, FRAC_PI_2), flat(t / 4.0, 3.0 * t / 4.0, PI), flat(3.0 * t / 4.0, t, FRAC_PI_2)];
    Ok(c)
}

/// Rectangular B gate: B1(pi/4) over [0, 2T/3] then B2(pi/8) over [2T/3, T].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BGateDesign {
    pub schedule: PulseSchedule,
    pub first: PhysicalControls,
    pub second: PhysicalControls,
    pub split: f64,
}

pub fn bgate_rectangular(duration: f64, omega1: f64, omega2: f64) -> Result<BGateDesign> {
    if !(duration > 0.0) {
        return Err(Error::InvalidParameter(format!("gate duration must be positive, got {duration}")));
    }
    let split = 2.0 * duration / 3.0;
    let first = solve_bgate_controls(BFactorKind::B1, PI / 4.0, (0.0, split), omega1, omega2)?;
    let second = solve_bgate_controls(BFactorKind::B2, PI / 8.0, (split, duration), omega1, omega2)?;
    let j = -3.0 * PI / (2.0 * duration);
    let segment = |c: &PhysicalControls, start: f64, end: f64| -> Result<Segment> {
        let d = c.drive.expect("B-factor controls carry a drive");
        Ok(Segment {
            start,
            end,
            envelope: Polynomial::constant(j),
            carrier: c.zeeman_difference,
            phase: 0.0,
            drive: Some(DriveTone { amplitude: Polynomial::constant(d.ratio * j), carrier: d.carrier, phase: d.phase }),
        })
    };
    let schedule =
        PulseSchedule::new("b-gate-rect", vec![segment(&first, 0.0, split)?, segment(&second, split, duration)?])?;
    Ok(BGateDesign { schedule, first, second, split })
}

/// Drive amplitude of a single B-factor for a given exchange envelope value.
pub fn b_drive_amplitude(strength: f64, envelope: f64) -> Result<f64> {
    Ok(b_drive_ratio(strength)? * envelope)
}
