use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::trajectory::{BFactorKind, ExchangeProfile};
use crate::algebra::Mat4;
use crate::error::{Error, Result};
use crate::kak;

/// Weighting of an integral constraint on the exchange envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConstraintWeight {
    /// Integral of j.
    Flat,
    /// Integral of j(t) cos(omega t).
    Cosine { omega: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralConstraint {
    pub start: f64,
    pub end: f64,
    pub weight: ConstraintWeight,
    pub target: f64,
}

impl IntegralConstraint {
    pub fn evaluate(&self, profile: &dyn ExchangeProfile) -> f64 {
        match self.weight {
            ConstraintWeight::Flat => profile.envelope_integral(self.end) - profile.envelope_integral(self.start),
            ConstraintWeight::Cosine { omega } => {
                profile.carrier_integral(self.end, omega) - profile.carrier_integral(self.start, omega)
            }
        }
    }

    pub fn residual(&self, profile: &dyn ExchangeProfile) -> f64 {
        self.evaluate(profile) - self.target
    }
}

/// Transverse drive requirement: B_y^1(t) = ratio * j(t), applied with the given phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveRequirement {
    pub ratio: f64,
    pub phase: f64,
    /// Carrier of the lab-frame drive, rad/s.
    pub carrier: f64,
}

/// Physical control parameters solved from a gate target.
///
/// `zeeman_*` are the device frequencies; `frame_*` are the designed values that
/// define the rotating frame and pulse carriers. They coincide unless a detuning error is injected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalControls {
    pub zeeman_mean: f64,
    pub zeeman_difference: f64,
    pub frame_zeeman_mean: f64,
    pub frame_zeeman_difference: f64,
    pub duration: f64,
    pub constraints: Vec<IntegralConstraint>,
    pub drive: Option<DriveRequirement>,
    /// Whether the E_z = Xi/(2T) + pi/T branch was taken, which yields fSim(vartheta + pi, Xi).
    pub completion_shift: bool,
}

impl PhysicalControls {
    pub fn max_constraint_residual(&self, profile: &dyn ExchangeProfile) -> f64 {
        self.constraints.iter().map(|c| c.residual(profile).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateKind {
    Fsim { swap_angle: f64, phase: f64 },
    B1 { strength: f64 },
    B2 { strength: f64 },
    B,
    ISwapLike { swap_angle: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateTarget {
    pub kind: GateKind,
    pub duration: f64,
}

impl GateTarget {
    pub fn new(kind: GateKind, duration: f64) -> Result<Self> {
        if let GateKind::Fsim { swap_angle, phase } = kind {
            check_fsim_range(swap_angle, phase)?;
        }
        if !(duration > 0.0) {
            return Err(Error::InvalidParameter(format!("gate duration must be positive, got {duration}")));
        }
        Ok(Self { kind, duration })
    }

    pub fn matrix(&self) -> Mat4 {
        match self.kind {
            GateKind::Fsim { swap_angle, phase } => fsim_gate(swap_angle, phase),
            GateKind::ISwapLike { swap_angle } => fsim_gate(swap_angle, 0.0),
            GateKind::B1 { strength } => kak::b_factor(BFactorKind::B1, strength),
            GateKind::B2 { strength } => kak::b_factor(BFactorKind::B2, strength),
            GateKind::B => kak::b_gate(),
        }
    }
}

pub fn fsim_gate(swap_angle: f64, phase: f64) -> Mat4 {
    use crate::algebra::C64;
    let (s, c) = swap_angle.sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = C64::new(1.0, 0.0);
    m[(1, 1)] = C64::new(c, 0.0);
    m[(2, 2)] = C64::new(c, 0.0);
    m[(1, 2)] = C64::new(0.0, -s);
    m[(2, 1)] = C64::new(0.0, -s);
    m[(3, 3)] = C64::from_polar(1.0, phase);
    m
}

pub(crate) fn check_fsim_range(swap_angle: f64, phase: f64) -> Result<()> {
    let eps = 1e-12;
    if !(swap_angle.abs() <= FRAC_PI_2 + eps) || !(phase.abs() <= PI + eps) {
        return Err(Error::InvalidParameter(format!(
            "fSim parameters ({swap_angle}, {phase}) outside |swap| <= pi/2, |phase| <= pi"
        )));
    }
    Ok(())
}

/// Control frequencies and integral constraints realizing fSim(swap_angle, phase) in time T
/// with Zeeman difference 2 N pi / T.
pub fn solve_fsim_controls(
    swap_angle: f64,
    phase: f64,
    duration: f64,
    repetitions: u32,
    completion_shift: bool,
) -> Result<PhysicalControls> {
    check_fsim_range(swap_angle, phase)?;
    if !(duration > 0.0) {
        return Err(Error::InvalidParameter(format!("gate duration must be positive, got {duration}")));
    }
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetition count must be at least 1".into()));
    }
    let mut zeeman_mean = phase / (2.0 * duration);
    if completion_shift {
        zeeman_mean += PI / duration;
    }
    let omega = 2.0 * repetitions as f64 * PI / duration;
    Ok(PhysicalControls {
        zeeman_mean,
        zeeman_difference: omega,
        frame_zeeman_mean: zeeman_mean,
        frame_zeeman_difference: omega,
        duration,
        constraints: vec![
            IntegralConstraint { start: 0.0, end: duration, weight: ConstraintWeight::Flat, target: 2.0 * swap_angle },
            IntegralConstraint {
                start: 0.0,
                end: duration,
                weight: ConstraintWeight::Cosine { omega },
                target: -phase / 2.0,
            },
        ],
        drive: None,
        completion_shift,
    })
}

/// Drive-to-exchange ratio cot(arcsin(-strength/pi))/4 of a B-factor.
pub fn b_drive_ratio(strength: f64) -> Result<f64> {
    if !(strength < PI) {
        return Err(Error::Domain { what: "B-factor strength (must be below pi)", value: strength });
    }
    if strength == 0.0 {
        return Err(Error::Singular("B-factor strength 0 puts the drive ratio on a cotangent pole".into()));
    }
    if !(strength > 0.0) {
        return Err(Error::Domain { what: "B-factor strength (must be positive)", value: strength });
    }
    let angle = (-strength / PI).asin();
    Ok(angle.cos() / angle.sin() / 4.0)
}

/// Controls for a B1/B2 factor: the exchange integral -4 strength over [start, end],
/// with qubit carriers `omega1 < omega2`.
pub fn solve_bgate_controls(
    kind: BFactorKind,
    strength: f64,
    window: (f64, f64),
    omega1: f64,
    omega2: f64,
) -> Result<PhysicalControls> {
    if !(omega2 > omega1) {
        return Err(Error::InvalidParameter(format!("carrier ordering requires omega2 > omega1 ({omega1}, {omega2})")));
    }
    if !(window.1 > window.0) {
        return Err(Error::InvalidParameter("empty time window".into()));
    }
    let ratio = b_drive_ratio(strength)?;
    let phase = match kind {
        BFactorKind::B1 => FRAC_PI_2,
        BFactorKind::B2 => 0.0,
    };
    let mean = (omega1 + omega2) / 2.0;
    let diff = omega2 - omega1;
    Ok(PhysicalControls {
        zeeman_mean: mean,
        zeeman_difference: diff,
        frame_zeeman_mean: mean,
        frame_zeeman_difference: diff,
        duration: window.1 - window.0,
        constraints: vec![IntegralConstraint {
            start: window.0,
            end: window.1,
            weight: ConstraintWeight::Flat,
            target: -4.0 * strength,
        }],
        drive: Some(DriveRequirement { ratio, phase, carrier: omega2 }),
        completion_shift: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phase_distance;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn fsim_controls_frequencies() {
        let t = 45e-9;
        let c = solve_fsim_controls(FRAC_PI_4, FRAC_PI_2, t, 1, false).unwrap();
        assert!((c.zeeman_mean - FRAC_PI_2 / (2.0 * t)).abs() < 1e-6);
        assert!((c.zeeman_difference - 2.0 * PI / t).abs() < 1e-3);
        // 2 E_z is the 00-11 splitting, near 2 pi x 5.6 MHz at 45 ns
        let two_ez_mhz = 2.0 * c.zeeman_mean / (2.0 * PI) / 1e6;
        assert!((two_ez_mhz - 5.6).abs() < 0.05, "{two_ez_mhz}");
        let dez_mhz = c.zeeman_difference / (2.0 * PI) / 1e6;
        assert!((dez_mhz - 22.2).abs() < 0.1, "{dez_mhz}");
    }

    #[test]
    fn zero_phase_means_zero_mean_zeeman() {
        let c = solve_fsim_controls(0.3, 0.0, 1e-7, 2, false).unwrap();
        assert_eq!(c.zeeman_mean, 0.0);
    }

    #[test]
    fn completion_branch_shifts_mean() {
        let c = solve_fsim_controls(0.3, 1.0, 1.0, 1, true).unwrap();
        assert!((c.zeeman_mean - (0.5 + PI)).abs() < 1e-15);
        assert!(c.completion_shift);
    }

    #[test]
    fn fsim_controls_reject_bad_input() {
        assert!(solve_fsim_controls(0.3, 1.0, 0.0, 1, false).is_err());
        assert!(solve_fsim_controls(0.3, 1.0, -1.0, 1, false).is_err());
        assert!(solve_fsim_controls(2.0, 1.0, 1.0, 1, false).is_err());
        assert!(solve_fsim_controls(0.3, 1.0, 1.0, 0, false).is_err());
    }

    #[test]
    fn bgate_constraint_values() {
        let c = solve_bgate_controls(BFactorKind::B1, FRAC_PI_4, (0.0, 1.0), 1.0, 2.0).unwrap();
        assert!((c.constraints[0].target + PI).abs() < 1e-15);
        let d = c.drive.unwrap();
        assert_eq!(d.phase, FRAC_PI_2);
        assert!((c.zeeman_mean - 1.5).abs() < 1e-15 && (c.zeeman_difference - 1.0).abs() < 1e-15);
        let c2 = solve_bgate_controls(BFactorKind::B2, PI / 8.0, (0.0, 1.0), 1.0, 2.0).unwrap();
        assert_eq!(c2.drive.unwrap().phase, 0.0);
    }

    #[test]
    fn bgate_domain_and_pole() {
        assert!(matches!(b_drive_ratio(PI), Err(Error::Domain { .. })));
        assert!(matches!(b_drive_ratio(4.0), Err(Error::Domain { .. })));
        assert!(matches!(b_drive_ratio(0.0), Err(Error::Singular(_))));
        assert!(b_drive_ratio(1e-9).unwrap().abs() > 1e7);
        assert!(solve_bgate_controls(BFactorKind::B1, 0.5, (0.0, 1.0), 2.0, 1.0).is_err());
    }

    #[test]
    fn iswap_like_is_fsim_without_phase() {
        let t = GateTarget::new(GateKind::ISwapLike { swap_angle: 0.4 }, 1.0).unwrap();
        assert!(phase_distance(&t.matrix(), &fsim_gate(0.4, 0.0)) < 1e-15);
        assert!(GateTarget::new(GateKind::Fsim { swap_angle: 0.1, phase: 4.0 }, 1.0).is_err());
    }
}
