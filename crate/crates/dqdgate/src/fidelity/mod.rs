//! Grid-averaged state fidelities of simulated gates against ideal targets.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{inner, outer, unvectorize, vectorize, Mat16, Mat4, Tolerances, C64};
use crate::dynamics::ErrorInjection;
use crate::error::{Error, Result};

/// Product states (cos a, sin a) x (cos b, sin b) on an n x n grid of angles in [0, 2 pi),
/// with relative phases on the |01>, |10>, |11> amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialStateGrid {
    pub n: usize,
    pub phases: [f64; 3],
    pub angles: Vec<(f64, f64)>,
    pub states: Vec<[C64; 4]>,
}

pub fn build_grid(n: usize, phases: [f64; 3]) -> Result<InitialStateGrid> {
    if n == 0 {
        return Err(Error::InvalidParameter("grid needs at least one sample per axis".into()));
    }
    let mut angles = Vec::with_capacity(n * n);
    let mut states = Vec::with_capacity(n * n);
    for i in 0..n {
        let a = TAU * i as f64 / n as f64;
        for k in 0..n {
            let b = TAU * k as f64 / n as f64;
            angles.push((a, b));
            states.push(product_state(a, b, phases));
        }
    }
    Ok(InitialStateGrid { n, phases, angles, states })
}

pub fn product_state(a: f64, b: f64, phases: [f64; 3]) -> [C64; 4] {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    [
        C64::new(ca * cb, 0.0),
        C64::from_polar(ca * sb, phases[0]),
        C64::from_polar(sa * cb, phases[1]),
        C64::from_polar(sa * sb, phases[2]),
    ]
}

/// A simulated gate: a propagator or a 16x16 transfer matrix on column-stacked densities.
#[derive(Clone, Debug, PartialEq)]
pub enum Channel {
    Unitary(Mat4),
    Superoperator(Box<Mat16>),
}

impl Channel {
    /// Overlap <psi_f| rho |psi_f> of the channel output with the target state.
    pub fn overlap(&self, psi0: &[C64; 4], target_state: &[C64; 4]) -> f64 {
        match self {
            Channel::Unitary(u) => inner(target_state, &u.apply(psi0)).norm_sqr(),
            Channel::Superoperator(s) => {
                let rho = unvectorize(&s.apply(&vectorize(&outer(psi0, psi0))));
                inner(target_state, &rho.apply(target_state)).re
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityConvention {
    /// Per-state value <psi_f|rho|psi_f>.
    #[default]
    Standard,
    /// Per-state value |<psi_f|rho|psi_f>|^2.
    Paper,
}

/// Labels carried into report rows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub scheme: String,
    pub repetitions: Option<u32>,
    /// rad/s
    pub zeeman_difference: f64,
    /// seconds
    pub gate_time: f64,
    pub errors: ErrorInjection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub meta: ReportMeta,
    pub phases: [f64; 3],
    pub convention: FidelityConvention,
    pub per_state: Vec<f64>,
    pub average: f64,
}

impl FidelityReport {
    pub fn with_meta(mut self, meta: ReportMeta) -> Self {
        self.meta = meta;
        self
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "scheme",
        "N",
        "delta_Ez_over_2pi_MHz",
        "gate_time_ns",
        "rabi_delta",
        "detuning_eps",
        "phi1",
        "phi2",
        "phi3",
        "fidelity",
    ];

    pub fn csv_row(&self) -> [String; 10] {
        let m = &self.meta;
        [
            m.scheme.clone(),
            m.repetitions.map_or(String::new(), |n| n.to_string()),
            format!("{:.6}", m.zeeman_difference / TAU / 1e6),
            format!("{:.6}", m.gate_time * 1e9),
            format!("{:.6}", m.errors.rabi),
            format!("{:.6}", m.errors.detuning),
            format!("{:.6}", self.phases[0]),
            format!("{:.6}", self.phases[1]),
            format!("{:.6}", self.phases[2]),
            format!("{:.10}", self.average),
        ]
    }
}

pub fn write_reports_csv(out: impl Write, reports: &[FidelityReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FidelityReport::CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn average_fidelity(
    channel: &Channel,
    target: &Mat4,
    grid: &InitialStateGrid,
    convention: FidelityConvention,
) -> Result<FidelityReport> {
    Tolerances { unitary: 1e-9, ..Default::default() }.check_unitary(target)?;
    let per_state: Vec<f64> = grid
        .states
        .par_iter()
        .map(|psi| {
            let v = channel.overlap(psi, &target.apply(psi));
            match convention {
                FidelityConvention::Standard => v,
                FidelityConvention::Paper => v * v,
            }
        })
        .collect();
    let average = per_state.iter().sum::<f64>() / per_state.len() as f64;
    Ok(FidelityReport { meta: ReportMeta::default(), phases: grid.phases, convention, per_state, average })
}

/// (25 + 7 cos(Delta pi / 2)) / 32, the Rabi-error fidelity of fSim(pi/4, pi/2).
pub fn analytic_rabi_fidelity(delta: f64) -> f64 {
    (25.0 + 7.0 * (delta * PI / 2.0).cos()) / 32.0
}

/// Extra propagator picked up under J -> (1 + Delta) J: identity on {00, 11} and
/// exp(-i Delta Xi / 2) (cos(Delta vartheta) - i sin(Delta vartheta) X) on {01, 10}.
/// It commutes with the ideal fSim, so the side it multiplies from is immaterial.
pub fn rabi_error_operator(swap_angle: f64, phase: f64, delta: f64) -> Mat4 {
    let g = C64::from_polar(1.0, -delta * phase / 2.0);
    let (s, c) = (delta * swap_angle).sin_cos();
    let mut m = Mat4::identity();
    m[(1, 1)] = g * c;
    m[(2, 2)] = g * c;
    m[(1, 2)] = g * C64::new(0.0, -s);
    m[(2, 1)] = g * C64::new(0.0, -s);
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseAxis {
    Phi1,
    Phi2,
    Phi3,
}

impl PhaseAxis {
    pub fn index(&self) -> usize {
        match self {
            PhaseAxis::Phi1 => 0,
            PhaseAxis::Phi2 => 1,
            PhaseAxis::Phi3 => 2,
        }
    }
}

/// Average fidelity with one relative phase set to each value and the other two at zero.
pub fn phase_sweep(
    channel: &Channel,
    target: &Mat4,
    axis: PhaseAxis,
    values: &[f64],
    n: usize,
    convention: FidelityConvention,
    meta: &ReportMeta,
) -> Result<Vec<FidelityReport>> {
    values
        .iter()
        .map(|&v| {
            let mut phases = [0.0; 3];
            phases[axis.index()] = v;
            let grid = build_grid(n, phases)?;
            Ok(average_fidelity(channel, target, &grid, convention)?.with_meta(meta.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse_engineering::fsim_gate;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn grid_shapes() {
        let g = build_grid(1, [0.0; 3]).unwrap();
        assert_eq!(g.states.len(), 1);
        assert_eq!(g.states[0][0], C64::new(1.0, 0.0));
        let g40 = build_grid(40, [0.0; 3]).unwrap();
        assert_eq!(g40.states.len(), 1600);
        for s in &g40.states {
            let norm: f64 = s.iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert!(build_grid(0, [0.0; 3]).is_err());
    }

    #[test]
    fn phi3_changes_only_last_amplitude() {
        let a = build_grid(5, [0.0; 3]).unwrap();
        let b = build_grid(5, [0.0, 0.0, 1.3]).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            assert_eq!(x[..3], y[..3]);
            assert!((x[3].norm() - y[3].norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn perfect_channel_scores_one() {
        let u = fsim_gate(0.4, 1.1);
        let grid = build_grid(7, [0.2, 0.3, 0.4]).unwrap();
        for conv in [FidelityConvention::Standard, FidelityConvention::Paper] {
            let r = average_fidelity(&Channel::Unitary(u), &u, &grid, conv).unwrap();
            assert!((r.average - 1.0).abs() < 1e-12);
        }
        assert!(average_fidelity(&Channel::Unitary(u), &(u * 2.0), &grid, FidelityConvention::Standard).is_err());
    }

    #[test]
    fn superoperator_of_unitary_agrees() {
        let u = fsim_gate(0.7, -0.4);
        let s = crate::algebra::kron4(&u.conj(), &u);
        let grid = build_grid(6, [0.0; 3]).unwrap();
        let target = fsim_gate(0.6, -0.2);
        let a = average_fidelity(&Channel::Unitary(u), &target, &grid, FidelityConvention::Standard).unwrap();
        let b = average_fidelity(&Channel::Superoperator(Box::new(s)), &target, &grid, FidelityConvention::Standard)
            .unwrap();
        assert!((a.average - b.average).abs() < 1e-12);
        let mean: f64 = a.per_state.iter().sum::<f64>() / a.per_state.len() as f64;
        assert!((mean - a.average).abs() < 1e-12);
    }

    #[test]
    fn rabi_law_values() {
        assert_eq!(analytic_rabi_fidelity(0.0), 1.0);
        assert!((analytic_rabi_fidelity(0.1) - 0.997_307).abs() < 1e-6);
        assert!(analytic_rabi_fidelity(-0.1) > 0.997);
    }

    #[test]
    fn rabi_operator_is_unitary_and_trivial_at_zero() {
        assert!(rabi_error_operator(FRAC_PI_4, FRAC_PI_2, 0.07).unitarity_defect() < 1e-14);
        assert!((rabi_error_operator(FRAC_PI_4, FRAC_PI_2, 0.0) - Mat4::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn csv_row_layout() {
        let u = Mat4::identity();
        let grid = build_grid(2, [0.0; 3]).unwrap();
        let r = average_fidelity(&Channel::Unitary(u), &u, &grid, FidelityConvention::Standard)
            .unwrap()
            .with_meta(ReportMeta { scheme: "x".into(), repetitions: Some(3), ..Default::default() });
        let mut buf = Vec::new();
        write_reports_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("scheme,N,delta_Ez_over_2pi_MHz,gate_time_ns,rabi_delta,detuning_eps,phi1,phi2,phi3,fidelity"));
        assert!(text.lines().nth(1).unwrap().starts_with("x,3,"));
    }
}
