use serde::{Deserialize, Serialize};

use super::unitary::required_steps;
use super::{step_grid, TimeDependentHamiltonian};
use crate::algebra::{hermitian_eigenvalues, Mat16, Mat4, C64};
use crate::error::{Error, Result};

/// How the dephasing rate enters the projector dissipators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DephasingForm {
    /// Rate 1/T2 on each projector; single-qubit coherences decay as exp(-t/T2).
    #[default]
    AsWritten,
    /// Half the rate; coherences decay as exp(-t/(2 T2)).
    HalfRate,
}

/// Pure dephasing of both qubits through the projectors |k><k| on each qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dephasing {
    pub rates: [f64; 2],
    pub form: DephasingForm,
}

impl Dephasing {
    pub fn none() -> Self {
        Self { rates: [0.0, 0.0], form: DephasingForm::AsWritten }
    }

    pub fn from_t2(t2: [f64; 2], form: DephasingForm) -> Self {
        Self { rates: t2.map(|t| 1.0 / t), form }
    }

    fn effective(&self) -> [f64; 2] {
        match self.form {
            DephasingForm::AsWritten => self.rates,
            DephasingForm::HalfRate => self.rates.map(|r| r / 2.0),
        }
    }

    /// Decay rate of rho[r][c]: sum over qubits whose bit differs between r and c.
    fn coherence_rate(&self, r: usize, c: usize) -> f64 {
        let k = self.effective();
        let q1 = ((r >> 1) ^ (c >> 1)) & 1;
        let q2 = (r ^ c) & 1;
        k[0] * q1 as f64 + k[1] * q2 as f64
    }
}

/// d rho / dt = -i [H, rho] + sum_k kappa_k (P_k rho P_k - {P_k, rho}/2).
pub fn lindblad_rhs(h: &Mat4, rho: &Mat4, dephasing: &Dephasing) -> Mat4 {
    let mut out = (*h * *rho - *rho * *h) * C64::new(0.0, -1.0);
    for r in 0..4 {
        for c in 0..4 {
            out[(r, c)] -= rho[(r, c)] * dephasing.coherence_rate(r, c);
        }
    }
    out
}

fn liouvillian(h: &Mat4, dephasing: &Dephasing) -> Mat16 {
    // column stacking: vec(rho)[4c + r] = rho[r][c]
    let mut l = Mat16::zeros();
    let mi = C64::new(0.0, -1.0);
    for c in 0..4 {
        for r in 0..4 {
            let row = 4 * c + r;
            for k in 0..4 {
                // (H rho)[r][c] = H[r][k] rho[k][c]
                l[(row, 4 * c + k)] += mi * h[(r, k)];
                // (rho H)[r][c] = rho[r][k] H[k][c]
                l[(row, 4 * k + r)] -= mi * h[(k, c)];
            }
            l[(row, row)] -= dephasing.coherence_rate(r, c);
        }
    }
    l
}

pub fn validate_density(rho: &Mat4) -> Result<()> {
    if !rho.is_finite() {
        return Err(Error::InvalidDensity("non-finite entries".into()));
    }
    if rho.hermitian_defect() > 1e-10 {
        return Err(Error::InvalidDensity(format!("not Hermitian (defect {:.3e})", rho.hermitian_defect())));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -1e-9 {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityResult {
    pub rho: Mat4,
    pub steps: usize,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

fn rk4<T>(y: T, t: f64, dt: f64, f: impl Fn(f64, &T) -> T) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let k1 = f(t, &y);
    let k2 = f(t + dt / 2.0, &(y + k1 * (dt / 2.0)));
    let k3 = f(t + dt / 2.0, &(y + k2 * (dt / 2.0)));
    let k4 = f(t + dt, &(y + k3 * dt));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

fn check_budget(h: &dyn TimeDependentHamiltonian, steps: usize) -> Result<()> {
    let required = required_steps(h, 0.0, h.duration());
    if steps < required {
        return Err(Error::StepBudget { requested: steps, required });
    }
    Ok(())
}

/// Classical fourth-order Runge-Kutta integration of the master equation over [0, T].
pub fn propagate_lindblad(
    h: &dyn TimeDependentHamiltonian,
    rho0: &Mat4,
    dephasing: &Dephasing,
    steps: usize,
) -> Result<DensityResult> {
    validate_density(rho0)?;
    check_budget(h, steps)?;
    let mut rho = *rho0;
    let mut taken = 0;
    for (a, b, n) in step_grid(0.0, h.duration(), &h.breakpoints(), steps) {
        let dt = (b - a) / n as f64;
        for k in 0..n {
            rho = rk4(rho, a + k as f64 * dt, dt, |t, r| lindblad_rhs(&h.at(t), r, dephasing));
        }
        taken += n;
    }
    Ok(DensityResult {
        trace_defect: (rho.trace() - C64::new(1.0, 0.0)).norm(),
        min_eigenvalue: hermitian_eigenvalues(&rho)[0],
        rho,
        steps: taken,
    })
}

/// 16x16 transfer matrix of the master equation acting on column-stacked densities.
pub fn lindblad_channel(h: &dyn TimeDependentHamiltonian, dephasing: &Dephasing, steps: usize) -> Result<Mat16> {
    check_budget(h, steps)?;
    let mut s = Mat16::identity();
    for (a, b, n) in step_grid(0.0, h.duration(), &h.breakpoints(), steps) {
        let dt = (b - a) / n as f64;
        for k in 0..n {
            s = rk4(s, a + k as f64 * dt, dt, |t, m| liouvillian(&h.at(t), dephasing) * *m);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{outer, unvectorize, vectorize};
    use crate::dynamics::{propagate_unitary, FnHamiltonian, Integrator};

    fn plus_plus() -> Mat4 {
        let a = C64::new(0.5, 0.0);
        outer(&[a; 4], &[a; 4])
    }

    #[test]
    fn coherence_decays_at_inverse_t2() {
        let h = FnHamiltonian { f: |_| Mat4::zeros(), duration: 3.0, max_frequency: 0.0, breakpoints: vec![] };
        let d = Dephasing { rates: [0.5, 0.0], form: DephasingForm::AsWritten };
        let r = propagate_lindblad(&h, &plus_plus(), &d, 400).unwrap();
        // qubit-1 coherence |00><10| decays as exp(-t/T2) = exp(-1.5)
        assert!((r.rho[(0, 2)].re - 0.25 * (-1.5f64).exp()).abs() < 1e-10);
        // qubit-2 coherence untouched
        assert!((r.rho[(0, 1)].re - 0.25).abs() < 1e-12);
        let half = Dephasing { form: DephasingForm::HalfRate, ..d };
        let r2 = propagate_lindblad(&h, &plus_plus(), &half, 400).unwrap();
        assert!((r2.rho[(0, 2)].re - 0.25 * (-0.75f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn rhs_matches_explicit_projector_sum() {
        let h = Mat4::from_fn(|r, c| C64::new((r + c) as f64 * 0.1, r as f64 - c as f64));
        let h = (h + h.adjoint()) * 0.5;
        let rho = plus_plus();
        let d = Dephasing { rates: [0.7, 0.3], form: DephasingForm::AsWritten };
        let proj = |diag: [f64; 4]| Mat4::diag_real(diag);
        let ps = [
            (proj([1.0, 1.0, 0.0, 0.0]), 0.7),
            (proj([0.0, 0.0, 1.0, 1.0]), 0.7),
            (proj([1.0, 0.0, 1.0, 0.0]), 0.3),
            (proj([0.0, 1.0, 0.0, 1.0]), 0.3),
        ];
        let mut oracle = (h * rho - rho * h) * C64::new(0.0, -1.0);
        for (p, k) in ps {
            oracle = oracle + (p * rho * p - (p * rho + rho * p) * 0.5) * k;
        }
        assert!((lindblad_rhs(&h, &rho, &d) - oracle).max_abs() < 1e-14);
        let l = liouvillian(&h, &d);
        let via = unvectorize(&l.apply(&vectorize(&rho)));
        assert!((via - oracle).max_abs() < 1e-14);
    }

    #[test]
    fn closed_limit_matches_unitary() {
        let h = FnHamiltonian {
            f: |t: f64| {
                let mut m = Mat4::diag_real([0.2, -0.1, 0.4, 0.0]);
                m[(1, 2)] = C64::new(0.9 * t.cos(), 0.0);
                m[(2, 1)] = m[(1, 2)];
                m
            },
            duration: 2.0,
            max_frequency: 1.0,
            breakpoints: vec![],
        };
        let u = propagate_unitary(&h, 4000, Integrator::Magnus4).unwrap().operator;
        let s = lindblad_channel(&h, &Dephasing::none(), 2000).unwrap();
        let rho = plus_plus();
        let expect = u * rho * u.adjoint();
        let got = unvectorize(&s.apply(&vectorize(&rho)));
        assert!((got - expect).max_abs() < 1e-10);
        let direct = propagate_lindblad(&h, &rho, &Dephasing::none(), 2000).unwrap();
        assert!((direct.rho - expect).max_abs() < 1e-10);
        assert!(direct.trace_defect < 1e-12 && direct.min_eigenvalue > -1e-9);
    }

    #[test]
    fn rejects_invalid_density() {
        let h = FnHamiltonian { f: |_| Mat4::zeros(), duration: 1.0, max_frequency: 0.0, breakpoints: vec![] };
        let bad = Mat4::diag_real([1.2, -0.2, 0.0, 0.0]);
        assert!(matches!(propagate_lindblad(&h, &bad, &Dephasing::none(), 10), Err(Error::InvalidDensity(_))));
        assert!(propagate_lindblad(&h, &(Mat4::identity() * 0.5), &Dephasing::none(), 10).is_err());
    }
}
