//! Time evolution: closed-system propagators, dephasing master equation and control-error injection.

mod errors;
mod lindblad;
mod unitary;

pub use errors::{apply_detuning_error, apply_rabi_error, ErrorInjection};
pub use lindblad::{
    lindblad_channel, lindblad_rhs, propagate_lindblad, validate_density, Dephasing, DephasingForm, DensityResult,
};
pub use unitary::{
    propagate_state_trajectory, propagate_unitary, propagate_unitary_window, required_steps, write_trajectory_csv,
    EvolutionResult, Integrator,
};

use crate::algebra::Mat4;

/// A Hermitian generator on [0, duration].
pub trait TimeDependentHamiltonian: Sync {
    fn at(&self, t: f64) -> Mat4;
    fn duration(&self) -> f64;
    /// Largest angular frequency present in H(t).
    fn max_frequency(&self) -> f64;
    /// Times where H(t) may jump.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Closure-backed Hamiltonian.
pub struct FnHamiltonian<F> {
    pub f: F,
    pub duration: f64,
    pub max_frequency: f64,
    pub breakpoints: Vec<f64>,
}

impl<F: Fn(f64) -> Mat4 + Sync> TimeDependentHamiltonian for FnHamiltonian<F> {
    fn at(&self, t: f64) -> Mat4 {
        (self.f)(t)
    }
    fn duration(&self) -> f64 {
        self.duration
    }
    fn max_frequency(&self) -> f64 {
        self.max_frequency
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// Splits [t0, t1] at interior breakpoints into pieces, each given at least one step,
/// with `steps` shared in proportion to length.
pub(crate) fn step_grid(t0: f64, t1: f64, breakpoints: &[f64], steps: usize) -> Vec<(f64, f64, usize)> {
    let mut edges = vec![t0];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > t0 && b < t1).collect();
    inner.sort_by(|a, b| a.total_cmp(b));
    edges.extend(inner);
    edges.push(t1);
    let span = t1 - t0;
    edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let n = ((steps as f64) * (w[1] - w[0]) / span).ceil().max(1.0) as usize;
            (w[0], w[1], n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_respects_breakpoints() {
        let g = step_grid(0.0, 1.0, &[0.25, 2.0, -1.0, 0.5], 100);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], (0.0, 0.25, 25));
        assert_eq!(g[2].1, 1.0);
        assert!(g.iter().map(|p| p.2).sum::<usize>() >= 100);
    }
}
