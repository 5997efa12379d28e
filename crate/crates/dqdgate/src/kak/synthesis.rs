use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{b_gate, beta_params, canonical_gate, euler_zyz, CanonicalParams};
use crate::algebra::{kron2, phase_distance, Mat4};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum CircuitGate {
    /// Rz(a) Ry(b) Rz(c) on one qubit (0 is the left tensor factor).
    Local { qubit: usize, euler_zyz: [f64; 3] },
    B,
}

/// Gate list in application order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub gates: Vec<CircuitGate>,
}

impl Circuit {
    /// Layout (k1 x k2) B (k3 x k4) B (k5 x k6) with k_i taken from consecutive Euler triples.
    pub fn b_sandwich(params: &[f64]) -> Self {
        assert_eq!(params.len(), 18);
        let local = |k: usize| CircuitGate::Local {
            qubit: k % 2,
            euler_zyz: [params[3 * k], params[3 * k + 1], params[3 * k + 2]],
        };
        Self { gates: vec![local(4), local(5), CircuitGate::B, local(2), local(3), CircuitGate::B, local(0), local(1)] }
    }

    pub fn matrix(&self) -> Mat4 {
        let mut u = Mat4::identity();
        let mut pending: [Option<crate::algebra::Mat2>; 2] = [None, None];
        let flush = |u: &mut Mat4, pending: &mut [Option<crate::algebra::Mat2>; 2]| {
            if pending.iter().any(Option::is_some) {
                let id = crate::algebra::Mat2::identity();
                let layer = kron2(&pending[0].unwrap_or(id), &pending[1].unwrap_or(id));
                *u = layer * *u;
                *pending = [None, None];
            }
        };
        for g in &self.gates {
            match g {
                CircuitGate::Local { qubit, euler_zyz: [a, b, c] } => {
                    let k = euler_zyz(*a, *b, *c);
                    pending[*qubit] = Some(match pending[*qubit] {
                        Some(prev) => k * prev,
                        None => k,
                    });
                }
                CircuitGate::B => {
                    flush(&mut u, &mut pending);
                    u = b_gate() * u;
                }
            }
        }
        flush(&mut u, &mut pending);
        u
    }

    pub fn b_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, CircuitGate::B)).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    pub restarts: usize,
    /// Nelder-Mead iterations per run.
    pub max_iters: u64,
    /// Runs per restart, each re-seeding the simplex around the previous best.
    pub refinements: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self { restarts: 24, max_iters: 20_000, refinements: 6, tolerance: 1e-6, seed: 7 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub target: CanonicalParams,
    pub circuit: Circuit,
    pub residual: f64,
    pub beta: Option<(f64, f64)>,
    pub restarts_used: usize,
}

struct SandwichCost {
    target: Mat4,
}

fn sandwich(p: &[f64]) -> Mat4 {
    let k = |i: usize| euler_zyz(p[3 * i], p[3 * i + 1], p[3 * i + 2]);
    let b = b_gate();
    kron2(&k(0), &k(1)) * b * kron2(&k(2), &k(3)) * b * kron2(&k(4), &k(5))
}

impl CostFunction for SandwichCost {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(phase_distance(&sandwich(p), &self.target).powi(2))
    }
}

fn nelder_mead_run(target: &Mat4, start: &[f64], step: f64, iters: u64) -> Result<(Vec<f64>, f64)> {
    let n = start.len();
    let mut simplex = vec![start.to_vec()];
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let dim = n as f64;
    let solver = NelderMead::new(simplex)
        .with_gamma(1.0 + 2.0 / dim)
        .and_then(|s| s.with_sigma(1.0 - 1.0 / dim))
        .and_then(|s| s.with_sd_tolerance(1e-18))
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let res = Executor::new(SandwichCost { target: *target }, solver)
        .configure(|state| state.max_iters(iters))
        .run()
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let state = res.state();
    let best = state.get_best_param().cloned().unwrap_or_else(|| start.to_vec());
    let residual = phase_distance(&sandwich(&best), target);
    Ok((best, residual))
}

fn single_restart(target: &Mat4, opts: &SynthesisOptions, index: usize) -> Result<(Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9).wrapping_add(index as u64));
    let mut p: Vec<f64> = (0..18).map(|_| rng.gen_range(-PI..PI)).collect();
    let mut residual = f64::INFINITY;
    let mut step = 0.6;
    for _ in 0..opts.refinements.max(1) {
        let (q, r) = nelder_mead_run(target, &p, step, opts.max_iters)?;
        if r <= residual {
            p = q;
            residual = r;
        }
        if residual <= opts.tolerance * 1e-3 {
            break;
        }
        step = (step * 0.3).max(1e-4);
    }
    Ok((p, residual))
}

/// Searches single-qubit layers of a two-B-gate circuit reproducing canonical_gate(c) up to global phase.
pub fn synthesize_via_b(c: &CanonicalParams, opts: &SynthesisOptions) -> Result<SynthesisResult> {
    let target = canonical_gate(c);
    let batch = rayon::current_num_threads().clamp(1, 8);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut used = 0;
    while used < opts.restarts {
        let hi = (used + batch).min(opts.restarts);
        let runs: Vec<Result<(Vec<f64>, f64)>> =
            (used..hi).into_par_iter().map(|i| single_restart(&target, opts, i)).collect();
        used = hi;
        for run in runs {
            let (p, r) = run?;
            if best.as_ref().map_or(true, |(_, b)| r < *b) {
                best = Some((p, r));
            }
        }
        if best.as_ref().is_some_and(|(_, r)| *r <= opts.tolerance) {
            break;
        }
    }
    let (params, residual) = best.ok_or(Error::Nonconvergence { residual: f64::INFINITY })?;
    if residual > opts.tolerance {
        return Err(Error::Nonconvergence { residual });
    }
    Ok(SynthesisResult {
        target: *c,
        circuit: Circuit::b_sandwich(&params),
        residual,
        beta: beta_params(c.c2, c.c3).ok(),
        restarts_used: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_matrix_matches_sandwich() {
        let p: Vec<f64> = (0..18).map(|k| 0.37 * k as f64 - 2.0).collect();
        let c = Circuit::b_sandwich(&p);
        assert_eq!(c.b_count(), 2);
        assert!((c.matrix() - sandwich(&p)).max_abs() < 1e-13);
    }

    #[test]
    fn circuit_json_roundtrip() {
        let p = vec![0.1; 18];
        let c = Circuit::b_sandwich(&p);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"gate\":\"b\""));
        let back: Circuit = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
