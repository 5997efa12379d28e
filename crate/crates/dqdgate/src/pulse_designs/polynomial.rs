use serde::{Deserialize, Serialize};

use crate::algebra::C64;

/// Polynomial in the local coordinate s in [0, 1], coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect();
        Self { coeffs }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Integral from 0 to s.
    pub fn integral(&self, s: f64) -> f64 {
        self.coeffs.iter().enumerate().rev().fold(0.0, |acc, (k, &c)| acc * s + c / (k + 1) as f64) * s
    }

    /// Integral over [0, s1] of p(s) exp(i (omega s + phase)).
    pub fn oscillatory_integral(&self, s1: f64, omega: f64, phase: f64) -> C64 {
        let rotation = C64::from_polar(1.0, phase);
        if (omega * s1).abs() < 1.0 || omega.abs() < 1e-3 {
            return rotation * self.taylor_oscillatory(s1, omega);
        }
        let io = C64::new(0.0, omega);
        let antiderivative = |s: f64| {
            let mut acc = C64::new(0.0, 0.0);
            let mut d = self.clone();
            let mut denom = io;
            let mut sign = 1.0;
            while !d.coeffs.is_empty() {
                acc += d.eval(s) * sign / denom;
                d = d.derivative();
                denom *= io;
                sign = -sign;
            }
            C64::from_polar(1.0, omega * s) * acc
        };
        rotation * (antiderivative(s1) - antiderivative(0.0))
    }

    fn taylor_oscillatory(&self, s1: f64, omega: f64) -> C64 {
        // sum_m (i omega)^m / m! * integral of p(s) s^m over [0, s1]
        let mut total = C64::new(0.0, 0.0);
        let mut factor = C64::new(1.0, 0.0);
        for m in 0..60 {
            if m > 0 {
                factor *= C64::new(0.0, omega) / m as f64;
            }
            let moment: f64 = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * s1.powi((k + m + 1) as i32) / (k + m + 1) as f64)
                .sum();
            let term = factor * moment;
            total += term;
            if m > 4 && term.norm() < 1e-18 * total.norm().max(1e-300) {
                break;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::simpson_complex;

    fn sample() -> Polynomial {
        Polynomial::new(vec![0.3, -1.0, 2.5, 0.7, -3.0, 1.1, 0.4])
    }

    #[test]
    fn eval_and_derivative() {
        let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative().coeffs, vec![2.0, 6.0]);
        assert!((p.integral(1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_matches_quadrature() {
        let p = sample();
        for &(s1, omega, phase) in &[(1.0, 6.283, 0.0), (0.37, 40.0, 0.3), (1.0, 0.2, -1.0), (0.9, 1e-6, 0.5), (0.5, 3.0, 2.0)] {
            let exact = p.oscillatory_integral(s1, omega, phase);
            let quad = simpson_complex(|s| C64::from_polar(p.eval(s), omega * s + phase), 0.0, s1, &[], 20_000);
            assert!((exact - quad).norm() < 1e-10, "{s1} {omega}: {exact} vs {quad}");
        }
    }

    #[test]
    fn branches_agree_near_switch() {
        let p = sample();
        let a = p.oscillatory_integral(1.0, 0.999_999, 0.0);
        let b = p.oscillatory_integral(1.0, 1.000_001, 0.0);
        assert!((a - b).norm() < 1e-5);
    }
}
