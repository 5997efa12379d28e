//! Canonical two-qubit gates, the B-gate factors and B-gate based synthesis.

mod synthesis;

pub use synthesis::{synthesize_via_b, Circuit, CircuitGate, SynthesisOptions, SynthesisResult};

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::algebra::{kron2, pauli_x, pauli_y, pauli_z, Mat4, Tolerances, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::inverse_engineering::BFactorKind;

/// Coordinates (c1, c2, c3) of the nonlocal part exp(i/2 (c1 XX + c2 YY + c3 ZZ)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CanonicalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }
}

pub fn xx() -> Mat4 {
    kron2(&pauli_x(), &pauli_x())
}

pub fn yy() -> Mat4 {
    kron2(&pauli_y(), &pauli_y())
}

pub fn zz() -> Mat4 {
    kron2(&pauli_z(), &pauli_z())
}

pub fn canonical_gate(c: &CanonicalParams) -> Mat4 {
    let generator = xx() * c.c1 + yy() * c.c2 + zz() * c.c3;
    generator.exp_i(-0.5)
}

/// B1(g) = -exp(i g XX), B2(g) = -exp(i g YY).
pub fn b_factor(kind: BFactorKind, strength: f64) -> Mat4 {
    let pair = match kind {
        BFactorKind::B1 => xx(),
        BFactorKind::B2 => yy(),
    };
    let (s, c) = strength.sin_cos();
    -(Mat4::identity() * c + pair * C64::new(0.0, s))
}

/// exp(i pi/4 XX + i pi/8 YY).
pub fn b_gate() -> Mat4 {
    let (s, c) = (std::f64::consts::PI / 8.0).sin_cos();
    let mut m = Mat4::zeros();
    m[(0, 0)] = C64::new(c, 0.0);
    m[(3, 3)] = C64::new(c, 0.0);
    m[(0, 3)] = C64::new(0.0, s);
    m[(3, 0)] = C64::new(0.0, s);
    m[(1, 1)] = C64::new(s, 0.0);
    m[(2, 2)] = C64::new(s, 0.0);
    m[(1, 2)] = C64::new(0.0, c);
    m[(2, 1)] = C64::new(0.0, c);
    m
}

/// First B-sandwich angle, cos b1 = 1 - 4 sin^2(c2/2) cos^2(c3/2).
pub fn beta1(c2: f64, c3: f64) -> Result<f64> {
    let cos_b1 = 1.0 - 4.0 * (c2 / 2.0).sin().powi(2) * (c3 / 2.0).cos().powi(2);
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&cos_b1) {
        return Err(Error::Domain { what: "cos(beta1)", value: cos_b1 });
    }
    Ok(cos_b1.clamp(-1.0, 1.0).acos())
}

/// Second B-sandwich angle, sin^2 b2 = cos c2 cos c3 / (1 - 2 sin^2(c2/2) cos^2(c3/2)).
pub fn beta2(c2: f64, c3: f64) -> Result<f64> {
    let num = c2.cos() * c3.cos();
    let den = 1.0 - 2.0 * (c2 / 2.0).sin().powi(2) * (c3 / 2.0).cos().powi(2);
    if den.abs() < 1e-12 {
        return Err(Error::Domain { what: "sin^2(beta2) denominator", value: den });
    }
    let arg = num / den;
    if !arg.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&arg) {
        return Err(Error::Domain { what: "sin^2(beta2)", value: arg });
    }
    Ok(arg.clamp(0.0, 1.0).sqrt().asin())
}

pub fn beta_params(c2: f64, c3: f64) -> Result<(f64, f64)> {
    Ok((beta1(c2, c3)?, beta2(c2, c3)?))
}

/// Local-equivalence invariants (Re G1, Im G1, G2) computed in the magic basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl LocalInvariants {
    pub fn distance(&self, other: &Self) -> f64 {
        (self.g1 - other.g1).abs().max((self.g2 - other.g2).abs()).max((self.g3 - other.g3).abs())
    }
}

fn magic_basis() -> Mat4 {
    let h = FRAC_1_SQRT_2;
    Mat4::from_rows([
        [ONE * h, ZERO, ZERO, I * h],
        [ZERO, I * h, ONE * h, ZERO],
        [ZERO, I * h, -ONE * h, ZERO],
        [ONE * h, ZERO, ZERO, -I * h],
    ])
}

pub fn local_invariants(u: &Mat4) -> Result<LocalInvariants> {
    Tolerances { unitary: 1e-9, ..Default::default() }.check_unitary(u)?;
    let q = magic_basis();
    let ub = q.adjoint() * *u * q;
    let m = ub.transpose() * ub;
    let det = u.det();
    let tr = m.trace();
    let tr2 = (m * m).trace();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - tr2) / (det * 4.0);
    Ok(LocalInvariants { g1: g1.re, g2: g1.im, g3: g2.re })
}

/// Single-qubit rotation Rz(a) Ry(b) Rz(c).
pub fn euler_zyz(a: f64, b: f64, c: f64) -> crate::algebra::Mat2 {
    let rz = |x: f64| crate::algebra::Mat2::diag([C64::from_polar(1.0, -x / 2.0), C64::from_polar(1.0, x / 2.0)]);
    let (s, co) = (b / 2.0).sin_cos();
    let ry = crate::algebra::Mat2::from_real([[co, -s], [s, co]]);
    rz(a) * ry * rz(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phase_distance;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn canonical_identity() {
        let g = canonical_gate(&CanonicalParams::new(0.0, 0.0, 0.0));
        assert!((g - Mat4::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn canonical_reproduces_b_gate() {
        let g = canonical_gate(&CanonicalParams::new(FRAC_PI_2, FRAC_PI_4, 0.0));
        assert!(phase_distance(&g, &b_gate()) < 1e-12);
    }

    #[test]
    fn canonical_xx_quarter_turn() {
        let g = canonical_gate(&CanonicalParams::new(FRAC_PI_2, 0.0, 0.0));
        let h = FRAC_1_SQRT_2;
        for k in 0..4 {
            assert!((g[(k, k)].norm() - h).abs() < 1e-14);
            assert!((g[(k, 3 - k)].norm() - h).abs() < 1e-14);
        }
    }

    #[test]
    fn b_factor_entries() {
        assert!((b_factor(BFactorKind::B1, 0.0) + Mat4::identity()).max_abs() < 1e-15);
        let b1 = b_factor(BFactorKind::B1, 0.3);
        let b2 = b_factor(BFactorKind::B2, 0.3);
        let s = 0.3f64.sin();
        assert!((b1[(0, 3)] - C64::new(0.0, -s)).norm() < 1e-15);
        assert!((b1[(1, 2)] - C64::new(0.0, -s)).norm() < 1e-15);
        // B2 = -exp(i g YY): corners flip sign relative to B1, inner entries agree
        assert!((b2[(0, 3)] + b1[(0, 3)]).norm() < 1e-15);
        assert!((b2[(1, 2)] - b1[(1, 2)]).norm() < 1e-15);
        assert!((b2[(0, 0)] - b1[(0, 0)]).norm() < 1e-15);
    }

    #[test]
    fn b_factors_compose_to_b() {
        let prod = b_factor(BFactorKind::B1, FRAC_PI_4) * b_factor(BFactorKind::B2, PI / 8.0);
        assert!((prod - b_gate()).max_abs() < 1e-12);
    }

    #[test]
    fn beta_spot_values() {
        let (b1, b2) = beta_params(0.0, 0.0).unwrap();
        assert!(b1.abs() < 1e-15 && (b2 - FRAC_PI_2).abs() < 1e-7);
        assert!((beta1(FRAC_PI_2, 0.0).unwrap() - PI).abs() < 1e-7);
        // sin^2 b2 is 0/0 there
        assert!(beta_params(FRAC_PI_2, 0.0).is_err());
        // cos c2 cos c3 < 0
        assert!(matches!(beta2(1.2, 2.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn invariants_of_identity() {
        let inv = local_invariants(&Mat4::identity()).unwrap();
        assert!((inv.g1 - 1.0).abs() < 1e-14 && inv.g2.abs() < 1e-14 && (inv.g3 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn invariants_reject_non_unitary() {
        assert!(local_invariants(&(Mat4::identity() * 2.0)).is_err());
    }

    #[test]
    fn invariants_periodic_in_c1() {
        let a = local_invariants(&canonical_gate(&CanonicalParams::new(0.3, 0.2, 0.1))).unwrap();
        let b = local_invariants(&canonical_gate(&CanonicalParams::new(0.3 + 2.0 * PI, 0.2, 0.1))).unwrap();
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn euler_is_special_unitary() {
        let k = euler_zyz(0.3, 1.2, -0.7);
        assert!((k.det() - ONE).norm() < 1e-14);
        assert!(k.unitarity_defect() < 1e-14);
    }
}
