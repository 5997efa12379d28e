//! Fixed-dimension complex linear algebra, unit quaternions and quadrature.

pub mod eigen;
pub mod matrix;
pub mod quadrature;
pub mod quaternion;

pub use eigen::hermitian_eigenvalues;
pub use matrix::{
    inner, kron2, kron4, outer, pauli_x, pauli_y, pauli_z, phase_distance, unvectorize, vectorize, ComplexMatrix4,
    Mat16, Mat2, Mat4, Matrix, C64, I, ONE, ZERO,
};
pub use quadrature::{simpson, simpson_complex, DEFAULT_PANELS};
pub use quaternion::{azimuths_to_quaternions, isoclinic_left, isoclinic_right, Quaternion};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances used by validity checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative Hermiticity defect, scaled by max(1, ||M||_F).
    pub hermitian: f64,
    pub unitary: f64,
    pub quaternion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hermitian: 1e-12, unitary: 1e-10, quaternion: 1e-12 }
    }
}

impl Tolerances {
    pub fn check_hermitian(&self, h: &Mat4) -> Result<()> {
        let defect = h.hermitian_defect();
        if !(defect <= self.hermitian * h.frobenius_norm().max(1.0)) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(())
    }

    pub fn check_unitary(&self, u: &Mat4) -> Result<()> {
        let defect = u.unitarity_defect();
        if !(defect <= self.unitary) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(())
    }
}

/// exp(-i H dt) for a Hermitian generator.
pub fn mat_exp_skew(h: &Mat4, dt: f64) -> Result<Mat4> {
    if !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("time step {dt} is not finite")));
    }
    Tolerances::default().check_hermitian(h)?;
    Ok(h.exp_i(dt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_generator() {
        assert_eq!(mat_exp_skew(&Mat4::zeros(), 1.0).unwrap(), Mat4::identity());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = Mat4::zeros();
        h[(0, 1)] = C64::new(1.0, 0.0);
        match mat_exp_skew(&h, 1.0) {
            Err(Error::NotHermitian { defect }) => assert!((defect - 2f64.sqrt()).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_nan_step() {
        assert!(mat_exp_skew(&Mat4::identity(), f64::NAN).is_err());
    }
}
