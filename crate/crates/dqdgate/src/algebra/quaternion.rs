use serde::{Deserialize, Serialize};

use super::matrix::Mat4;
use super::Tolerances;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Hyperspherical parametrization by an angle from the real axis and two direction angles.
    pub fn from_azimuths(gamma: f64, theta: f64, phi: f64) -> Self {
        let (sg, cg) = gamma.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(cg, sg * ct, sg * st * cp, sg * st * sp)
    }

    /// Time derivative of [`from_azimuths`](Self::from_azimuths) given the angle rates.
    pub fn azimuth_rate(gamma: f64, theta: f64, phi: f64, dgamma: f64, dtheta: f64, dphi: f64) -> Self {
        let (sg, cg) = gamma.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(
            -sg * dgamma,
            cg * ct * dgamma - sg * st * dtheta,
            cg * st * cp * dgamma + sg * ct * cp * dtheta - sg * st * sp * dphi,
            cg * st * sp * dgamma + sg * ct * sp * dtheta + sg * st * cp * dphi,
        )
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn check_unit(&self, tol: &Tolerances) -> Result<()> {
        let defect = self.norm_sqr() - 1.0;
        if defect.abs() > tol.quaternion {
            return Err(Error::NonUnitQuaternion { defect });
        }
        Ok(())
    }

    /// Left-multiplication pattern, no normalization check.
    pub fn left_matrix(&self) -> Mat4 {
        let Quaternion { w, x, y, z } = *self;
        Mat4::from_real([
            [w, -x, -y, -z],
            [x, w, -z, y],
            [y, z, w, -x],
            [z, -y, x, w],
        ])
    }

    /// Right-multiplication pattern, no normalization check.
    pub fn right_matrix(&self) -> Mat4 {
        let Quaternion { w, x, y, z } = *self;
        Mat4::from_real([
            [w, -x, -y, -z],
            [x, w, z, -y],
            [y, -z, w, x],
            [z, y, -x, w],
        ])
    }
}

pub fn isoclinic_left(q: &Quaternion) -> Result<Mat4> {
    q.check_unit(&Tolerances::default())?;
    Ok(q.left_matrix())
}

pub fn isoclinic_right(p: &Quaternion) -> Result<Mat4> {
    p.check_unit(&Tolerances::default())?;
    Ok(p.right_matrix())
}

/// Builds the left and right unit quaternions of a 4D rotation from its six azimuths.
pub fn azimuths_to_quaternions(
    gamma1: f64,
    theta1: f64,
    phi1: f64,
    gamma2: f64,
    theta2: f64,
    phi2: f64,
) -> (Quaternion, Quaternion) {
    (
        Quaternion::from_azimuths(gamma1, theta1, phi1),
        Quaternion::from_azimuths(gamma2, theta2, phi2),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Mat4;

    #[test]
    fn identity_quaternion_gives_identity() {
        assert_eq!(isoclinic_left(&Quaternion::IDENTITY).unwrap(), Mat4::identity());
        assert_eq!(isoclinic_right(&Quaternion::IDENTITY).unwrap(), Mat4::identity());
    }

    #[test]
    fn pure_i_left_is_signed_permutation() {
        let m = isoclinic_left(&Quaternion::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let expected = Mat4::from_real([
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(m, expected);
        assert!((m + m.transpose()).max_abs() == 0.0);
    }

    #[test]
    fn non_unit_rejected() {
        let q = Quaternion::new(1.0, 0.1, 0.0, 0.0);
        assert!(matches!(isoclinic_left(&q), Err(Error::NonUnitQuaternion { .. })));
        assert!(isoclinic_right(&q).is_err());
    }

    #[test]
    fn azimuth_special_values() {
        let (q, _) = azimuths_to_quaternions(0.0, 0.3, 0.2, 0.0, 0.0, 0.0);
        assert_eq!(q, Quaternion::IDENTITY);
        let (q, _) = azimuths_to_quaternions(std::f64::consts::FRAC_PI_2, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert!((q.w).abs() < 1e-16 && (q.x - 1.0).abs() < 1e-16 && q.y == 0.0 && q.z == 0.0);
    }

    #[test]
    fn azimuth_rate_matches_finite_difference() {
        let (g, t, p) = (0.4, 1.1, -2.3);
        let (dg, dt, dp) = (0.7, -0.2, 1.3);
        let h = 1e-6;
        let plus = Quaternion::from_azimuths(g + h * dg, t + h * dt, p + h * dp);
        let minus = Quaternion::from_azimuths(g - h * dg, t - h * dt, p - h * dp);
        let rate = Quaternion::azimuth_rate(g, t, p, dg, dt, dp);
        assert!(((plus.w - minus.w) / (2.0 * h) - rate.w).abs() < 1e-8);
        assert!(((plus.x - minus.x) / (2.0 * h) - rate.x).abs() < 1e-8);
        assert!(((plus.y - minus.y) / (2.0 * h) - rate.y).abs() < 1e-8);
        assert!(((plus.z - minus.z) / (2.0 * h) - rate.z).abs() < 1e-8);
    }
}
