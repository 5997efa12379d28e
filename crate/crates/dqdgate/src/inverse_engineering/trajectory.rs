use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Mat4, Quaternion, C64};
use crate::error::{Error, Result};

/// The six hyperspherical angles of a 4D rotation, or their rates.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Azimuths {
    pub gamma1: f64,
    pub theta1: f64,
    pub phi1: f64,
    pub gamma2: f64,
    pub theta2: f64,
    pub phi2: f64,
}

impl Azimuths {
    pub fn as_array(&self) -> [f64; 6] {
        [self.gamma1, self.theta1, self.phi1, self.gamma2, self.theta2, self.phi2]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self { gamma1: a[0], theta1: a[1], phi1: a[2], gamma2: a[3], theta2: a[4], phi2: a[5] }
    }
}

/// Angles, level phases and their first derivatives at one instant.
///
/// `phases` holds the phases of levels 2..=4; the first level's phase is fixed at zero.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrajectoryPoint {
    pub angles: Azimuths,
    pub angle_rates: Azimuths,
    pub phases: [f64; 3],
    pub phase_rates: [f64; 3],
}

impl TrajectoryPoint {
    pub fn quaternions(&self) -> (Quaternion, Quaternion) {
        let a = &self.angles;
        (
            Quaternion::from_azimuths(a.gamma1, a.theta1, a.phi1),
            Quaternion::from_azimuths(a.gamma2, a.theta2, a.phi2),
        )
    }

    /// U_r = L(q) R(p).
    pub fn rotation(&self) -> Mat4 {
        let (q, p) = self.quaternions();
        q.left_matrix() * p.right_matrix()
    }

    /// Diagonal phase matrix K.
    pub fn phase_matrix(&self) -> Mat4 {
        Mat4::diag([
            C64::new(1.0, 0.0),
            C64::from_polar(1.0, self.phases[0]),
            C64::from_polar(1.0, self.phases[1]),
            C64::from_polar(1.0, self.phases[2]),
        ])
    }

    fn level_phase(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.phases[k - 1]
        }
    }

    fn level_phase_rate(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.phase_rates[k - 1]
        }
    }
}

/// Time-dependent azimuths and level phases, supplied as closed-form value and derivative closures.
#[derive(Clone)]
pub struct AzimuthTrajectory {
    eval: Arc<dyn Fn(f64) -> TrajectoryPoint + Send + Sync>,
}

impl fmt::Debug for AzimuthTrajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AzimuthTrajectory").field("at_zero", &self.at(0.0)).finish()
    }
}

/// Exchange envelope j(t) with its running integrals, as needed by the fSim trajectory.
pub trait ExchangeProfile: Send + Sync {
    fn envelope(&self, t: f64) -> f64;
    /// Integral of j from 0 to t.
    fn envelope_integral(&self, t: f64) -> f64;
    /// Integral of j(s) cos(omega s) from 0 to t.
    fn carrier_integral(&self, t: f64, omega: f64) -> f64;
}

impl AzimuthTrajectory {
    pub fn new(eval: impl Fn(f64) -> TrajectoryPoint + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval) }
    }

    pub fn at(&self, t: f64) -> TrajectoryPoint {
        (self.eval)(t)
    }

    pub fn check_initial_condition(&self) -> Result<()> {
        let p = self.at(0.0);
        if p.angles.gamma1.abs() > 1e-12 || p.angles.gamma2.abs() > 1e-12 {
            return Err(Error::InvalidTrajectory(format!(
                "rotation angles must vanish at t = 0 (got {}, {})",
                p.angles.gamma1, p.angles.gamma2
            )));
        }
        Ok(())
    }

    /// Largest deviation between the supplied derivatives and central finite differences.
    pub fn derivative_mismatch(&self, times: &[f64], h: f64) -> f64 {
        let mut worst = 0.0f64;
        for &t in times {
            let p = self.at(t);
            let plus = self.at(t + h);
            let minus = self.at(t - h);
            let a_plus = plus.angles.as_array();
            let a_minus = minus.angles.as_array();
            for (k, rate) in p.angle_rates.as_array().iter().enumerate() {
                worst = worst.max(((a_plus[k] - a_minus[k]) / (2.0 * h) - rate).abs());
            }
            for k in 0..3 {
                let fd = (plus.phases[k] - minus.phases[k]) / (2.0 * h);
                worst = worst.max((fd - p.phase_rates[k]).abs());
            }
        }
        worst
    }

    /// fSim trajectory driven by an exchange profile.
    ///
    /// Both rotation angles are tied, gamma2 = -gamma1 with gamma1' = j/4, so the
    /// {01,10} block turns by the full integral of j over two.
    pub fn fsim(profile: Arc<dyn ExchangeProfile>, zeeman_mean: f64, carrier: f64) -> Self {
        Self::new(move |t| {
            let rate = profile.envelope(t) / 4.0;
            let gamma = profile.envelope_integral(t) / 4.0;
            let level = zeeman_mean * t + profile.carrier_integral(t, carrier);
            let level_rate = zeeman_mean + profile.envelope(t) * (carrier * t).cos();
            TrajectoryPoint {
                angles: Azimuths {
                    gamma1: gamma,
                    theta1: FRAC_PI_2,
                    phi1: FRAC_PI_2,
                    gamma2: -gamma,
                    theta2: FRAC_PI_2,
                    phi2: FRAC_PI_2,
                },
                angle_rates: Azimuths { gamma1: rate, gamma2: -rate, ..Default::default() },
                phases: [FRAC_PI_2 + level, level, 2.0 * zeeman_mean * t],
                phase_rates: [level_rate, level_rate, 2.0 * zeeman_mean],
            }
        })
    }

    /// Trajectory for the B1/B2 factors with a smooth monotone progress profile.
    ///
    /// `progress` maps [0, T] onto [0, 1] and returns (value, derivative).
    pub fn b_factor(
        kind: BFactorKind,
        strength: f64,
        progress: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Result<Self> {
        let sin_theta = -strength / PI;
        if !(-1.0..=1.0).contains(&sin_theta) {
            return Err(Error::Domain { what: "B-factor strength / pi", value: -sin_theta });
        }
        let theta1 = sin_theta.asin();
        let last_phase = match kind {
            BFactorKind::B1 => FRAC_PI_2,
            BFactorKind::B2 => -FRAC_PI_2,
        };
        Ok(Self::new(move |t| {
            let (s, ds) = progress(t);
            TrajectoryPoint {
                angles: Azimuths {
                    gamma1: PI * s,
                    theta1,
                    phi1: FRAC_PI_2,
                    gamma2: -sin_theta * PI * s,
                    theta2: FRAC_PI_2,
                    phi2: FRAC_PI_2,
                },
                angle_rates: Azimuths { gamma1: PI * ds, gamma2: -sin_theta * PI * ds, ..Default::default() },
                phases: [FRAC_PI_2, 0.0, last_phase],
                phase_rates: [0.0; 3],
            }
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BFactorKind {
    B1,
    B2,
}

/// Rotation-generator couplings (U_r' U_r^T)_mn for the six upper-triangular pairs,
/// ordered (12, 13, 14, 23, 24, 34).
pub fn omega_couplings(a: &Azimuths, d: &Azimuths) -> [f64; 6] {
    let (sg1, cg1) = a.gamma1.sin_cos();
    let (st1, ct1) = a.theta1.sin_cos();
    let (sf1, cf1) = a.phi1.sin_cos();
    let (sg2, cg2) = a.gamma2.sin_cos();
    let (st2, ct2) = a.theta2.sin_cos();
    let (sf2, cf2) = a.phi2.sin_cos();
    let (dg1, dt1, df1) = (d.gamma1, d.theta1, d.phi1);
    let (dg2, dt2, df2) = (d.gamma2, d.theta2, d.phi2);

    let o12 = sg1 * st1 * (dt1 * cg1 - df1 * sg1 * st1) + sg2 * st2 * (dt2 * cg2 + df2 * sg2 * st2)
        - dg1 * ct1
        - dg2 * ct2;
    let o13 = dt1 * sg1 * (sg1 * sf1 - cg1 * ct1 * cf1) - dt2 * sg2 * (sg2 * sf2 + cg2 * ct2 * cf2)
        - dg1 * st1 * cf1
        - dg2 * st2 * cf2
        + df1 * sg1 * st1 * (cg1 * sf1 + sg1 * ct1 * cf1)
        + df2 * sg2 * st2 * (cg2 * sf2 - sg2 * ct2 * cf2);
    let o14 = -dt1 * sg1 * (sg1 * cf1 + cg1 * ct1 * sf1) + dt2 * sg2 * (sg2 * cf2 - cg2 * ct2 * sf2)
        - dg1 * st1 * sf1
        - dg2 * st2 * sf2
        - df1 * sg1 * st1 * (cg1 * cf1 - sg1 * ct1 * sf1)
        - df2 * sg2 * st2 * (cg2 * cf2 + sg2 * ct2 * sf2);
    let o23 = -dt1 * sg1 * (sg1 * cf1 + cg1 * ct1 * sf1) - dt2 * sg2 * (sg2 * cf2 - cg2 * ct2 * sf2)
        - dg1 * st1 * sf1
        + dg2 * st2 * sf2
        - df1 * sg1 * st1 * (cg1 * cf1 - sg1 * ct1 * sf1)
        + df2 * sg2 * st2 * (cg2 * cf2 + sg2 * ct2 * sf2);
    let o24 = -dt1 * sg1 * (sg1 * sf1 - cg1 * ct1 * cf1) - dt2 * sg2 * (sg2 * sf2 + cg2 * ct2 * cf2)
        + dg1 * st1 * cf1
        - dg2 * st2 * cf2
        - df1 * sg1 * st1 * (cg1 * sf1 + sg1 * ct1 * cf1)
        + df2 * sg2 * st2 * (cg2 * sf2 - sg2 * ct2 * cf2);
    let o34 = sg1 * st1 * (dt1 * cg1 - df1 * sg1 * st1) - sg2 * st2 * (dt2 * cg2 + df2 * sg2 * st2) - dg1 * ct1
        + dg2 * ct2;
    [o12, o13, o14, o23, o24, o34]
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// U(t) = K(t) U_r(t) K(0)^dagger.
pub fn parameterized_propagator(traj: &AzimuthTrajectory, t: f64) -> Result<Mat4> {
    traj.check_initial_condition()?;
    let start = traj.at(0.0);
    let now = traj.at(t);
    Ok(now.phase_matrix() * now.rotation() * start.phase_matrix().adjoint())
}

/// H(t) = i K U_r' U_r^T K^dagger + i K' K^dagger, assembled from the coupling amplitudes.
pub fn parameterized_hamiltonian(traj: &AzimuthTrajectory, t: f64) -> Mat4 {
    hamiltonian_at(&traj.at(t))
}

pub fn hamiltonian_at(p: &TrajectoryPoint) -> Mat4 {
    let omega = omega_couplings(&p.angles, &p.angle_rates);
    let mut h = Mat4::zeros();
    for k in 0..4 {
        h[(k, k)] = C64::new(-p.level_phase_rate(k), 0.0);
    }
    for (&(m, n), &o) in PAIRS.iter().zip(omega.iter()) {
        let entry = C64::new(0.0, o) * C64::from_polar(1.0, p.level_phase(m) - p.level_phase(n));
        h[(m, n)] = entry;
        h[(n, m)] = entry.conj();
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_rates(rates: [f64; 6], phase_rates: [f64; 3]) -> AzimuthTrajectory {
        AzimuthTrajectory::new(move |t| {
            let mut angles = rates.map(|r| r * t);
            angles[1] += 0.4;
            angles[2] += 1.0;
            angles[4] += 2.0;
            angles[5] += -0.3;
            TrajectoryPoint {
                angles: Azimuths::from_array(angles),
                angle_rates: Azimuths::from_array(rates),
                phases: phase_rates.map(|r| r * t + 0.2),
                phase_rates,
            }
        })
    }

    #[test]
    fn identity_at_start() {
        let traj = constant_rates([0.3, 0.1, -0.2, 0.5, 0.7, 0.0], [1.0, -2.0, 0.5]);
        let u = parameterized_propagator(&traj, 0.0).unwrap();
        assert!((u - Mat4::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn nonzero_initial_rotation_rejected() {
        let traj = AzimuthTrajectory::new(|_| TrajectoryPoint {
            angles: Azimuths { gamma1: 0.1, ..Default::default() },
            ..Default::default()
        });
        assert!(matches!(parameterized_propagator(&traj, 1.0), Err(Error::InvalidTrajectory(_))));
    }

    #[test]
    fn frozen_trajectory_has_zero_hamiltonian() {
        let traj = constant_rates([0.0; 6], [0.0; 3]);
        assert_eq!(parameterized_hamiltonian(&traj, 0.7), Mat4::zeros());
    }

    #[test]
    fn couplings_match_chain_rule_generator() {
        let traj = constant_rates([0.3, 0.1, -0.2, 0.5, 0.7, 0.4], [0.0; 3]);
        for &t in &[0.3, 1.7, 4.2] {
            let p = traj.at(t);
            let a = &p.angles;
            let d = &p.angle_rates;
            let q = Quaternion::from_azimuths(a.gamma1, a.theta1, a.phi1);
            let pq = Quaternion::from_azimuths(a.gamma2, a.theta2, a.phi2);
            let dq = Quaternion::azimuth_rate(a.gamma1, a.theta1, a.phi1, d.gamma1, d.theta1, d.phi1);
            let dp = Quaternion::azimuth_rate(a.gamma2, a.theta2, a.phi2, d.gamma2, d.theta2, d.phi2);
            let ur = q.left_matrix() * pq.right_matrix();
            let dur = dq.left_matrix() * pq.right_matrix() + q.left_matrix() * dp.right_matrix();
            let g = dur * ur.transpose();
            let o = omega_couplings(a, d);
            for (&(m, n), &v) in PAIRS.iter().zip(o.iter()) {
                assert!((g[(m, n)].re - v).abs() < 1e-12, "pair ({m},{n})");
            }
        }
    }

    #[test]
    fn symmetric_choice_gives_block_structure() {
        // tied rates with fixed direction angles at pi/2 leave no direct 00-11 coupling
        let theta1 = 0.6f64;
        let phi2 = 1.1f64;
        let traj = AzimuthTrajectory::new(move |t| {
            let g1 = 0.8 * t;
            let dg2 = -0.8 * theta1.sin() / phi2.sin();
            TrajectoryPoint {
                angles: Azimuths { gamma1: g1, theta1, phi1: FRAC_PI_2, gamma2: dg2 * t, theta2: FRAC_PI_2, phi2 },
                angle_rates: Azimuths { gamma1: 0.8, gamma2: dg2, ..Default::default() },
                ..Default::default()
            }
        });
        for &t in &[0.2, 0.9, 2.5] {
            let p = traj.at(t);
            let o = omega_couplings(&p.angles, &p.angle_rates);
            assert!(o[2].abs() < 1e-14, "o14 = {}", o[2]);
            assert!((o[0] - o[5]).abs() < 1e-14);
            assert!((o[1] - o[4]).abs() < 1e-14);
        }
    }
}
