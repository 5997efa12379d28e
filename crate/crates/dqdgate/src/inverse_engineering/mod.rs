//! Hamiltonian inverse engineering: a propagator is parametrized as
//! `K(t) L(q) R(p) K(0)^dagger` with left/right isoclinic factors and diagonal level phases,
//! and the Hamiltonian generating it is read off from the trajectory and its derivatives.
//! Matching that Hamiltonian against the device model fixes the physical controls.

mod controls;
mod trajectory;

pub use controls::{
    b_drive_ratio, fsim_gate, solve_bgate_controls, solve_fsim_controls, ConstraintWeight, DriveRequirement,
    GateKind, GateTarget, IntegralConstraint, PhysicalControls,
};
pub(crate) use controls::check_fsim_range;
pub use trajectory::{
    hamiltonian_at, omega_couplings, parameterized_hamiltonian, parameterized_propagator, AzimuthTrajectory,
    Azimuths, BFactorKind, ExchangeProfile, TrajectoryPoint,
};
