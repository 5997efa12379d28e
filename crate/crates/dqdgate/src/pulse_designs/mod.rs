//! Exchange and drive pulse shapes realizing the solved integral constraints.

mod designs;
mod polynomial;
mod schedule;
mod sensitivity;

pub use designs::{
    b_drive_amplitude, bgate_rectangular, fsim_geometric, fsim_polynomial, fsim_rectangular, geometric_controls,
    polynomial_coefficients, polynomial_shape, BGateDesign, PolynomialLayout,
};
pub use polynomial::Polynomial;
pub use schedule::{ControlSample, DriveSample, DriveTone, PulseSchedule, Segment};
pub use sensitivity::{error_sensitivity, optimize_eta, EtaScan};
