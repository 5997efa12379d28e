//! Composite two-qubit gate synthesis for silicon double quantum dots.
//!
//! Target gates are obtained by inverse engineering: a propagator is written as a
//! parameterized rotation, the Hamiltonian that generates it is read off, and matching that
//! Hamiltonian to the spin-qubit device model fixes the exchange and drive pulses.
//! The pulses are then simulated (closed or dephasing) and scored with grid-averaged fidelities.

pub mod algebra;
pub mod device_model;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod fidelity;
pub mod harness;
pub mod inverse_engineering;
pub mod kak;
pub mod pulse_designs;

pub use error::{Error, Result};
