//! Aharonov-Bohm phase shifts for an electron passing a flux line that is
//! shielded by charged rotators, metallic rings or mesoscopic cylinders.
//!
//! Every model reports the conventional shift -eF/hbar together with the
//! supplementary shift caused by the shielding charges; see
//! [`PhaseShiftReport`]. The crate also integrates the classical motion of
//! charge, ring and flux, evaluates the measurability estimates, and runs
//! parameter sweeps with CSV output.

pub mod classical;
pub mod constants;
pub mod cylinder;
pub mod error;
pub mod measurability;
pub mod parallel;
pub mod report;
pub mod rotator;
pub mod selfcheck;
pub mod string;
pub mod sweep;
pub mod thermal;

pub use constants::{ab_shift, level_energy_scale, reduced_flux, EnergyScale, PhysicalConstants, ReducedFlux, SI};
pub use error::{Error, Result};
pub use parallel::Execution;
pub use report::PhaseShiftReport;
