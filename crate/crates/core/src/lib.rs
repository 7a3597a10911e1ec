//! Simulation and optimization toolkit for cascaded type-II SPDC sources.
//!
//! Two identical uniaxial crystals are cut at `+ψ` and `-ψ` and pumped by a
//! pulsed beam. Each crystal's extraordinary cone overlaps the other crystal's
//! ordinary cone, so the polarization of a photon no longer reveals its
//! direction. What remains distinguishing is *timing*: a photon's average
//! emission time depends on its polarization and on the crystal it was born
//! in. This crate models that timing and the resulting two-photon
//! interference:
//!
//! * [`materials`]: Sellmeier dispersion, group indices and slab propagation
//!   times.
//! * [`geometry`]: phase-matched emission cones and the angle-resolved
//!   emission-time map of the four photon classes (1e, 1o, 2e, 2o).
//! * [`interference`]: coincidence rate, its Erf envelope and the acceptance
//!   window in the delay-sum.
//! * [`analysis`]: delay and analyzer scans, visibility extraction,
//!   delay optimization and quartz delay-line calibration.
//!
//! Units are fixed throughout: wavelengths in nm, times in fs, angles in rad,
//! thicknesses in mm, angular frequencies in rad/fs.

pub mod analysis;
pub mod constants;
pub mod error;
pub mod exec;
pub mod export;
pub mod geometry;
pub mod interference;
pub mod materials;
pub mod optimize;

pub use error::{Error, Result};
pub use exec::Exec;
