//! Physical constants in the crate's unit system.

/// Speed of light in vacuum, nm/fs.
pub const SPEED_OF_LIGHT_NM_PER_FS: f64 = 299.792458;

/// Nanometres per millimetre.
pub const NM_PER_MM: f64 = 1.0e6;
