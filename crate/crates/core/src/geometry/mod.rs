//! Cascade emission geometry.
//!
//! Coordinates: the pump travels along `+z`, the optic axes of the two
//! crystals lie in the x–z plane at `+ψ` and `−ψ`, and `φ` is the azimuth
//! of a photon's wavevector projected onto the x–y plane.

mod emission;
mod phase_match;

pub use emission::{
    beam_propagation_times, default_phi_grid, emission_time_map, emission_times_at, minimax_delays,
    pairing_mismatch, photon_time_for_direction, BeamSelection, Cascade, ClassDelays,
    EmissionTimeMap, EmissionTimes, PhotonClass, DEFAULT_PHI_POINTS, FLATNESS_TOLERANCE_FS,
};
pub use phase_match::{
    collinear_cut_angle, extraordinary_wave, internal_path_length, ordinary_wave,
    phase_match_cones, polar_direction, Cone, ConePair, InternalWave, PhaseMatcher,
};
