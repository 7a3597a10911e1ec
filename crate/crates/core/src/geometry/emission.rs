//! Angle-resolved average emission times of the four photon classes.
//!
//! A pair is born, on average, at the centre of its crystal. Referenced to
//! the moment the pump pulse centre enters the first crystal:
//!
//! | class | time |
//! |-------|------|
//! | 1o | `½t_p1 + ½t_o1 + t_o2` |
//! | 1e | `½t_p1 + ½t_e1 + t_e'2` |
//! | 2o | `t_p1 + ½t_p2 + ½t_o2` |
//! | 2e | `t_p1 + ½t_p2 + ½t_e2` |
//!
//! where every photon time uses that photon's own path length and group
//! index, with `t_e'2` the first crystal's e-photon evaluated against the
//! second crystal's optic axis. Times are defined at the exit face of the
//! second crystal.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::Serialize;

use super::phase_match::{extraordinary_wave, ordinary_wave, PhaseMatcher};
use crate::constants::{NM_PER_MM, SPEED_OF_LIGHT_NM_PER_FS};
use crate::exec::Exec;
use crate::materials::{CrystalSpec, PropagationTimes, PumpSpec};
use crate::{Error, Result};

pub const DEFAULT_PHI_POINTS: usize = 256;

/// Largest pair arrival-time mismatch over the cones accepted as "flat", fs.
pub const FLATNESS_TOLERANCE_FS: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PhotonClass {
    FirstE,
    FirstO,
    SecondE,
    SecondO,
}

impl PhotonClass {
    pub const ALL: [PhotonClass; 4] = [
        PhotonClass::FirstE,
        PhotonClass::FirstO,
        PhotonClass::SecondE,
        PhotonClass::SecondO,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PhotonClass::FirstE => "1e",
            PhotonClass::FirstO => "1o",
            PhotonClass::SecondE => "2e",
            PhotonClass::SecondO => "2o",
        }
    }

    fn is_first(self) -> bool {
        matches!(self, PhotonClass::FirstE | PhotonClass::FirstO)
    }

    fn is_extraordinary(self) -> bool {
        matches!(self, PhotonClass::FirstE | PhotonClass::SecondE)
    }
}

/// Two crystals with mirror-image optic axes, pumped in sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Cascade {
    pub first: CrystalSpec,
    pub second: CrystalSpec,
}

impl Cascade {
    pub fn new(first: CrystalSpec, second: CrystalSpec) -> Result<Self> {
        if first.model != second.model {
            return Err(Error::InvalidArgument(format!(
                "cascade crystals must share a material ({} vs {})",
                first.model.name, second.model.name
            )));
        }
        if first.cut_angle != second.cut_angle || first.axis_sign == second.axis_sign {
            return Err(Error::InvalidArgument(
                "cascade crystals must have mirror-image optic axes (+psi, -psi)".into(),
            ));
        }
        Ok(Self { first, second })
    }

    /// Two identical crystals, the second mirrored.
    pub fn symmetric(crystal: CrystalSpec) -> Self {
        let second = crystal.mirrored();
        Self {
            first: crystal,
            second,
        }
    }

    /// Single-crystal source: the second crystal has zero thickness.
    pub fn single(crystal: CrystalSpec) -> Self {
        let mut second = crystal.mirrored();
        second.thickness_mm = 0.0;
        Self {
            first: crystal,
            second,
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(Self {
            first: self
                .first
                .with_thickness(self.first.thickness_mm * factor)?,
            second: self
                .second
                .with_thickness(self.second.thickness_mm * factor)?,
        })
    }
}

/// Fixed delays added to each class (birefringent delay lines), fs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ClassDelays {
    pub first_e: f64,
    pub first_o: f64,
    pub second_e: f64,
    pub second_o: f64,
}

impl ClassDelays {
    /// Delay the first crystal's e-photon (beam B) by `tau_b` and the
    /// second crystal's e-photon (beam A) by `tau_a`.
    pub fn compensating(tau_a: f64, tau_b: f64) -> Self {
        Self {
            first_e: tau_b,
            second_e: tau_a,
            ..Self::default()
        }
    }

    pub fn get(&self, class: PhotonClass) -> f64 {
        match class {
            PhotonClass::FirstE => self.first_e,
            PhotonClass::FirstO => self.first_o,
            PhotonClass::SecondE => self.second_e,
            PhotonClass::SecondO => self.second_o,
        }
    }

    fn validate(&self) -> Result<()> {
        for class in PhotonClass::ALL {
            let d = self.get(class);
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "delay for class {} must be finite and non-negative, got {d} fs",
                    class.label()
                )));
            }
        }
        Ok(())
    }
}

/// Average emission times of the four classes at one azimuth, fs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EmissionTimes {
    pub first_e: f64,
    pub first_o: f64,
    pub second_e: f64,
    pub second_o: f64,
}

impl EmissionTimes {
    pub fn get(&self, class: PhotonClass) -> f64 {
        match class {
            PhotonClass::FirstE => self.first_e,
            PhotonClass::FirstO => self.first_o,
            PhotonClass::SecondE => self.second_e,
            PhotonClass::SecondO => self.second_o,
        }
    }

    fn delayed(self, d: &ClassDelays) -> Self {
        Self {
            first_e: self.first_e + d.first_e,
            first_o: self.first_o + d.first_o,
            second_e: self.second_e + d.second_e,
            second_o: self.second_o + d.second_o,
        }
    }

    /// `(|t_1e − t_2o|, |t_1o − t_2e|)`.
    pub fn pair_offsets(&self) -> (f64, f64) {
        (
            (self.first_e - self.second_o).abs(),
            (self.first_o - self.second_e).abs(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmissionTimeMap {
    /// Azimuths, rad, strictly increasing on `[0, 2π)`.
    pub phi: Vec<f64>,
    /// Times including `delays`.
    pub times: Vec<EmissionTimes>,
    pub delays: ClassDelays,
}

/// `n` uniform azimuths on `[0, 2π)`.
pub fn default_phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

fn check_phi_grid(phi: &[f64]) -> Result<()> {
    if phi.is_empty() {
        return Err(Error::InvalidArgument("empty azimuth grid".into()));
    }
    if phi
        .iter()
        .any(|p| !(p.is_finite() && (0.0..2.0 * PI).contains(p)))
    {
        return Err(Error::InvalidArgument(
            "azimuths must lie in [0, 2pi)".into(),
        ));
    }
    if phi.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "azimuth grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Time scale `L/c` for a slab, fs per unit index.
fn slab_time(crystal: &CrystalSpec) -> f64 {
    crystal.thickness_mm * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS
}

/// Emission time (no added delay) of `class` for a photon leaving with
/// external transverse component `sin_ext` at azimuth `phi`. The direction
/// need not be phase-matched, which lets callers probe e.g. the pump axis.
pub fn photon_time_for_direction(
    cascade: &Cascade,
    pump: &PumpSpec,
    class: PhotonClass,
    sin_ext: f64,
    phi: f64,
) -> Result<f64> {
    let model = &cascade.first.model;
    let lam_p = pump.center_wavelength_nm;
    let lam = pump.degenerate_wavelength_nm();
    let pump_ng = model.group_index(
        lam_p,
        crate::materials::Polarization::Extraordinary {
            theta: cascade.first.cut_angle,
        },
    )?;
    model.check_wavelength(lam)?;
    // group_index above has already checked the pump wavelength; the
    // degenerate wavelength needs the strict interior as well.
    model.group_index(lam, crate::materials::Polarization::Ordinary)?;

    let tp1 = slab_time(&cascade.first) * pump_ng;
    let tp2 = slab_time(&cascade.second) * pump_ng;

    let through = |crystal: &CrystalSpec| -> Result<f64> {
        if class.is_extraordinary() {
            let w = extraordinary_wave(model, lam, &crystal.optic_axis(), sin_ext, phi);
            let ng = model.e_group_index_cos2(lam, w.axis_cos2);
            Ok(crystal.path_length(&w.direction)? * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS * ng)
        } else {
            let w = ordinary_wave(model.ordinary.index(lam), sin_ext, phi);
            let ng = model.o_group_index(lam);
            Ok(crystal.path_length(&w.direction)? * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS * ng)
        }
    };

    if class.is_first() {
        Ok(0.5 * tp1 + 0.5 * through(&cascade.first)? + through(&cascade.second)?)
    } else {
        Ok(tp1 + 0.5 * tp2 + 0.5 * through(&cascade.second)?)
    }
}

/// Phase-matched emission times of all four classes at azimuth `phi`,
/// without added delays.
pub fn emission_times_at(cascade: &Cascade, pump: &PumpSpec, phi: f64) -> Result<EmissionTimes> {
    let m1 = PhaseMatcher::new(&cascade.first, pump)?;
    let m2 = PhaseMatcher::new(&cascade.second, pump)?;
    times_with(cascade, pump, &m1, &m2, phi)
}

fn times_with(
    cascade: &Cascade,
    pump: &PumpSpec,
    m1: &PhaseMatcher<'_>,
    m2: &PhaseMatcher<'_>,
    phi: f64,
) -> Result<EmissionTimes> {
    let t = |class, s| photon_time_for_direction(cascade, pump, class, s, phi);
    Ok(EmissionTimes {
        first_e: t(PhotonClass::FirstE, m1.transverse(phi + PI)?)?,
        first_o: t(PhotonClass::FirstO, m1.transverse(phi)?)?,
        second_e: t(PhotonClass::SecondE, m2.transverse(phi + PI)?)?,
        second_o: t(PhotonClass::SecondO, m2.transverse(phi)?)?,
    })
}

/// Average emission times over an azimuth grid with fixed per-class delays.
pub fn emission_time_map(
    cascade: &Cascade,
    pump: &PumpSpec,
    delays: ClassDelays,
    phi_grid: &[f64],
    exec: Exec,
) -> Result<EmissionTimeMap> {
    check_phi_grid(phi_grid)?;
    delays.validate()?;
    let m1 = PhaseMatcher::new(&cascade.first, pump)?;
    let m2 = PhaseMatcher::new(&cascade.second, pump)?;
    let times = exec.try_map(phi_grid, |&phi| {
        times_with(cascade, pump, &m1, &m2, phi).map(|t| t.delayed(&delays))
    })?;
    Ok(EmissionTimeMap {
        phi: phi_grid.to_vec(),
        times,
        delays,
    })
}

/// Largest arrival-time difference between the two photons that share a
/// beam, `max_φ max(|t_1e − t_2o|, |t_1o − t_2e|)`, fs. Meaningful for maps
/// of at least 64 azimuths.
pub fn pairing_mismatch(map: &EmissionTimeMap) -> f64 {
    map.times
        .iter()
        .map(|t| {
            let (b, a) = t.pair_offsets();
            b.max(a)
        })
        .fold(0.0, f64::max)
}

/// Constant delays for 1e and 2e that minimise [`pairing_mismatch`] over
/// the map. `map` should carry no delays on 1o and 2o.
pub fn minimax_delays(map: &EmissionTimeMap) -> ClassDelays {
    let midrange = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        0.5 * (lo + hi)
    };
    let undelayed = |t: &EmissionTimes| {
        (
            t.first_e - map.delays.first_e,
            t.second_e - map.delays.second_e,
        )
    };
    let first_e = midrange(&mut map.times.iter().map(|t| t.second_o - undelayed(t).0));
    let second_e = midrange(&mut map.times.iter().map(|t| t.first_o - undelayed(t).1));
    ClassDelays {
        first_e,
        second_e,
        first_o: map.delays.first_o,
        second_o: map.delays.second_o,
    }
}

/// The two analysed directions: beam A (holding 1o and 2e) and beam B
/// (holding 1e and 2o).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BeamSelection {
    pub phi_a: f64,
    pub phi_b: f64,
}

impl BeamSelection {
    pub fn new(phi_a: f64, phi_b: f64) -> Result<Self> {
        if !(phi_a.is_finite() && phi_b.is_finite()) {
            return Err(Error::InvalidArgument(
                "beam azimuths must be finite".into(),
            ));
        }
        let diff = (phi_a - phi_b).rem_euclid(2.0 * PI);
        if diff < 1e-12 || 2.0 * PI - diff < 1e-12 {
            return Err(Error::InvalidArgument(
                "beam A and beam B must point in different directions".into(),
            ));
        }
        Ok(Self { phi_a, phi_b })
    }
}

/// Direction-resolved `(t_p, t_o, t_e, t_e')` for a beam selection: `t_o`
/// from the first crystal's o-photon in beam A, `t_e` and `t_e'` from the
/// first crystal's e-photon in beam B crossing the first and second crystal.
pub fn beam_propagation_times(
    cascade: &Cascade,
    pump: &PumpSpec,
    beams: BeamSelection,
) -> Result<PropagationTimes> {
    let model = &cascade.first.model;
    let lam = pump.degenerate_wavelength_nm();
    let m1 = PhaseMatcher::new(&cascade.first, pump)?;
    let axial = crate::materials::axial_propagation_times(&cascade.first, pump)?;

    let (_, o_wave) = m1.ordinary_photon(beams.phi_a)?;
    let o_dir: Vector3<f64> = o_wave.direction;
    let t_o = cascade.first.path_length(&o_dir)? * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS
        * model.o_group_index(lam);

    let (s_e, e1) = m1.extraordinary_photon(beams.phi_b)?;
    let t_e = cascade.first.path_length(&e1.direction)? * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS
        * model.e_group_index_cos2(lam, e1.axis_cos2);
    let e2 = extraordinary_wave(model, lam, &cascade.second.optic_axis(), s_e, beams.phi_b);
    let t_e2 = cascade.second.path_length(&e2.direction)? * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS
        * model.e_group_index_cos2(lam, e2.axis_cos2);

    Ok(PropagationTimes::new(axial.pump, t_o, t_e, t_e2))
}
