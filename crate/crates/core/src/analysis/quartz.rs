use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::constants::{NM_PER_MM, SPEED_OF_LIGHT_NM_PER_FS};
use crate::materials::{DispersionModel, Polarization};
use crate::{Error, Result};

/// Birefringent plate used as a delay line: the delay between o- and
/// e-polarized wave packets is `L·|n_g,o − n_g,e|/c`, with the e-wave
/// travelling normal to the optic axis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuartzDelayLine {
    pub model: DispersionModel,
    pub wavelength_nm: f64,
    fs_per_mm: f64,
}

impl QuartzDelayLine {
    pub fn new(model: DispersionModel, wavelength_nm: f64) -> Result<Self> {
        let ng_o = model.group_index(wavelength_nm, Polarization::Ordinary)?;
        let ng_e = model.group_index(
            wavelength_nm,
            Polarization::Extraordinary { theta: FRAC_PI_2 },
        )?;
        let fs_per_mm = (ng_o - ng_e).abs() * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS;
        if fs_per_mm == 0.0 {
            return Err(Error::DegenerateParameters(format!(
                "{} has no group birefringence at {wavelength_nm} nm",
                model.name
            )));
        }
        Ok(Self {
            model,
            wavelength_nm,
            fs_per_mm,
        })
    }

    pub fn fs_per_mm(&self) -> f64 {
        self.fs_per_mm
    }

    pub fn delay_fs(&self, thickness_mm: f64) -> Result<f64> {
        if !(thickness_mm.is_finite() && thickness_mm >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "plate thickness must be non-negative, got {thickness_mm} mm"
            )));
        }
        Ok(thickness_mm * self.fs_per_mm)
    }

    pub fn thickness_mm(&self, delay_fs: f64) -> Result<f64> {
        if !(delay_fs.is_finite() && delay_fs >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delay must be non-negative, got {delay_fs} fs"
            )));
        }
        Ok(delay_fs / self.fs_per_mm)
    }
}

/// Delay of a plate of `thickness_mm` at `wavelength_nm`, fs.
pub fn quartz_delay(model: &DispersionModel, wavelength_nm: f64, thickness_mm: f64) -> Result<f64> {
    QuartzDelayLine::new(model.clone(), wavelength_nm)?.delay_fs(thickness_mm)
}

/// Plate thickness giving `delay_fs` at `wavelength_nm`, mm.
pub fn quartz_thickness(model: &DispersionModel, wavelength_nm: f64, delay_fs: f64) -> Result<f64> {
    QuartzDelayLine::new(model.clone(), wavelength_nm)?.thickness_mm(delay_fs)
}

/// Delays for both beams and the plate thicknesses that realize them. The
/// thicknesses are magnitudes; a negative delay means the plate is turned
/// so that the o-polarized photon is retarded instead.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DelayPrescription {
    pub tau_a: f64,
    pub tau_b: f64,
    pub quartz_a_mm: f64,
    pub quartz_b_mm: f64,
}

impl DelayPrescription {
    pub fn new(tau_a: f64, tau_b: f64, line: &QuartzDelayLine) -> Result<Self> {
        Ok(Self {
            tau_a,
            tau_b,
            quartz_a_mm: line.thickness_mm(tau_a.abs())?,
            quartz_b_mm: line.thickness_mm(tau_b.abs())?,
        })
    }
}
