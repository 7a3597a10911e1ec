use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::model::{DispersionModel, Polarization};
use crate::constants::{NM_PER_MM, SPEED_OF_LIGHT_NM_PER_FS};
use crate::{Error, Result};

/// Which side of the pump axis the optic axis leans to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisSign {
    Plus,
    Minus,
}

impl AxisSign {
    pub fn value(self) -> f64 {
        match self {
            AxisSign::Plus => 1.0,
            AxisSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            AxisSign::Plus => AxisSign::Minus,
            AxisSign::Minus => AxisSign::Plus,
        }
    }
}

/// A uniaxial slab with its entrance face normal to the pump (`+z`) and the
/// optic axis in the x–z plane at `cut_angle` from the pump direction.
#[derive(Clone, Debug, PartialEq)]
pub struct CrystalSpec {
    pub model: DispersionModel,
    pub thickness_mm: f64,
    pub cut_angle: f64,
    pub axis_sign: AxisSign,
}

impl CrystalSpec {
    /// A zero thickness is accepted so that a cascade can degrade to a
    /// single crystal.
    pub fn new(
        model: DispersionModel,
        thickness_mm: f64,
        cut_angle: f64,
        axis_sign: AxisSign,
    ) -> Result<Self> {
        if !(thickness_mm.is_finite() && thickness_mm >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "crystal thickness must be finite and non-negative, got {thickness_mm} mm"
            )));
        }
        if !(cut_angle.is_finite() && 0.0 < cut_angle && cut_angle < FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "cut angle must lie in (0, pi/2) rad, got {cut_angle}"
            )));
        }
        Ok(Self {
            model,
            thickness_mm,
            cut_angle,
            axis_sign,
        })
    }

    /// Unit vector along the optic axis.
    pub fn optic_axis(&self) -> Vector3<f64> {
        Vector3::new(
            self.axis_sign.value() * self.cut_angle.sin(),
            0.0,
            self.cut_angle.cos(),
        )
    }

    /// Mirror partner: same crystal with the optic axis on the other side.
    pub fn mirrored(&self) -> Self {
        Self {
            axis_sign: self.axis_sign.flipped(),
            ..self.clone()
        }
    }

    pub fn with_thickness(&self, thickness_mm: f64) -> Result<Self> {
        Self::new(
            self.model.clone(),
            thickness_mm,
            self.cut_angle,
            self.axis_sign,
        )
    }

    /// Geometric path through the slab for an internal propagation
    /// direction: `L / cos θ`.
    pub fn path_length(&self, internal_dir: &Vector3<f64>) -> Result<f64> {
        let norm = internal_dir.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DegenerateGeometry("zero-length direction".into()));
        }
        let cos = internal_dir.z / norm;
        if cos <= GRAZING_COS {
            return Err(Error::DegenerateGeometry(format!(
                "direction with cos(theta) = {cos:.3e} does not cross the slab"
            )));
        }
        Ok(self.thickness_mm / cos)
    }
}

/// Directions with a smaller axial cosine are treated as grazing.
pub const GRAZING_COS: f64 = 1e-6;

/// Pulsed pump with a Gaussian spectrum `I(ω) ∝ exp[−2(ω − ω̄)²/σ²]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    pub center_wavelength_nm: f64,
    /// Intensity FWHM in wavelength.
    pub bandwidth_fwhm_nm: f64,
}

impl PumpSpec {
    pub fn new(center_wavelength_nm: f64, bandwidth_fwhm_nm: f64) -> Result<Self> {
        if !(center_wavelength_nm.is_finite() && center_wavelength_nm > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pump wavelength must be positive, got {center_wavelength_nm} nm"
            )));
        }
        if !(bandwidth_fwhm_nm.is_finite() && bandwidth_fwhm_nm > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pump bandwidth must be positive, got {bandwidth_fwhm_nm} nm"
            )));
        }
        Ok(Self {
            center_wavelength_nm,
            bandwidth_fwhm_nm,
        })
    }

    /// Centre angular frequency ω̄ = 2πc/λ, rad/fs.
    pub fn center_omega(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS / self.center_wavelength_nm
    }

    /// Spectral width σ of `exp[−2(ω − ω̄)²/σ²]`, rad/fs.
    ///
    /// The wavelength FWHM maps to `Δω = 2πcΔλ/λ²`; that profile has
    /// intensity FWHM `σ·sqrt(2 ln 2)`.
    pub fn sigma(&self) -> f64 {
        let lam = self.center_wavelength_nm;
        let fwhm_omega = 2.0 * PI * SPEED_OF_LIGHT_NM_PER_FS * self.bandwidth_fwhm_nm / (lam * lam);
        fwhm_omega / (2.0 * std::f64::consts::LN_2).sqrt()
    }

    /// Wavelength of each photon in degenerate down-conversion.
    pub fn degenerate_wavelength_nm(&self) -> f64 {
        2.0 * self.center_wavelength_nm
    }

    /// ω = ω̄/2.
    pub fn degenerate_omega(&self) -> f64 {
        0.5 * self.center_omega()
    }
}

/// Propagation times through one crystal of the cascade, fs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationTimes {
    /// Pump, `t_p`.
    pub pump: f64,
    /// Ordinary photon, `t_o`.
    pub ordinary: f64,
    /// Extraordinary photon in its own crystal, `t_e`.
    pub extraordinary: f64,
    /// Extraordinary photon of the first crystal crossing the second, `t_e'`.
    pub extraordinary_second: f64,
}

impl PropagationTimes {
    pub fn new(pump: f64, ordinary: f64, extraordinary: f64, extraordinary_second: f64) -> Self {
        Self {
            pump,
            ordinary,
            extraordinary,
            extraordinary_second,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            self.pump * factor,
            self.ordinary * factor,
            self.extraordinary * factor,
            self.extraordinary_second * factor,
        )
    }
}

/// Slab propagation times for degenerate down-conversion.
///
/// `e_angle` is the angle between the e-photon wavevector and the optic axis
/// of the crystal that generated it; `e_angle_second` the angle to the
/// second crystal's optic axis. The pump is an e-wave at the cut angle.
pub fn propagation_times(
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    e_angle: f64,
    e_angle_second: f64,
) -> Result<PropagationTimes> {
    let model = &crystal.model;
    let lam_p = pump.center_wavelength_nm;
    let lam_dc = pump.degenerate_wavelength_nm();
    let scale = crystal.thickness_mm * NM_PER_MM / SPEED_OF_LIGHT_NM_PER_FS;
    let ng_p = model.group_index(
        lam_p,
        Polarization::Extraordinary {
            theta: crystal.cut_angle,
        },
    )?;
    let ng_o = model.group_index(lam_dc, Polarization::Ordinary)?;
    let ng_e = model.group_index(lam_dc, Polarization::Extraordinary { theta: e_angle })?;
    let ng_e2 = model.group_index(
        lam_dc,
        Polarization::Extraordinary {
            theta: e_angle_second,
        },
    )?;
    Ok(PropagationTimes::new(
        scale * ng_p,
        scale * ng_o,
        scale * ng_e,
        scale * ng_e2,
    ))
}

/// Times for photons travelling along the pump axis: both e-angles equal
/// the cut angle.
pub fn axial_propagation_times(crystal: &CrystalSpec, pump: &PumpSpec) -> Result<PropagationTimes> {
    propagation_times(crystal, pump, crystal.cut_angle, crystal.cut_angle)
}
