//! Run configuration: TOML with one table per concern. Angles are given in
//! degrees and wavelengths in nm; both are converted once, here.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spdc_cascade::analysis::LocalVisibility;
use spdc_cascade::geometry::{BeamSelection, Cascade};
use spdc_cascade::interference::RectBounds;
use spdc_cascade::materials::{AxisSign, CrystalSpec, DispersionModel, MaterialCatalog, PumpSpec};

/// Problems with the configuration itself (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub crystal: CrystalSection,
    pub materials: MaterialsSection,
    pub pump: PumpSection,
    pub interference: InterferenceSection,
    pub delays: DelaysSection,
    pub indices: IndicesSection,
    pub emission_map: EmissionMapSection,
    pub scan: ScanSection,
    pub visibility_curve: CurveSection,
    pub polarization: PolarizationSection,
    pub optimize: OptimizeSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrystalSection {
    pub material: String,
    pub thickness_mm: f64,
    /// Defaults to `thickness_mm`.
    pub second_thickness_mm: Option<f64>,
    pub cut_angle_deg: f64,
    pub cascade: bool,
}

impl Default for CrystalSection {
    fn default() -> Self {
        Self {
            material: "BBO".into(),
            thickness_mm: 1.07,
            second_thickness_mm: None,
            cut_angle_deg: 43.65,
            cascade: true,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialsSection {
    /// Extra material files, relative to the config file.
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpSection {
    pub center_nm: f64,
    pub bandwidth_nm: f64,
}

impl Default for PumpSection {
    fn default() -> Self {
        Self {
            center_nm: 395.0,
            bandwidth_nm: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimesSource {
    /// Photons along the pump axis.
    #[default]
    Axial,
    /// Photons in the beam directions `beam_a_phi_deg`, `beam_b_phi_deg`.
    Beams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterferenceSection {
    pub phi0_rad: f64,
    pub rect: RectChoice,
    pub times: TimesSource,
    pub beam_a_phi_deg: f64,
    pub beam_b_phi_deg: f64,
    /// Multiplies σ derived from the pump bandwidth.
    pub sigma_scale: f64,
}

impl Default for InterferenceSection {
    fn default() -> Self {
        Self {
            phi0_rad: 0.0,
            rect: RectChoice::Printed,
            times: TimesSource::Axial,
            beam_a_phi_deg: 90.0,
            beam_b_phi_deg: 270.0,
            sigma_scale: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RectChoice {
    #[default]
    Printed,
    Symmetric,
}

impl From<RectChoice> for RectBounds {
    fn from(c: RectChoice) -> Self {
        match c {
            RectChoice::Printed => RectBounds::Printed,
            RectChoice::Symmetric => RectBounds::Symmetric,
        }
    }
}

/// Birefringent delays. Unset values fall back to the closed-form optimum.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DelaysSection {
    pub tau_a_fs: Option<f64>,
    pub tau_b_fs: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IndicesSection {
    pub wavelengths_nm: Vec<f64>,
}

impl Default for IndicesSection {
    fn default() -> Self {
        Self {
            wavelengths_nm: vec![395.0, 790.0],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapDelays {
    /// `[delays]`, falling back to the closed-form optimum.
    #[default]
    Configured,
    /// Constant delays minimizing the pairing mismatch over the grid.
    Minimax,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EmissionMapSection {
    pub phi_points: usize,
    pub delays: MapDelays,
}

impl Default for EmissionMapSection {
    fn default() -> Self {
        Self {
            phi_points: 256,
            delays: MapDelays::Configured,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    #[default]
    Delay,
    /// Delay converted to quartz plate thickness.
    Quartz,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub theta_a_deg: f64,
    pub theta_b_deg: f64,
    /// τ_B range relative to the working point.
    pub half_span_fs: f64,
    /// Defaults to a 32nd of the fringe period.
    pub step_fs: Option<f64>,
    pub axis: ScanAxis,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            theta_a_deg: 45.0,
            theta_b_deg: 45.0,
            half_span_fs: 50.0,
            step_fs: None,
            axis: ScanAxis::Delay,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurveSection {
    /// Absolute τ_B grid; defaults span the optimum by −300/+200 fs.
    pub start_fs: Option<f64>,
    pub stop_fs: Option<f64>,
    pub step_fs: f64,
    /// `fringe_scan` (default) or `analytic` extrema.
    pub method: LocalVisibility,
}

impl Default for CurveSection {
    fn default() -> Self {
        Self {
            start_fs: None,
            stop_fs: None,
            step_fs: 5.0,
            method: LocalVisibility::default(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolarizationSection {
    pub theta_a_deg: f64,
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
    /// Shift τ_B (by at most a quarter fringe) onto a fringe extremum.
    pub lock_to_fringe: bool,
}

impl Default for PolarizationSection {
    fn default() -> Self {
        Self {
            theta_a_deg: 45.0,
            start_deg: 0.0,
            stop_deg: 180.0,
            step_deg: 180.0 / 128.0,
            lock_to_fringe: true,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeSection {
    pub half_width_fs: f64,
    pub quartz_material: String,
    /// Defaults to the degenerate wavelength.
    pub quartz_wavelength_nm: Option<f64>,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        Self {
            half_width_fs: 60.0,
            quartz_material: "quartz".into(),
            quartz_wavelength_nm: None,
        }
    }
}

/// Validated, unit-converted configuration.
#[derive(Debug)]
pub struct Setup {
    pub raw: RunConfig,
    pub catalog: MaterialCatalog,
    pub model: DispersionModel,
    pub first: CrystalSpec,
    /// Present only for cascades.
    pub cascade: Option<Cascade>,
    pub pump: PumpSpec,
    pub beams: BeamSelection,
}

fn finite(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be a finite number")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| bad(format!("invalid configuration: {e}")))
    }

    /// Checks every section and builds the physical objects. `base` is the
    /// directory material files are resolved against.
    pub fn validate(self, base: &Path) -> Result<Setup, ConfigError> {
        let c = &self.crystal;
        let mut catalog = MaterialCatalog::default();
        for file in &self.materials.files {
            let path = base.join(file);
            catalog
                .extend_from_file(&path)
                .map_err(|e| bad(format!("material file {}: {e}", path.display())))?;
        }
        let model = catalog.get(&c.material).cloned().ok_or_else(|| {
            let known: Vec<&str> = catalog.names().collect();
            bad(format!(
                "unknown material '{}' (known: {})",
                c.material,
                known.join(", ")
            ))
        })?;
        let psi = finite("crystal.cut_angle_deg", c.cut_angle_deg)?.to_radians();
        let first = CrystalSpec::new(model.clone(), c.thickness_mm, psi, AxisSign::Plus)
            .map_err(|e| bad(format!("[crystal] {e}")))?;
        let cascade = if c.cascade {
            let second = first
                .mirrored()
                .with_thickness(c.second_thickness_mm.unwrap_or(c.thickness_mm))
                .map_err(|e| bad(format!("[crystal] second crystal: {e}")))?;
            Some(Cascade::new(first.clone(), second).map_err(|e| bad(format!("[crystal] {e}")))?)
        } else {
            if c.second_thickness_mm.is_some() {
                return Err(bad(
                    "crystal.second_thickness_mm requires crystal.cascade = true",
                ));
            }
            None
        };
        let pump = PumpSpec::new(self.pump.center_nm, self.pump.bandwidth_nm)
            .map_err(|e| bad(format!("[pump] {e}")))?;

        let i = &self.interference;
        finite("interference.phi0_rad", i.phi0_rad)?;
        positive("interference.sigma_scale", i.sigma_scale)?;
        let beams = BeamSelection::new(
            finite("interference.beam_a_phi_deg", i.beam_a_phi_deg)?.to_radians(),
            finite("interference.beam_b_phi_deg", i.beam_b_phi_deg)?.to_radians(),
        )
        .map_err(|e| bad(format!("[interference] {e}")))?;

        for (name, v) in [
            ("delays.tau_a_fs", self.delays.tau_a_fs),
            ("delays.tau_b_fs", self.delays.tau_b_fs),
        ] {
            if let Some(v) = v {
                finite(name, v)?;
            }
        }
        for &lam in &self.indices.wavelengths_nm {
            positive("indices.wavelengths_nm", lam)?;
        }
        if self.emission_map.phi_points < 64 {
            return Err(bad(format!(
                "emission_map.phi_points must be at least 64, got {}",
                self.emission_map.phi_points
            )));
        }
        let s = &self.scan;
        finite("scan.theta_a_deg", s.theta_a_deg)?;
        finite("scan.theta_b_deg", s.theta_b_deg)?;
        positive("scan.half_span_fs", s.half_span_fs)?;
        if let Some(step) = s.step_fs {
            positive("scan.step_fs", step)?;
        }
        let v = &self.visibility_curve;
        positive("visibility_curve.step_fs", v.step_fs)?;
        match (v.start_fs, v.stop_fs) {
            (Some(a), Some(b)) if !(a.is_finite() && b.is_finite() && a < b) => {
                return Err(bad("visibility_curve.start_fs must be below stop_fs"));
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(bad(
                    "visibility_curve.start_fs and stop_fs must be given together",
                ));
            }
            _ => {}
        }
        let p = &self.polarization;
        finite("polarization.theta_a_deg", p.theta_a_deg)?;
        finite("polarization.start_deg", p.start_deg)?;
        finite("polarization.stop_deg", p.stop_deg)?;
        positive("polarization.step_deg", p.step_deg)?;
        if p.stop_deg <= p.start_deg {
            return Err(bad("polarization.stop_deg must exceed start_deg"));
        }
        let o = &self.optimize;
        positive("optimize.half_width_fs", o.half_width_fs)?;
        if let Some(lam) = o.quartz_wavelength_nm {
            positive("optimize.quartz_wavelength_nm", lam)?;
        }
        if catalog.get(&o.quartz_material).is_none() {
            return Err(bad(format!(
                "unknown delay-line material '{}'",
                o.quartz_material
            )));
        }

        Ok(Setup {
            raw: self,
            catalog,
            model,
            first,
            cascade,
            pump,
            beams,
        })
    }
}
