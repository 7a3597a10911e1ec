//! Degenerate type-II phase matching with the pump along `+z`.
//!
//! A down-converted pair shares a transverse wavevector: the o-photon leaves
//! at azimuth `φ` and the e-photon at `φ + π` with the same transverse
//! component. Outside the crystal that component is `sin α` (in units of
//! the vacuum wavenumber), where `α` is the external polar angle, so the
//! external directions of the two photons are point reflections of each
//! other. For each azimuth the longitudinal mismatch
//! `k_o,z + k_e,z − k_p` is a decreasing function of `sin α` and has a
//! single root when the cones enclose the pump axis.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Vector3;

use crate::materials::{CrystalSpec, DispersionModel, PumpSpec};
use crate::optimize::bisect;
use crate::{Error, Result};

/// Upper end of the `sin α` bracket (α ≈ 64°).
const MAX_EXTERNAL_SIN: f64 = 0.9;
const ROOT_TOL: f64 = 1e-15;

/// Unit vector at polar angle `theta` from `+z` and azimuth `phi`.
pub fn polar_direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    )
}

/// Internal wave inside a crystal for a given external transverse
/// component and azimuth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InternalWave {
    pub direction: Vector3<f64>,
    /// Phase index seen by the wave.
    pub index: f64,
    /// cos² of the angle to the optic axis (1 for o-waves, by convention
    /// unused).
    pub axis_cos2: f64,
}

/// Refract an o-wave with external transverse `sin_ext` into the crystal.
pub fn ordinary_wave(n_o: f64, sin_ext: f64, phi: f64) -> InternalWave {
    let theta = (sin_ext / n_o).asin();
    InternalWave {
        direction: polar_direction(theta, phi),
        index: n_o,
        axis_cos2: 1.0,
    }
}

/// Refract an e-wave into a crystal with optic axis `axis`. The index
/// depends on the direction, so `n(θ)·sin θ = sin_ext` is solved by fixed
/// point iteration; the map contracts strongly because the index varies
/// slowly with angle.
pub fn extraordinary_wave(
    model: &DispersionModel,
    lam_nm: f64,
    axis: &Vector3<f64>,
    sin_ext: f64,
    phi: f64,
) -> InternalWave {
    let mut n = model.ordinary.index(lam_nm);
    let mut theta = (sin_ext / n).asin();
    let mut dir = polar_direction(theta, phi);
    for _ in 0..100 {
        let c2 = dir.dot(axis).powi(2);
        n = model.e_index_cos2(lam_nm, c2);
        let next = (sin_ext / n).asin();
        let done = (next - theta).abs() <= 1e-16;
        theta = next;
        dir = polar_direction(theta, phi);
        if done {
            break;
        }
    }
    let c2 = dir.dot(axis).powi(2);
    InternalWave {
        direction: dir,
        index: model.e_index_cos2(lam_nm, c2),
        axis_cos2: c2,
    }
}

/// Phase-matching solver for one crystal.
#[derive(Clone, Debug)]
pub struct PhaseMatcher<'a> {
    crystal: &'a CrystalSpec,
    lam_dc: f64,
    axis: Vector3<f64>,
    n_o: f64,
    k_pump: f64,
}

impl<'a> PhaseMatcher<'a> {
    pub fn new(crystal: &'a CrystalSpec, pump: &PumpSpec) -> Result<Self> {
        let model = &crystal.model;
        let lam_p = pump.center_wavelength_nm;
        let lam_dc = pump.degenerate_wavelength_nm();
        model.check_wavelength(lam_p)?;
        model.check_wavelength(lam_dc)?;
        let matcher = Self {
            crystal,
            lam_dc,
            axis: crystal.optic_axis(),
            n_o: model.ordinary.index(lam_dc),
            k_pump: model.e_index_cos2(lam_p, crystal.cut_angle.cos().powi(2)) / lam_p,
        };
        let axial = matcher.residual(0.0, 0.0);
        if axial < 0.0 {
            // Search the whole angular range for any positive mismatch.
            let best = (0..=64)
                .flat_map(|i| {
                    let s = MAX_EXTERNAL_SIN * i as f64 / 64.0;
                    (0..8).map(move |j| (s, 2.0 * PI * j as f64 / 8.0))
                })
                .map(|(s, phi)| matcher.residual(s, phi))
                .fold(f64::NEG_INFINITY, f64::max);
            let to_rad_per_um = |r: f64| 2.0 * PI * r * 1e3;
            return Err(if best < 0.0 {
                Error::NotPhaseMatchable {
                    residual_rad_per_um: to_rad_per_um(best),
                }
            } else {
                Error::ConeExcludesAxis {
                    residual_rad_per_um: to_rad_per_um(axial),
                }
            });
        }
        Ok(matcher)
    }

    pub fn crystal(&self) -> &CrystalSpec {
        self.crystal
    }

    /// Longitudinal mismatch `(k_o,z + k_e,z − k_p)/2π` in 1/nm for an
    /// o-photon at azimuth `phi_o` with external transverse `sin_ext`.
    pub fn residual(&self, sin_ext: f64, phi_o: f64) -> f64 {
        let o = ordinary_wave(self.n_o, sin_ext, phi_o);
        let e = extraordinary_wave(
            &self.crystal.model,
            self.lam_dc,
            &self.axis,
            sin_ext,
            phi_o + PI,
        );
        (o.index * o.direction.z + e.index * e.direction.z) / self.lam_dc - self.k_pump
    }

    /// External `sin α` of the pair whose o-photon leaves at azimuth `phi_o`.
    pub fn transverse(&self, phi_o: f64) -> Result<f64> {
        bisect(|s| self.residual(s, phi_o), 0.0, MAX_EXTERNAL_SIN, ROOT_TOL).ok_or_else(|| {
            Error::DegenerateGeometry(format!(
                "no phase-matched emission below {:.1} deg at azimuth {phi_o:.4} rad",
                MAX_EXTERNAL_SIN.asin().to_degrees()
            ))
        })
    }

    /// The o-photon at azimuth `phi`: external `sin α` and internal wave.
    pub fn ordinary_photon(&self, phi: f64) -> Result<(f64, InternalWave)> {
        let s = self.transverse(phi)?;
        Ok((s, ordinary_wave(self.n_o, s, phi)))
    }

    /// The e-photon at azimuth `phi` (its partner o-photon is at `phi + π`).
    pub fn extraordinary_photon(&self, phi: f64) -> Result<(f64, InternalWave)> {
        let s = self.transverse(phi + PI)?;
        Ok((
            s,
            extraordinary_wave(&self.crystal.model, self.lam_dc, &self.axis, s, phi),
        ))
    }
}

/// A circular-cone summary: axis direction and half-opening angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cone {
    pub axis: Vector3<f64>,
    pub half_angle: f64,
}

impl Cone {
    /// Signed tilt of the axis from `+z` toward `+x`.
    pub fn tilt(&self) -> f64 {
        self.axis.x.atan2(self.axis.z)
    }

    /// Cone through two in-plane polar angles: `toward_plus_x` at azimuth 0
    /// and `toward_minus_x` at azimuth π.
    fn from_in_plane(toward_plus_x: f64, toward_minus_x: f64) -> Self {
        let tilt = 0.5 * (toward_plus_x - toward_minus_x);
        Self {
            axis: Vector3::new(tilt.sin(), 0.0, tilt.cos()),
            half_angle: 0.5 * (toward_plus_x + toward_minus_x),
        }
    }
}

/// Emission cones of one crystal, inside and after exit-face refraction.
///
/// The true cones are only approximately circular; these summaries are
/// fitted through the two in-plane (x–z) points of each cone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePair {
    pub o_cone: Cone,
    pub e_cone: Cone,
    pub external_o: Cone,
    pub external_e: Cone,
}

impl ConePair {
    /// Whether the external circles cross in two points.
    pub fn external_circles_intersect(&self) -> bool {
        let sep = (self.external_o.tilt() - self.external_e.tilt()).abs();
        let (a, b) = (self.external_o.half_angle, self.external_e.half_angle);
        sep < a + b && sep > (a - b).abs()
    }
}

/// Phase-matched o- and e-cones of one crystal.
pub fn phase_match_cones(crystal: &CrystalSpec, pump: &PumpSpec) -> Result<ConePair> {
    let m = PhaseMatcher::new(crystal, pump)?;
    let (s_o0, o0) = m.ordinary_photon(0.0)?;
    let (s_opi, opi) = m.ordinary_photon(PI)?;
    let (s_e0, e0) = m.extraordinary_photon(0.0)?;
    let (s_epi, epi) = m.extraordinary_photon(PI)?;
    let polar = |w: &InternalWave| w.direction.z.acos();
    Ok(ConePair {
        o_cone: Cone::from_in_plane(polar(&o0), polar(&opi)),
        e_cone: Cone::from_in_plane(polar(&e0), polar(&epi)),
        external_o: Cone::from_in_plane(s_o0.asin(), s_opi.asin()),
        external_e: Cone::from_in_plane(s_e0.asin(), s_epi.asin()),
    })
}

/// Cut angle at which degenerate type-II emission becomes collinear with
/// the pump (cones tangent at the pump axis).
pub fn collinear_cut_angle(model: &DispersionModel, pump: &PumpSpec) -> Result<f64> {
    let lam_p = pump.center_wavelength_nm;
    let lam_dc = pump.degenerate_wavelength_nm();
    model.check_wavelength(lam_p)?;
    model.check_wavelength(lam_dc)?;
    let n_o = model.ordinary.index(lam_dc);
    let mismatch = |psi: f64| {
        let c2 = psi.cos().powi(2);
        (n_o + model.e_index_cos2(lam_dc, c2)) / lam_dc - model.e_index_cos2(lam_p, c2) / lam_p
    };
    bisect(mismatch, 1e-6, FRAC_PI_2 - 1e-6, 1e-14).ok_or(Error::NotPhaseMatchable {
        residual_rad_per_um: 2.0 * PI * 1e3 * mismatch(FRAC_PI_2 - 1e-6),
    })
}

/// Internal path length through `crystal` for a photon leaving with
/// external direction `external_dir`, refracted at the entrance face with
/// the index of the given polarization at the degenerate wavelength of
/// `pump`.
pub fn internal_path_length(
    crystal: &CrystalSpec,
    pump: &PumpSpec,
    external_dir: &Vector3<f64>,
    extraordinary: bool,
) -> Result<f64> {
    let norm = external_dir.norm();
    if !(norm.is_finite() && norm > 0.0) || external_dir.z <= 0.0 {
        return Err(Error::DegenerateGeometry(
            "direction must point along +z".into(),
        ));
    }
    let d = external_dir / norm;
    let sin_ext = (d.x * d.x + d.y * d.y).sqrt();
    let phi = d.y.atan2(d.x);
    let lam = pump.degenerate_wavelength_nm();
    crystal.model.check_wavelength(lam)?;
    let wave = if extraordinary {
        extraordinary_wave(&crystal.model, lam, &crystal.optic_axis(), sin_ext, phi)
    } else {
        ordinary_wave(crystal.model.ordinary.index(lam), sin_ext, phi)
    };
    crystal.path_length(&wave.direction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::AxisSign;

    fn reference_crystal() -> CrystalSpec {
        CrystalSpec::new(
            DispersionModel::bbo(),
            1.07,
            43.65f64.to_radians(),
            AxisSign::Plus,
        )
        .unwrap()
    }

    #[test]
    fn e_wave_satisfies_snell() {
        let c = reference_crystal();
        let w = extraordinary_wave(&c.model, 790.0, &c.optic_axis(), 0.1, 1.0);
        let sin_int = (w.direction.x.powi(2) + w.direction.y.powi(2)).sqrt();
        assert!((w.index * sin_int - 0.1).abs() < 1e-14);
    }

    #[test]
    fn residual_vanishes_at_solution() {
        let c = reference_crystal();
        let pump = PumpSpec::new(395.0, 1.0).unwrap();
        let m = PhaseMatcher::new(&c, &pump).unwrap();
        for phi in [0.0, 1.0, 2.5, 4.0] {
            let s = m.transverse(phi).unwrap();
            assert!(s > 0.0);
            assert!(m.residual(s, phi).abs() < 1e-12);
        }
    }

    #[test]
    fn far_below_collinear_is_not_phase_matchable() {
        let c = CrystalSpec::new(
            DispersionModel::bbo(),
            1.0,
            20f64.to_radians(),
            AxisSign::Plus,
        )
        .unwrap();
        let pump = PumpSpec::new(395.0, 1.0).unwrap();
        assert!(matches!(
            PhaseMatcher::new(&c, &pump),
            Err(Error::NotPhaseMatchable { .. })
        ));
    }
}
