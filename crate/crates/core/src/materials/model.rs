use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sellmeier::{Sellmeier, SellmeierTerm};
use crate::{Error, Result};

/// Polarization eigenmode of a uniaxial crystal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Polarization {
    Ordinary,
    /// Extraordinary wave travelling at `theta` (rad) to the optic axis.
    Extraordinary {
        theta: f64,
    },
}

/// Sign of the birefringence `n_e − n_o`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpticalSign {
    /// `n_e < n_o`, e.g. BBO.
    Negative,
    /// `n_e > n_o`, e.g. crystalline quartz.
    Positive,
    Isotropic,
}

/// Dispersion of a uniaxial crystal: Sellmeier formulas for the ordinary
/// and principal extraordinary indices over a wavelength interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionModel {
    pub name: String,
    pub ordinary: Sellmeier,
    pub extraordinary: Sellmeier,
    /// Inclusive wavelength interval in nm.
    pub valid_range_nm: [f64; 2],
    #[serde(default)]
    pub source: String,
}

impl DispersionModel {
    /// Builds a model and checks that both indices exceed one everywhere in
    /// the valid range.
    pub fn new(
        name: impl Into<String>,
        ordinary: Sellmeier,
        extraordinary: Sellmeier,
        valid_range_nm: [f64; 2],
        source: impl Into<String>,
    ) -> Result<Self> {
        let model = Self {
            name: name.into(),
            ordinary,
            extraordinary,
            valid_range_nm,
            source: source.into(),
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let [lo, hi] = self.valid_range_nm;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(Error::MaterialDefinition(format!(
                "{}: valid range [{lo}, {hi}] nm must be positive and increasing",
                self.name
            )));
        }
        if !self.ordinary.is_finite() || !self.extraordinary.is_finite() {
            return Err(Error::MaterialDefinition(format!(
                "{}: non-finite coefficient",
                self.name
            )));
        }
        const SAMPLES: usize = 257;
        for i in 0..SAMPLES {
            let lam = lo + (hi - lo) * i as f64 / (SAMPLES - 1) as f64;
            for (label, s) in [
                ("ordinary", &self.ordinary),
                ("extraordinary", &self.extraordinary),
            ] {
                let n2 = s.index_squared(lam);
                if !(n2.is_finite() && n2 > 1.0) {
                    return Err(Error::MaterialDefinition(format!(
                        "{}: {label} index squared is {n2} at {lam} nm (must exceed 1)",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Crystal with the same wavelength-independent index for both
    /// polarizations and a wide valid range. Handy as a zero-dispersion
    /// reference.
    pub fn constant(name: impl Into<String>, n: f64) -> Result<Self> {
        Self::new(
            name,
            Sellmeier::constant_index(n),
            Sellmeier::constant_index(n),
            [100.0, 10_000.0],
            "constant index",
        )
    }

    /// β-BaB₂O₄ after D. Eimerl et al., J. Appl. Phys. 62, 1968 (1987).
    pub fn bbo() -> Self {
        Self {
            name: "BBO".into(),
            ordinary: Sellmeier::new(
                2.7359,
                vec![
                    SellmeierTerm::Pole {
                        b: 0.01878,
                        c: 0.01822,
                    },
                    SellmeierTerm::Power {
                        b: -0.01354,
                        p: 2.0,
                    },
                ],
            ),
            extraordinary: Sellmeier::new(
                2.3753,
                vec![
                    SellmeierTerm::Pole {
                        b: 0.01224,
                        c: 0.01667,
                    },
                    SellmeierTerm::Power {
                        b: -0.01516,
                        p: 2.0,
                    },
                ],
            ),
            valid_range_nm: [220.0, 1060.0],
            source: "D. Eimerl et al., J. Appl. Phys. 62, 1968 (1987)".into(),
        }
    }

    /// Crystalline α-quartz after G. Ghosh, Opt. Commun. 163, 95 (1999).
    pub fn quartz() -> Self {
        let res = |b: f64, lam0: f64| SellmeierTerm::Resonance { b, c: lam0 * lam0 };
        Self {
            name: "quartz".into(),
            ordinary: Sellmeier::new(
                1.0,
                vec![
                    res(0.663044, 0.060),
                    res(0.517852, 0.106),
                    res(0.175912, 0.119),
                    res(0.565380, 8.844),
                    res(1.675299, 20.742),
                ],
            ),
            extraordinary: Sellmeier::new(
                1.0,
                vec![
                    res(0.665721, 0.060),
                    res(0.503511, 0.106),
                    res(0.214792, 0.119),
                    res(0.539173, 8.792),
                    res(1.807613, 19.70),
                ],
            ),
            valid_range_nm: [198.0, 2050.0],
            source: "G. Ghosh, Opt. Commun. 163, 95 (1999)".into(),
        }
    }

    pub fn check_wavelength(&self, lam_nm: f64) -> Result<()> {
        let [lo, hi] = self.valid_range_nm;
        if lam_nm.is_finite() && lo <= lam_nm && lam_nm <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                material: self.name.clone(),
                wavelength_nm: lam_nm,
                min_nm: lo,
                max_nm: hi,
            })
        }
    }

    fn check_interior(&self, lam_nm: f64) -> Result<()> {
        self.check_wavelength(lam_nm)?;
        let [lo, hi] = self.valid_range_nm;
        if lam_nm == lo || lam_nm == hi {
            return Err(Error::AtRangeBoundary {
                material: self.name.clone(),
                wavelength_nm: lam_nm,
                min_nm: lo,
                max_nm: hi,
            });
        }
        Ok(())
    }

    pub fn index_ordinary(&self, lam_nm: f64) -> Result<f64> {
        self.check_wavelength(lam_nm)?;
        Ok(self.ordinary.index(lam_nm))
    }

    /// Principal extraordinary index (propagation normal to the optic axis).
    pub fn index_principal_extraordinary(&self, lam_nm: f64) -> Result<f64> {
        self.check_wavelength(lam_nm)?;
        Ok(self.extraordinary.index(lam_nm))
    }

    /// Extraordinary index for a wave at `theta` to the optic axis:
    /// `1/n² = cos²θ/n_o² + sin²θ/n_e²`.
    pub fn index_extraordinary(&self, lam_nm: f64, theta: f64) -> Result<f64> {
        check_angle(theta)?;
        self.check_wavelength(lam_nm)?;
        Ok(self.e_index_cos2(lam_nm, theta.cos().powi(2)))
    }

    pub fn index(&self, lam_nm: f64, pol: Polarization) -> Result<f64> {
        match pol {
            Polarization::Ordinary => self.index_ordinary(lam_nm),
            Polarization::Extraordinary { theta } => self.index_extraordinary(lam_nm, theta),
        }
    }

    /// Group index `n − λ·dn/dλ` with the closed-form Sellmeier derivative.
    /// The wavelength must be strictly inside the valid range.
    pub fn group_index(&self, lam_nm: f64, pol: Polarization) -> Result<f64> {
        self.check_interior(lam_nm)?;
        match pol {
            Polarization::Ordinary => {
                Ok(self.ordinary.index(lam_nm) - lam_nm * self.ordinary.index_derivative(lam_nm))
            }
            Polarization::Extraordinary { theta } => {
                check_angle(theta)?;
                Ok(self.e_group_index_cos2(lam_nm, theta.cos().powi(2)))
            }
        }
    }

    pub fn optical_sign(&self, lam_nm: f64) -> Result<OpticalSign> {
        let no = self.index_ordinary(lam_nm)?;
        let ne = self.index_principal_extraordinary(lam_nm)?;
        Ok(if ne < no {
            OpticalSign::Negative
        } else if ne > no {
            OpticalSign::Positive
        } else {
            OpticalSign::Isotropic
        })
    }

    // Unchecked forms keyed by cos² of the angle to the optic axis; the
    // geometry code derives that directly from a dot product.

    pub(crate) fn e_index_cos2(&self, lam_nm: f64, cos2: f64) -> f64 {
        let no2 = self.ordinary.index_squared(lam_nm);
        let ne2 = self.extraordinary.index_squared(lam_nm);
        (cos2 / no2 + (1.0 - cos2) / ne2).powf(-0.5)
    }

    pub(crate) fn e_group_index_cos2(&self, lam_nm: f64, cos2: f64) -> f64 {
        let no = self.ordinary.index(lam_nm);
        let ne = self.extraordinary.index(lam_nm);
        let dno = self.ordinary.index_derivative(lam_nm);
        let dne = self.extraordinary.index_derivative(lam_nm);
        let n = self.e_index_cos2(lam_nm, cos2);
        // d/dλ of (cos²/n_o² + sin²/n_e²)^(-1/2)
        let dn = n.powi(3) * (cos2 * dno / no.powi(3) + (1.0 - cos2) * dne / ne.powi(3));
        n - lam_nm * dn
    }

    pub(crate) fn o_group_index(&self, lam_nm: f64) -> f64 {
        self.ordinary.index(lam_nm) - lam_nm * self.ordinary.index_derivative(lam_nm)
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_finite() && (0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange(theta))
    }
}

/// A set of named dispersion models: the built-in crystals plus anything
/// loaded from material files.
#[derive(Clone, Debug)]
pub struct MaterialCatalog {
    models: Vec<DispersionModel>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    #[serde(default)]
    material: Vec<DispersionModel>,
}

impl Default for MaterialCatalog {
    fn default() -> Self {
        Self {
            models: vec![DispersionModel::bbo(), DispersionModel::quartz()],
        }
    }
}

impl MaterialCatalog {
    pub fn empty() -> Self {
        Self { models: Vec::new() }
    }

    /// Parses `[[material]]` tables from TOML text. Each entry carries a
    /// `name`, a `valid_range_nm = [lo, hi]` pair and `ordinary` /
    /// `extraordinary` tables of the form
    /// `{ constant = A, terms = [{ kind = "pole", b = .., c = .. }, ..] }`.
    pub fn parse_models(text: &str) -> Result<Vec<DispersionModel>> {
        let file: MaterialFile = toml::from_str(text)?;
        file.material
            .into_iter()
            .map(|m| {
                m.validate()?;
                Ok(m)
            })
            .collect()
    }

    /// Adds models from TOML text; a model with an existing name replaces it.
    pub fn extend_from_str(&mut self, text: &str) -> Result<()> {
        for model in Self::parse_models(text)? {
            self.insert(model);
        }
        Ok(())
    }

    pub fn extend_from_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::MaterialDefinition(format!("cannot read {}: {e}", path.display()))
        })?;
        self.extend_from_str(&text)
    }

    pub fn insert(&mut self, model: DispersionModel) {
        match self
            .models
            .iter_mut()
            .find(|m| m.name.eq_ignore_ascii_case(&model.name))
        {
            Some(slot) => *slot = model,
            None => self.models.push(model),
        }
    }

    /// Case-insensitive lookup.
    pub fn get(&self, name: &str) -> Option<&DispersionModel> {
        self.models
            .iter()
            .find(|m| m.name.eq_ignore_ascii_case(name))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.models.iter().map(|m| m.name.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        DispersionModel::bbo().validate().unwrap();
        DispersionModel::quartz().validate().unwrap();
    }

    #[test]
    fn optic_axis_sees_ordinary_index() {
        let bbo = DispersionModel::bbo();
        let no = bbo.index_ordinary(790.0).unwrap();
        assert_eq!(bbo.index_extraordinary(790.0, 0.0).unwrap(), no);
        let ne = bbo.index_principal_extraordinary(790.0).unwrap();
        assert!((bbo.index_extraordinary(790.0, FRAC_PI_2).unwrap() - ne).abs() < 1e-15);
    }

    #[test]
    fn boundary_wavelength_rejected_for_group_index() {
        let bbo = DispersionModel::bbo();
        assert!(bbo.index_ordinary(220.0).is_ok());
        assert!(matches!(
            bbo.group_index(220.0, Polarization::Ordinary),
            Err(Error::AtRangeBoundary { .. })
        ));
    }

    #[test]
    fn rejects_index_below_one() {
        let err = DispersionModel::new(
            "bad",
            Sellmeier::constant_index(0.9),
            Sellmeier::constant_index(1.2),
            [400.0, 800.0],
            "",
        )
        .unwrap_err();
        assert!(matches!(err, Error::MaterialDefinition(_)));
    }

    #[test]
    fn angle_out_of_range() {
        let bbo = DispersionModel::bbo();
        assert!(matches!(
            bbo.index_extraordinary(790.0, 2.0),
            Err(Error::AngleOutOfRange(_))
        ));
    }

    #[test]
    fn catalog_file_roundtrip_and_override() {
        let text = r#"
            [[material]]
            name = "flat"
            valid_range_nm = [300.0, 1200.0]
            source = "test"
            ordinary = { constant = 2.25 }
            [material.extraordinary]
            constant = 2.0
            terms = [{ kind = "resonance", b = 0.1, c = 0.01 }, { kind = "power", b = -0.01, p = 2.0 }]
        "#;
        let mut cat = MaterialCatalog::default();
        cat.extend_from_str(text).unwrap();
        let flat = cat.get("FLAT").unwrap();
        assert_eq!(flat.index_ordinary(500.0).unwrap(), 1.5);
        assert!(cat.get("bbo").is_some());

        let bad_key = "[[material]]\nname='x'\nvalid_range_nm=[1.0,2.0]\nordinary={constant=2.0}\nextraordinary={constant=2.0}\ncolour='red'\n";
        assert!(matches!(
            MaterialCatalog::parse_models(bad_key),
            Err(Error::MaterialParse(_))
        ));
    }
}
