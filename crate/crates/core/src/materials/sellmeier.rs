//! Sellmeier-type dispersion formulas and their closed-form wavelength
//! derivatives.
//!
//! Coefficients follow the usual convention of wavelength in micrometres:
//! `n²(λ) = A + Σ termᵢ(λ)`.

use serde::{Deserialize, Serialize};

/// One additive term of `n²(λ)`, with `λ` in µm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SellmeierTerm {
    /// `b·λ² / (λ² − c)`
    Resonance { b: f64, c: f64 },
    /// `b / (λ² − c)`
    Pole { b: f64, c: f64 },
    /// `b·λᵖ`
    Power { b: f64, p: f64 },
}

impl SellmeierTerm {
    fn value(&self, lam_um: f64) -> f64 {
        let l2 = lam_um * lam_um;
        match *self {
            SellmeierTerm::Resonance { b, c } => b * l2 / (l2 - c),
            SellmeierTerm::Pole { b, c } => b / (l2 - c),
            SellmeierTerm::Power { b, p } => b * lam_um.powf(p),
        }
    }

    /// d(term)/dλ, per µm.
    fn derivative(&self, lam_um: f64) -> f64 {
        let l2 = lam_um * lam_um;
        match *self {
            SellmeierTerm::Resonance { b, c } => {
                let den = l2 - c;
                -2.0 * b * c * lam_um / (den * den)
            }
            SellmeierTerm::Pole { b, c } => {
                let den = l2 - c;
                -2.0 * b * lam_um / (den * den)
            }
            SellmeierTerm::Power { b, p } => {
                if p == 0.0 {
                    0.0
                } else {
                    b * p * lam_um.powf(p - 1.0)
                }
            }
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            SellmeierTerm::Resonance { b, c } | SellmeierTerm::Pole { b, c } => {
                b.is_finite() && c.is_finite()
            }
            SellmeierTerm::Power { b, p } => b.is_finite() && p.is_finite(),
        }
    }
}

/// `n²(λ) = constant + Σ terms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sellmeier {
    pub constant: f64,
    #[serde(default)]
    pub terms: Vec<SellmeierTerm>,
}

impl Sellmeier {
    pub fn new(constant: f64, terms: Vec<SellmeierTerm>) -> Self {
        Self { constant, terms }
    }

    /// Dispersion-free medium with index `n`.
    pub fn constant_index(n: f64) -> Self {
        Self::new(n * n, Vec::new())
    }

    pub fn index_squared(&self, lam_nm: f64) -> f64 {
        let lam_um = lam_nm * 1e-3;
        self.constant + self.terms.iter().map(|t| t.value(lam_um)).sum::<f64>()
    }

    pub fn index(&self, lam_nm: f64) -> f64 {
        self.index_squared(lam_nm).sqrt()
    }

    /// dn/dλ in 1/nm.
    pub fn index_derivative(&self, lam_nm: f64) -> f64 {
        let lam_um = lam_nm * 1e-3;
        let dn2_dum: f64 = self.terms.iter().map(|t| t.derivative(lam_um)).sum();
        // chain rule: d(n²)/dλ = 2n dn/dλ, and 1 µm = 1000 nm
        dn2_dum * 1e-3 / (2.0 * self.index(lam_nm))
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.constant.is_finite() && self.terms.iter().all(SellmeierTerm::is_finite)
    }
}
