//! Normalized coincidence rate of the cascaded source.
//!
//! With analyzers at `θ_A`, `θ_B` and birefringent delays `τ_A`, `τ_B`:
//!
//! ```text
//! R = ½ { cos²θ_A sin²θ_B + cos²θ_B sin²θ_A
//!         + √(8π) cosθ_B sinθ_B cosθ_A sinθ_A cos[ω(τ_A − τ_B) + φ₀]
//!           · V(τ_A, τ_B) · Rect(τ_A, τ_B) / (σ (2t_p − t_o − t_e)) }
//! ```
//!
//! `V` is a difference of two error functions whose arguments depend on the
//! delay difference and on `|2t_o − t_e − t_e' − τ_A − τ_B|`; `Rect` keeps
//! the delay sum between `t_o − t_e` and an upper bound selected by
//! [`RectBounds`].

use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use crate::materials::{PropagationTimes, PumpSpec};
use crate::optimize::{golden_section_max, golden_section_min};
use crate::{Error, Result};

/// Resolution of the golden-section refinement of fringe extrema, fs.
pub const EXTREMUM_XTOL_FS: f64 = 1e-3;

/// Upper edge of the delay-sum window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RectBounds {
    /// `3t_o − t_e − t_e'`.
    #[default]
    Printed,
    /// `3t_o − t_e − 2t_e'`: the window centred on the optimal delay sum
    /// `2t_o − t_e − t_e'`, which is also where the envelope changes sign
    /// when `t_e = t_e'`.
    Symmetric,
}

/// Analyzer angles (rad) and birefringent delays (fs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyzerDelayConfig {
    pub theta_a: f64,
    pub theta_b: f64,
    pub tau_a: f64,
    pub tau_b: f64,
}

impl AnalyzerDelayConfig {
    pub fn new(theta_a: f64, theta_b: f64, tau_a: f64, tau_b: f64) -> Self {
        Self {
            theta_a,
            theta_b,
            tau_a,
            tau_b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferenceParams {
    pub times: PropagationTimes,
    /// Pump spectral width, rad/fs.
    pub sigma: f64,
    /// Degenerate photon angular frequency, rad/fs.
    pub omega: f64,
    /// Constant phase, rad.
    pub phi0: f64,
    pub rect: RectBounds,
    /// When false the interference term is dropped, leaving the classical
    /// mixture.
    pub interference: bool,
}

impl InterferenceParams {
    pub fn new(times: PropagationTimes, sigma: f64, omega: f64) -> Result<Self> {
        let p = Self {
            times,
            sigma,
            omega,
            phi0: 0.0,
            rect: RectBounds::default(),
            interference: true,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for a pump: σ from its bandwidth and ω = ω̄/2.
    pub fn from_pump(times: PropagationTimes, pump: &PumpSpec) -> Result<Self> {
        Self::new(times, pump.sigma(), pump.degenerate_omega())
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::DegenerateParameters(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::DegenerateParameters(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        let t = &self.times;
        if ![
            t.pump,
            t.ordinary,
            t.extraordinary,
            t.extraordinary_second,
            self.phi0,
        ]
        .iter()
        .all(|v| v.is_finite())
        {
            return Err(Error::DegenerateParameters(
                "non-finite time or phase".into(),
            ));
        }
        if self.walkoff_denominator() == 0.0 {
            return Err(Error::DegenerateParameters(
                "2 t_p - t_o - t_e vanishes".into(),
            ));
        }
        if t.ordinary - t.extraordinary == 0.0 {
            return Err(Error::DegenerateParameters("t_o - t_e vanishes".into()));
        }
        Ok(())
    }

    pub fn with_phi0(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn with_rect(mut self, rect: RectBounds) -> Self {
        self.rect = rect;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }

    pub fn without_interference(mut self) -> Self {
        self.interference = false;
        self
    }

    /// `2t_p − t_o − t_e`.
    pub fn walkoff_denominator(&self) -> f64 {
        let t = &self.times;
        2.0 * t.pump - t.ordinary - t.extraordinary
    }

    /// Delays that centre the envelope:
    /// `τ_A = (3t_o − t_e − 2t_p)/2`, `τ_B = (t_o − t_e − 2t_e' + 2t_p)/2`.
    pub fn optimal_delays(&self) -> (f64, f64) {
        closed_form_delays(&self.times)
    }

    /// Open interval of the delay sum `τ_A + τ_B` where `Rect` is one.
    pub fn rect_interval(&self) -> (f64, f64) {
        let t = &self.times;
        let lo = t.ordinary - t.extraordinary;
        let hi = match self.rect {
            RectBounds::Printed => 3.0 * t.ordinary - t.extraordinary - t.extraordinary_second,
            RectBounds::Symmetric => {
                3.0 * t.ordinary - t.extraordinary - 2.0 * t.extraordinary_second
            }
        };
        (lo, hi)
    }
}

pub(crate) fn closed_form_delays(t: &PropagationTimes) -> (f64, f64) {
    let tau_a = 0.5 * (3.0 * t.ordinary - t.extraordinary - 2.0 * t.pump);
    let tau_b = 0.5 * (t.ordinary - t.extraordinary - 2.0 * t.extraordinary_second + 2.0 * t.pump);
    (tau_a, tau_b)
}

/// Whether the delay sum lies strictly inside the window; the edges count
/// as outside.
pub fn rect_window(params: &InterferenceParams, tau_a: f64, tau_b: f64) -> bool {
    let (lo, hi) = params.rect_interval();
    let s = tau_a + tau_b;
    lo < s && s < hi
}

/// Slowly varying envelope `V(τ_A, τ_B)`. The window is not applied here.
pub fn envelope(params: &InterferenceParams, tau_a: f64, tau_b: f64) -> f64 {
    let t = &params.times;
    let k = params.sigma / (4.0 * 2f64.sqrt());
    let ratio = params.walkoff_denominator() / (t.ordinary - t.extraordinary);
    let u = (2.0 * t.ordinary - t.extraordinary - t.extraordinary_second - tau_a - tau_b).abs();
    let d = tau_a - tau_b;
    let a1 = k
        * (d + 4.0 * t.pump
            - 2.0 * t.ordinary
            - t.extraordinary
            - t.extraordinary_second
            - ratio * u);
    let a2 = k * (d + t.extraordinary - t.extraordinary_second + ratio * u);
    libm::erf(a1) - libm::erf(a2)
}

/// A coincidence rate, with a flag set when the printed expression went
/// negative and was clamped to zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rate {
    pub value: f64,
    pub clamped: bool,
}

fn projection_terms(theta_a: f64, theta_b: f64) -> f64 {
    let (sa, ca) = theta_a.sin_cos();
    let (sb, cb) = theta_b.sin_cos();
    (ca * sb).powi(2) + (cb * sa).powi(2)
}

/// Interference term inside the braces without the fringe cosine.
fn interference_amplitude(params: &InterferenceParams, cfg: &AnalyzerDelayConfig) -> f64 {
    if !params.interference || !rect_window(params, cfg.tau_a, cfg.tau_b) {
        return 0.0;
    }
    let (sa, ca) = cfg.theta_a.sin_cos();
    let (sb, cb) = cfg.theta_b.sin_cos();
    let angular = cb * sb * ca * sa;
    if angular == 0.0 {
        return 0.0;
    }
    (8.0 * PI).sqrt() * angular * envelope(params, cfg.tau_a, cfg.tau_b)
        / (params.sigma * params.walkoff_denominator())
}

/// Interference term inside the braces, before the overall ½.
fn interference_term(params: &InterferenceParams, cfg: &AnalyzerDelayConfig) -> f64 {
    let amplitude = interference_amplitude(params, cfg);
    if amplitude == 0.0 {
        return 0.0;
    }
    amplitude * (params.omega * (cfg.tau_a - cfg.tau_b) + params.phi0).cos()
}

pub fn coincidence_rate(params: &InterferenceParams, cfg: &AnalyzerDelayConfig) -> Rate {
    let raw = 0.5 * (projection_terms(cfg.theta_a, cfg.theta_b) + interference_term(params, cfg));
    if raw < 0.0 {
        Rate {
            value: 0.0,
            clamped: true,
        }
    } else {
        Rate {
            value: raw,
            clamped: false,
        }
    }
}

/// Fringe period `2π/ω`, fs.
pub fn fringe_period(params: &InterferenceParams) -> f64 {
    2.0 * PI / params.omega
}

/// Extrema of the rate over one fringe period, located by golden-section
/// refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FringeExtrema {
    pub tau_b_max: f64,
    pub rate_max: f64,
    pub tau_b_min: f64,
    pub rate_min: f64,
    pub visibility: f64,
}

/// Fringe contrast around `tau_b_center` with everything else in `cfg`
/// fixed: max and min of the rate over one period in `τ_B`.
pub fn fringe_extrema(
    params: &InterferenceParams,
    cfg: &AnalyzerDelayConfig,
    tau_b_center: f64,
) -> FringeExtrema {
    const SAMPLES: usize = 64;
    let period = fringe_period(params);
    let rate = |tau_b: f64| coincidence_rate(params, &AnalyzerDelayConfig { tau_b, ..*cfg }).value;
    let start = tau_b_center - 0.5 * period;
    let step = period / SAMPLES as f64;
    let samples: Vec<(f64, f64)> = (0..=SAMPLES)
        .map(|i| {
            let x = start + step * i as f64;
            (x, rate(x))
        })
        .collect();
    let by_value = |a: &&(f64, f64), b: &&(f64, f64)| a.1.total_cmp(&b.1);
    let &(x_hi, _) = samples.iter().max_by(by_value).expect("non-empty");
    let &(x_lo, _) = samples.iter().min_by(by_value).expect("non-empty");
    let hi = golden_section_max(rate, x_hi - step, x_hi + step, EXTREMUM_XTOL_FS);
    let lo = golden_section_min(rate, x_lo - step, x_lo + step, EXTREMUM_XTOL_FS);
    FringeExtrema {
        tau_b_max: hi.x,
        rate_max: hi.value,
        tau_b_min: lo.x,
        rate_min: lo.value,
        visibility: contrast(hi.value, lo.value),
    }
}

/// `(max − min)/(max + min)`, zero when both vanish.
pub fn contrast(max: f64, min: f64) -> f64 {
    let sum = max + min;
    if sum <= 0.0 {
        0.0
    } else {
        ((max - min) / sum).clamp(0.0, 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VisibilityPeak {
    pub visibility: f64,
    pub tau_a: f64,
    /// `τ_B` of the envelope maximum.
    pub tau_b: f64,
    /// Contrast of the actual fringe around the peak. Slightly below
    /// `visibility` because the envelope has a kink at its maximum and so
    /// changes within one fringe.
    pub extrema: FringeExtrema,
}

/// Analytic fringe extrema for a frozen envelope: the rate with the fringe
/// cosine at ±1.
fn frozen_envelope_contrast(params: &InterferenceParams, cfg: &AnalyzerDelayConfig) -> f64 {
    let projection = projection_terms(cfg.theta_a, cfg.theta_b);
    let amplitude = interference_amplitude(params, cfg).abs();
    contrast(
        0.5 * (projection + amplitude),
        (0.5 * (projection - amplitude)).max(0.0),
    )
}

/// Visibility of the fringes through `(τ_A, τ_B)` at `θ_A = θ_B = π/4`,
/// taking the envelope as constant over one fringe.
pub fn envelope_visibility(params: &InterferenceParams, tau_a: f64, tau_b: f64) -> f64 {
    frozen_envelope_contrast(
        params,
        &AnalyzerDelayConfig::new(FRAC_PI_4, FRAC_PI_4, tau_a, tau_b),
    )
}

/// Space-time visibility at `θ_A = θ_B = π/4` with `τ_A` at its optimum
/// and `τ_B` at the envelope peak (golden section to 0.001 fs). The fringe
/// extrema are evaluated analytically with the envelope frozen at its peak
/// value.
pub fn max_visibility(params: &InterferenceParams) -> VisibilityPeak {
    let (tau_a, tau_b_opt) = params.optimal_delays();
    let t = &params.times;
    let half_width = 0.5 * (t.ordinary - t.extraordinary).abs() + 10.0;
    let peak = golden_section_max(
        |tau_b| envelope(params, tau_a, tau_b),
        tau_b_opt - half_width,
        tau_b_opt + half_width,
        EXTREMUM_XTOL_FS,
    );
    let cfg = AnalyzerDelayConfig::new(FRAC_PI_4, FRAC_PI_4, tau_a, peak.x);
    VisibilityPeak {
        visibility: frozen_envelope_contrast(params, &cfg),
        tau_a,
        tau_b: peak.x,
        extrema: fringe_extrema(params, &cfg, peak.x),
    }
}

/// Compares the size of the interference term with the projection terms
/// at `θ_A = θ_B = π/4` and the optimal delays. A ratio above one means
/// the printed expression can go negative there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferenceDiagnostic {
    pub peak_interference_magnitude: f64,
    pub projection_magnitude: f64,
    pub ratio: f64,
}

pub fn interference_diagnostic(params: &InterferenceParams) -> InterferenceDiagnostic {
    let (tau_a, tau_b) = params.optimal_delays();
    let projection = projection_terms(FRAC_PI_4, FRAC_PI_4);
    let magnitude = ((8.0 * PI).sqrt() * 0.25 * envelope(params, tau_a, tau_b)
        / (params.sigma * params.walkoff_denominator()))
    .abs();
    InterferenceDiagnostic {
        peak_interference_magnitude: magnitude,
        projection_magnitude: projection,
        ratio: magnitude / projection,
    }
}
