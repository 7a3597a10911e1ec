use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::visibility::extract_visibility;
use crate::exec::Exec;
use crate::interference::{
    coincidence_rate, envelope_visibility, fringe_period, AnalyzerDelayConfig, InterferenceParams,
};
use crate::{Error, Result};

/// Largest number of points a single sweep may produce.
const MAX_SWEEP_POINTS: usize = 10_000_000;

/// Evenly spaced values from `start` up to `stop` (included when it falls on
/// the grid).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidArgument("sweep bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "sweep step must be positive, got {step}"
            )));
        }
        if stop <= start {
            return Err(Error::InvalidArgument(format!(
                "sweep stop {stop} must exceed start {start}"
            )));
        }
        let s = Self { start, stop, step };
        if s.count() > MAX_SWEEP_POINTS {
            return Err(Error::InvalidArgument(format!(
                "sweep would produce more than {MAX_SWEEP_POINTS} points"
            )));
        }
        if s.count() < 2 {
            return Err(Error::InvalidArgument(
                "sweep must contain at least two points".into(),
            ));
        }
        Ok(s)
    }

    pub fn centered(center: f64, half_span: f64, step: f64) -> Result<Self> {
        Self::new(center - half_span, center + half_span, step)
    }

    pub fn count(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count())
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AbscissaKind {
    DelayFs,
    QuartzMm,
    AnalyzerRad,
}

impl AbscissaKind {
    /// CSV column name including units.
    pub fn column(self) -> &'static str {
        match self {
            AbscissaKind::DelayFs => "tau_B_fs",
            AbscissaKind::QuartzMm => "quartz_B_mm",
            AbscissaKind::AnalyzerRad => "theta_B_rad",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrdinateKind {
    Rate,
    Visibility,
}

impl OrdinateKind {
    pub fn column(self) -> &'static str {
        match self {
            OrdinateKind::Rate => "rate",
            OrdinateKind::Visibility => "visibility",
        }
    }
}

/// Everything needed to regenerate a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanSnapshot {
    pub params: InterferenceParams,
    /// Settings held fixed; the swept one holds its value at the first point.
    pub fixed: AnalyzerDelayConfig,
    pub fringe_period_fs: f64,
}

/// Ordered `(x, y)` samples: `x` strictly increasing, `y ≥ 0`, at least two
/// points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSeries {
    pub abscissa: AbscissaKind,
    pub ordinate: OrdinateKind,
    pub points: Vec<(f64, f64)>,
    pub snapshot: Option<ScanSnapshot>,
}

impl ScanSeries {
    pub fn new(
        abscissa: AbscissaKind,
        ordinate: OrdinateKind,
        points: Vec<(f64, f64)>,
        snapshot: Option<ScanSnapshot>,
    ) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(
                "a scan needs at least two points".into(),
            ));
        }
        if points
            .windows(2)
            .any(|w| w[1].0.partial_cmp(&w[0].0) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::InvalidArgument(
                "scan abscissa must be strictly increasing".into(),
            ));
        }
        if points
            .iter()
            .any(|&(x, y)| !(x.is_finite() && y.is_finite() && y >= 0.0))
        {
            return Err(Error::InvalidArgument(
                "scan values must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            abscissa,
            ordinate,
            points,
            snapshot,
        })
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn span(&self) -> f64 {
        self.points[self.points.len() - 1].0 - self.points[0].0
    }

    /// Multiplies every ordinate by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.abscissa,
            self.ordinate,
            self.points.iter().map(|&(x, y)| (x, y * factor)).collect(),
            self.snapshot,
        )
    }

    /// Re-expresses a delay scan in plate thickness for a delay line with
    /// the given fs/mm rate.
    pub fn in_quartz_mm(&self, fs_per_mm: f64) -> Result<Self> {
        if self.abscissa != AbscissaKind::DelayFs {
            return Err(Error::InvalidArgument(
                "only delay scans can be converted to plate thickness".into(),
            ));
        }
        if !(fs_per_mm.is_finite() && fs_per_mm > 0.0) {
            return Err(Error::InvalidArgument("fs/mm rate must be positive".into()));
        }
        Self::new(
            AbscissaKind::QuartzMm,
            self.ordinate,
            self.points
                .iter()
                .map(|&(x, y)| (x / fs_per_mm, y))
                .collect(),
            self.snapshot,
        )
    }
}

/// Coincidence rate versus `τ_B` with the analyzers and `τ_A` from
/// `template`. The step must resolve the fringes: at most an eighth of the
/// fringe period.
pub fn delay_scan(
    params: &InterferenceParams,
    template: &AnalyzerDelayConfig,
    sweep: Sweep,
    exec: Exec,
) -> Result<ScanSeries> {
    let period = fringe_period(params);
    let bound = period / 8.0;
    if sweep.step > bound * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "delay step {} fs is too coarse: it must not exceed fringe_period/8 = {bound:.6} fs",
            sweep.step
        )));
    }
    let xs = sweep.values();
    let rates = exec.map(&xs, |&tau_b| {
        coincidence_rate(params, &AnalyzerDelayConfig { tau_b, ..*template }).value
    });
    ScanSeries::new(
        AbscissaKind::DelayFs,
        OrdinateKind::Rate,
        xs.into_iter().zip(rates).collect(),
        Some(ScanSnapshot {
            params: *params,
            fixed: AnalyzerDelayConfig {
                tau_b: sweep.start,
                ..*template
            },
            fringe_period_fs: period,
        }),
    )
}

/// Coincidence rate versus `θ_B` at fixed delays and `θ_A`. The step may
/// not exceed π/64.
pub fn polarization_scan(
    params: &InterferenceParams,
    tau_a: f64,
    tau_b: f64,
    theta_a: f64,
    sweep: Sweep,
    exec: Exec,
) -> Result<ScanSeries> {
    let bound = PI / 64.0;
    if sweep.step > bound * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "analyzer step {} rad is too coarse: it must not exceed pi/64 = {bound:.6} rad",
            sweep.step
        )));
    }
    let xs = sweep.values();
    let rates = exec.map(&xs, |&theta_b| {
        coincidence_rate(
            params,
            &AnalyzerDelayConfig::new(theta_a, theta_b, tau_a, tau_b),
        )
        .value
    });
    ScanSeries::new(
        AbscissaKind::AnalyzerRad,
        OrdinateKind::Rate,
        xs.into_iter().zip(rates).collect(),
        Some(ScanSnapshot {
            params: *params,
            fixed: AnalyzerDelayConfig::new(theta_a, sweep.start, tau_a, tau_b),
            fringe_period_fs: fringe_period(params),
        }),
    )
}

/// Visibility of a short fringe scan (±2 periods, step period/32) centred
/// on `(τ_A, τ_B)` at `θ_A = θ_B = π/4`.
pub fn local_fringe_visibility(params: &InterferenceParams, tau_a: f64, tau_b: f64) -> Result<f64> {
    let period = fringe_period(params);
    let quarter = std::f64::consts::FRAC_PI_4;
    let sweep = Sweep::centered(tau_b, 2.0 * period, period / 32.0)?;
    let template = AnalyzerDelayConfig::new(quarter, quarter, tau_a, tau_b);
    let scan = delay_scan(params, &template, sweep, Exec::Sequential)?;
    match extract_visibility(&scan) {
        Ok(v) => Ok(v),
        // A window where every rate vanishes shows no fringes.
        Err(Error::UndefinedVisibility(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// How each point of a visibility curve is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalVisibility {
    /// Scan ±2 fringes and extract the contrast. Near the envelope peak the
    /// envelope changes slightly within one fringe, which caps the result a
    /// little below the frozen-envelope value (≈0.995 as σ → 0).
    #[default]
    FringeScan,
    /// Analytic fringe extrema with the envelope frozen at `(τ_A, τ_B)`.
    Analytic,
}

/// Space-time visibility as a function of `τ_B` at fixed `τ_A`.
pub fn visibility_curve(
    params: &InterferenceParams,
    tau_a: f64,
    grid: Sweep,
    method: LocalVisibility,
    exec: Exec,
) -> Result<ScanSeries> {
    let xs = grid.values();
    let vis = exec.try_map(&xs, |&tau_b| match method {
        LocalVisibility::FringeScan => local_fringe_visibility(params, tau_a, tau_b),
        LocalVisibility::Analytic => Ok(envelope_visibility(params, tau_a, tau_b)),
    })?;
    let quarter = std::f64::consts::FRAC_PI_4;
    ScanSeries::new(
        AbscissaKind::DelayFs,
        OrdinateKind::Visibility,
        xs.into_iter().zip(vis).collect(),
        Some(ScanSnapshot {
            params: *params,
            fixed: AnalyzerDelayConfig::new(quarter, quarter, tau_a, grid.start),
            fringe_period_fs: fringe_period(params),
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_counts() {
        let s = Sweep::new(0.0, 1.0, 0.1).unwrap();
        assert_eq!(s.count(), 11);
        let v = s.values();
        assert!((v[10] - 1.0).abs() < 1e-12);
        assert!(Sweep::new(1.0, 0.0, 0.1).is_err());
        assert!(Sweep::new(0.0, 1.0, 0.0).is_err());
        assert!(Sweep::new(0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn series_invariants() {
        let ok = ScanSeries::new(
            AbscissaKind::DelayFs,
            OrdinateKind::Rate,
            vec![(0.0, 1.0), (1.0, 0.5)],
            None,
        );
        assert!(ok.is_ok());
        for bad in [
            vec![(0.0, 1.0)],
            vec![(0.0, 1.0), (0.0, 1.0)],
            vec![(0.0, 1.0), (1.0, -0.1)],
        ] {
            assert!(ScanSeries::new(AbscissaKind::DelayFs, OrdinateKind::Rate, bad, None).is_err());
        }
    }
}
