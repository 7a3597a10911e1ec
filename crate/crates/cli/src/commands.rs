use std::fmt::Write as _;

use anyhow::{Context, Result};
use serde::Serialize;
use spdc_cascade::analysis::{
    delay_scan, extract_visibility, fringe_spacing, lock_to_fringe, optimal_delays,
    optimize_delays_numeric, polarization_scan, visibility_curve as curve, DelayPrescription,
    QuartzDelayLine, SearchBox, Sweep, NUMERIC_AGREEMENT_FS,
};
use spdc_cascade::export::{emission_map_csv, json_line, scan_csv, sig6, VisibilitySummary};
use spdc_cascade::geometry::{
    beam_propagation_times, default_phi_grid, emission_time_map, minimax_delays, pairing_mismatch,
    ClassDelays, FLATNESS_TOLERANCE_FS,
};
use spdc_cascade::interference::{fringe_period, AnalyzerDelayConfig, InterferenceParams};
use spdc_cascade::materials::{axial_propagation_times, Polarization, PropagationTimes};
use spdc_cascade::Exec;

use crate::config::{ConfigError, MapDelays, ScanAxis, Setup, TimesSource};
use crate::Report;

fn times(setup: &Setup) -> Result<PropagationTimes> {
    Ok(match setup.raw.interference.times {
        TimesSource::Axial => axial_propagation_times(&setup.first, &setup.pump)?,
        TimesSource::Beams => {
            let cascade = setup.cascade.as_ref().ok_or_else(|| {
                ConfigError("interference.times = \"beams\" requires a cascade".into())
            })?;
            beam_propagation_times(cascade, &setup.pump, setup.beams)?
        }
    })
}

fn params(setup: &Setup) -> Result<InterferenceParams> {
    let i = &setup.raw.interference;
    let p = InterferenceParams::from_pump(times(setup)?, &setup.pump)?;
    let sigma = p.sigma * i.sigma_scale;
    Ok(p.with_sigma(sigma)?
        .with_phi0(i.phi0_rad)
        .with_rect(i.rect.into()))
}

/// Configured delays, each defaulting to its closed-form optimum.
fn delays(setup: &Setup, t: &PropagationTimes) -> (f64, f64) {
    let opt = optimal_delays(t);
    let d = &setup.raw.delays;
    (
        d.tau_a_fs.unwrap_or(opt.tau_a),
        d.tau_b_fs.unwrap_or(opt.tau_b),
    )
}

pub fn indices(setup: &Setup, override_nm: &[f64]) -> Result<Report> {
    let wavelengths = if override_nm.is_empty() {
        &setup.raw.indices.wavelengths_nm[..]
    } else {
        override_nm
    };
    if wavelengths.is_empty() {
        return Err(ConfigError(
            "no wavelengths given: use --wavelength-nm or [indices] wavelengths_nm".into(),
        )
        .into());
    }
    let m = &setup.model;
    let mut table = String::from("wavelength_nm,n_o,n_e,n_g_o,n_g_e\n");
    for &lam in wavelengths {
        let e = Polarization::Extraordinary {
            theta: std::f64::consts::FRAC_PI_2,
        };
        let row = [
            m.index_ordinary(lam)?,
            m.index_principal_extraordinary(lam)?,
            m.group_index(lam, Polarization::Ordinary)?,
            m.group_index(lam, e)?,
        ];
        let _ = write!(table, "{}", sig6(lam));
        for v in row {
            let _ = write!(table, ",{}", sig6(v));
        }
        table.push('\n');
    }
    Ok(Report {
        table,
        summary: None,
    })
}

#[derive(Serialize)]
struct MapSummary {
    pairing_mismatch_fs: f64,
    tolerance_fs: f64,
    flat: bool,
    #[serde(rename = "tau_A_fs")]
    tau_a_fs: f64,
    #[serde(rename = "tau_B_fs")]
    tau_b_fs: f64,
    phi_points: usize,
}

pub fn emission_map(setup: &Setup) -> Result<Report> {
    let cascade = setup.cascade.as_ref().ok_or_else(|| {
        ConfigError("emission map requires cascade (crystal.cascade = true)".into())
    })?;
    let cfg = &setup.raw.emission_map;
    let grid = default_phi_grid(cfg.phi_points);
    let delays = match cfg.delays {
        MapDelays::Configured => {
            let t = axial_propagation_times(&setup.first, &setup.pump)?;
            let (a, b) = delays(setup, &t);
            ClassDelays::compensating(a, b)
        }
        MapDelays::Minimax => {
            let raw = emission_time_map(
                cascade,
                &setup.pump,
                ClassDelays::default(),
                &grid,
                Exec::default(),
            )?;
            minimax_delays(&raw)
        }
    };
    let map = emission_time_map(cascade, &setup.pump, delays, &grid, Exec::default())?;
    let mismatch = pairing_mismatch(&map);
    let summary = MapSummary {
        pairing_mismatch_fs: mismatch,
        tolerance_fs: FLATNESS_TOLERANCE_FS,
        flat: mismatch < FLATNESS_TOLERANCE_FS,
        tau_a_fs: delays.second_e,
        tau_b_fs: delays.first_e,
        phi_points: cfg.phi_points,
    };
    Ok(Report {
        table: emission_map_csv(&map),
        summary: Some(json_line(&summary)),
    })
}

fn quartz_line(setup: &Setup) -> Result<QuartzDelayLine> {
    let o = &setup.raw.optimize;
    let model = setup
        .catalog
        .get(&o.quartz_material)
        .cloned()
        .context("delay-line material disappeared from the catalog")?;
    let lam = o
        .quartz_wavelength_nm
        .unwrap_or_else(|| setup.pump.degenerate_wavelength_nm());
    Ok(QuartzDelayLine::new(model, lam)?)
}

pub fn scan(setup: &Setup) -> Result<Report> {
    let p = params(setup)?;
    let (tau_a, tau_b) = delays(setup, &p.times);
    let s = &setup.raw.scan;
    let period = fringe_period(&p);
    let step = s.step_fs.unwrap_or(period / 32.0);
    let sweep = Sweep::centered(tau_b, s.half_span_fs, step)?;
    let cfg = AnalyzerDelayConfig::new(
        s.theta_a_deg.to_radians(),
        s.theta_b_deg.to_radians(),
        tau_a,
        tau_b,
    );
    let series = delay_scan(&p, &cfg, sweep, Exec::default())?;
    let visibility = extract_visibility(&series)?;
    // A fringe-free scan (e.g. crossed analyzers) has no spacing to measure.
    let spacing = fringe_spacing(&series).unwrap_or(period);
    let series = match s.axis {
        ScanAxis::Delay => series,
        ScanAxis::Quartz => series.in_quartz_mm(quartz_line(setup)?.fs_per_mm())?,
    };
    let summary = VisibilitySummary {
        visibility,
        fringe_period_fs: spacing,
        tau_a_fs: tau_a,
        tau_b_fs: tau_b,
    };
    Ok(Report {
        table: scan_csv(&series),
        summary: Some(summary.to_json_line()),
    })
}

pub fn visibility_curve(setup: &Setup) -> Result<Report> {
    let p = params(setup)?;
    let (tau_a, tau_b) = delays(setup, &p.times);
    let c = &setup.raw.visibility_curve;
    let opt = optimal_delays(&p.times).tau_b;
    let grid = Sweep::new(
        c.start_fs.unwrap_or(opt - 300.0),
        c.stop_fs.unwrap_or(opt + 200.0),
        c.step_fs,
    )?;
    let series = curve(&p, tau_a, grid, c.method, Exec::default())?;
    let (x_peak, v_peak) =
        series
            .points
            .iter()
            .copied()
            .fold((tau_b, f64::NEG_INFINITY), |best, pt| {
                if pt.1 > best.1 {
                    pt
                } else {
                    best
                }
            });
    let summary = VisibilitySummary {
        visibility: v_peak,
        fringe_period_fs: fringe_period(&p),
        tau_a_fs: tau_a,
        tau_b_fs: x_peak,
    };
    Ok(Report {
        table: scan_csv(&series),
        summary: Some(summary.to_json_line()),
    })
}

pub fn polarization(setup: &Setup) -> Result<Report> {
    let p = params(setup)?;
    let (tau_a, mut tau_b) = delays(setup, &p.times);
    let c = &setup.raw.polarization;
    if c.lock_to_fringe {
        tau_b = lock_to_fringe(&p, tau_a, tau_b);
    }
    let sweep = Sweep::new(
        c.start_deg.to_radians(),
        c.stop_deg.to_radians(),
        c.step_deg.to_radians(),
    )?;
    let series = polarization_scan(
        &p,
        tau_a,
        tau_b,
        c.theta_a_deg.to_radians(),
        sweep,
        Exec::default(),
    )?;
    let summary = VisibilitySummary {
        visibility: extract_visibility(&series)?,
        fringe_period_fs: fringe_period(&p),
        tau_a_fs: tau_a,
        tau_b_fs: tau_b,
    };
    Ok(Report {
        table: scan_csv(&series),
        summary: Some(summary.to_json_line()),
    })
}

#[derive(Serialize)]
struct OptimizeSummary {
    #[serde(rename = "tau_A_fs")]
    tau_a_fs: f64,
    #[serde(rename = "tau_B_fs")]
    tau_b_fs: f64,
    #[serde(rename = "quartz_A_mm")]
    quartz_a_mm: f64,
    #[serde(rename = "quartz_B_mm")]
    quartz_b_mm: f64,
    #[serde(rename = "numeric_tau_A_fs")]
    numeric_tau_a_fs: Option<f64>,
    #[serde(rename = "numeric_tau_B_fs")]
    numeric_tau_b_fs: Option<f64>,
    numeric_on_boundary: Option<bool>,
    /// Numeric and closed-form optima within the agreement tolerance.
    numeric_agrees: Option<bool>,
}

pub fn optimize(setup: &Setup) -> Result<Report> {
    let t = times(setup)?;
    let closed = optimal_delays(&t);
    let rx = DelayPrescription::new(closed.tau_a, closed.tau_b, &quartz_line(setup)?)?;
    // The numeric cross-check needs a well-defined envelope; when all
    // propagation times coincide there is nothing to optimize.
    let numeric = match params(setup) {
        Ok(p) => {
            let search = SearchBox::around(closed, setup.raw.optimize.half_width_fs);
            Some(optimize_delays_numeric(&p, search, Exec::default())?)
        }
        Err(e) if is_degenerate(&e) => None,
        Err(e) => return Err(e),
    };
    let summary = OptimizeSummary {
        tau_a_fs: closed.tau_a,
        tau_b_fs: closed.tau_b,
        quartz_a_mm: rx.quartz_a_mm,
        quartz_b_mm: rx.quartz_b_mm,
        numeric_tau_a_fs: numeric.map(|n| n.tau_a),
        numeric_tau_b_fs: numeric.map(|n| n.tau_b),
        numeric_on_boundary: numeric.map(|n| n.on_boundary),
        numeric_agrees: numeric.map(|n| {
            (n.tau_a - closed.tau_a).abs() < NUMERIC_AGREEMENT_FS
                && (n.tau_b - closed.tau_b).abs() < NUMERIC_AGREEMENT_FS
        }),
    };
    let opt = |v: Option<f64>| v.map(sig6).unwrap_or_default();
    let table = format!(
        "tau_A_fs,tau_B_fs,quartz_A_mm,quartz_B_mm,numeric_tau_A_fs,numeric_tau_B_fs,numeric_agrees\n{},{},{},{},{},{},{}\n",
        sig6(summary.tau_a_fs),
        sig6(summary.tau_b_fs),
        sig6(summary.quartz_a_mm),
        sig6(summary.quartz_b_mm),
        opt(summary.numeric_tau_a_fs),
        opt(summary.numeric_tau_b_fs),
        summary.numeric_agrees.map(|b| b.to_string()).unwrap_or_default(),
    );
    Ok(Report {
        table,
        summary: Some(json_line(&summary)),
    })
}

fn is_degenerate(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<spdc_cascade::Error>(),
        Some(spdc_cascade::Error::DegenerateParameters(_))
    )
}
