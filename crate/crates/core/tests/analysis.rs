use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use approx::assert_abs_diff_eq;
use spdc_cascade::analysis::{
    delay_scan, extract_visibility, local_fringe_visibility, lock_to_fringe, optimal_delays,
    optimize_delays_numeric, polarization_scan, quartz_delay, quartz_thickness, visibility_curve,
    AbscissaKind, DelayPrescription, LocalVisibility, QuartzDelayLine, SearchBox, Sweep,
    NUMERIC_AGREEMENT_FS,
};
use spdc_cascade::interference::{
    fringe_period, max_visibility, AnalyzerDelayConfig, InterferenceParams,
};
use spdc_cascade::materials::{DispersionModel, PropagationTimes};
use spdc_cascade::{Error, Exec};

mod common;

#[test]
fn reference_optimal_delays() {
    let d = optimal_delays(&common::times(common::THICKNESS_MM));
    assert_abs_diff_eq!(d.tau_b, 410.0, epsilon = 30.0);
    assert_abs_diff_eq!(d.tau_a, 31.0, epsilon = 15.0);
    // Frozen values for the embedded Sellmeier data.
    assert_abs_diff_eq!(d.tau_b, 408.91, epsilon = 0.05);
    assert_abs_diff_eq!(d.tau_a, 26.62, epsilon = 0.05);
}

#[test]
fn equal_times_need_no_delay() {
    let d = optimal_delays(&PropagationTimes::new(7.0, 7.0, 7.0, 7.0));
    assert_eq!((d.tau_a, d.tau_b), (0.0, 0.0));
}

#[test]
fn numeric_optimum_matches_closed_form_on_grid() {
    let base_sigma = common::pump().sigma();
    for thickness in [0.5, 1.07, 2.0] {
        let times = common::times(thickness);
        let closed = optimal_delays(&times);
        for factor in [0.5, 1.0, 2.0] {
            let p = InterferenceParams::from_pump(times, &common::pump())
                .unwrap()
                .with_sigma(base_sigma * factor)
                .unwrap();
            let opt = optimize_delays_numeric(&p, SearchBox::around(closed, 60.0), Exec::default())
                .unwrap();
            assert!(!opt.on_boundary);
            assert!(
                (opt.tau_a - closed.tau_a).abs() < NUMERIC_AGREEMENT_FS
                    && (opt.tau_b - closed.tau_b).abs() < NUMERIC_AGREEMENT_FS,
                "L={thickness} x{factor}: {opt:?} vs {closed:?}"
            );
        }
    }
}

#[test]
fn optimum_location_is_sigma_independent() {
    let p = common::params();
    let closed = optimal_delays(&p.times);
    let search = SearchBox::around(closed, 40.0);
    let base = optimize_delays_numeric(&p, search, Exec::default()).unwrap();
    for factor in [0.1, 3.0, 7.0] {
        let q = p.with_sigma(factor * p.sigma).unwrap();
        let opt = optimize_delays_numeric(&q, search, Exec::default()).unwrap();
        assert!(
            (opt.tau_a - base.tau_a).abs() < 0.5 && (opt.tau_b - base.tau_b).abs() < 0.5,
            "x{factor}: {opt:?}"
        );
    }
    // At 10x both Erf terms saturate to ±1 in double precision over a
    // plateau, so only the peak value is defined there.
    let wide = p.with_sigma(10.0 * p.sigma).unwrap();
    let opt = optimize_delays_numeric(&wide, search, Exec::default()).unwrap();
    assert_eq!(opt.envelope, 2.0);
    assert_eq!(
        spdc_cascade::interference::envelope(&wide, closed.tau_a, closed.tau_b),
        2.0
    );
}

#[test]
fn box_excluding_optimum_is_flagged() {
    let p = common::params();
    let closed = optimal_delays(&p.times);
    let search = SearchBox {
        tau_a: (closed.tau_a - 10.0, closed.tau_a + 10.0),
        tau_b: (closed.tau_b + 20.0, closed.tau_b + 60.0),
    };
    let opt = optimize_delays_numeric(&p, search, Exec::default()).unwrap();
    assert!(opt.on_boundary);
    assert!(opt.tau_b >= search.tau_b.0 && opt.tau_b <= search.tau_b.1);
}

#[test]
fn empty_box_rejected() {
    let p = common::params();
    let bad = SearchBox {
        tau_a: (0.0, 0.0),
        tau_b: (0.0, 10.0),
    };
    assert!(matches!(
        optimize_delays_numeric(&p, bad, Exec::default()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn quartz_anchors() {
    let q = DispersionModel::quartz();
    let one_mm = quartz_delay(&q, 790.0, 1.0).unwrap();
    assert_abs_diff_eq!(one_mm, 31.0, epsilon = 3.0);
    assert_abs_diff_eq!(
        quartz_delay(&q, 790.0, 14.2).unwrap(),
        440.0,
        epsilon = 15.0
    );
    assert_abs_diff_eq!(
        quartz_thickness(&q, 790.0, 440.0).unwrap(),
        14.2,
        epsilon = 0.7
    );
    assert_eq!(quartz_delay(&q, 790.0, 0.0).unwrap(), 0.0);
    // Frozen value for the embedded Sellmeier data.
    assert_abs_diff_eq!(one_mm, 31.61, epsilon = 0.02);
    assert!(quartz_delay(&q, 790.0, -1.0).is_err());
    assert!(quartz_delay(&q, 3000.0, 1.0).is_err());
}

#[test]
fn quartz_round_trip() {
    let line = QuartzDelayLine::new(DispersionModel::quartz(), 790.0).unwrap();
    for mm in [0.0, 0.37, 1.0, 14.2, 123.4] {
        let back = line.thickness_mm(line.delay_fs(mm).unwrap()).unwrap();
        assert!((back - mm).abs() < 1e-9);
    }
}

#[test]
fn prescription_for_reference_delays() {
    let line = QuartzDelayLine::new(DispersionModel::quartz(), 790.0).unwrap();
    let d = optimal_delays(&common::times(1.07));
    let rx = DelayPrescription::new(d.tau_a, d.tau_b, &line).unwrap();
    assert_abs_diff_eq!(rx.quartz_a_mm, 1.0, epsilon = 0.2);
    assert_abs_diff_eq!(rx.quartz_b_mm, 13.3, epsilon = 0.7);
}

fn fringe_scan(theta_a: f64, theta_b: f64) -> spdc_cascade::analysis::ScanSeries {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let period = fringe_period(&p);
    delay_scan(
        &p,
        &AnalyzerDelayConfig::new(theta_a, theta_b, a0, b0),
        Sweep::centered(b0, 50.0, period / 32.0).unwrap(),
        Exec::default(),
    )
    .unwrap()
}

#[test]
fn delay_scan_visibility_matches_peak() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let period = fringe_period(&p);
    let scan = delay_scan(
        &p,
        &AnalyzerDelayConfig::new(FRAC_PI_4, FRAC_PI_4, a0, b0),
        Sweep::centered(b0, 2.0 * period, period / 32.0).unwrap(),
        Exec::default(),
    )
    .unwrap();
    let v = extract_visibility(&scan).unwrap();
    assert_abs_diff_eq!(v, max_visibility(&p).visibility, epsilon = 0.01);
    assert_eq!(scan.abscissa, AbscissaKind::DelayFs);
    assert!(scan.snapshot.is_some());
}

#[test]
fn wide_delay_scan_peaks_at_center() {
    let scan = fringe_scan(FRAC_PI_4, FRAC_PI_4);
    let (x_max, _) = scan
        .points
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let b0 = common::params().optimal_delays().1;
    assert!((x_max - b0).abs() < 3.0, "{x_max} vs {b0}");
}

#[test]
fn orthogonal_analyzers_give_flat_scan() {
    let scan = fringe_scan(0.0, FRAC_PI_2);
    let (lo, hi) = scan
        .ys()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), y| {
            (l.min(y), h.max(y))
        });
    assert!(hi - lo < 1e-9);
    assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-12);
    assert!(extract_visibility(&scan).unwrap() < 1e-6);
}

#[test]
fn coarse_steps_rejected() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let period = fringe_period(&p);
    let cfg = AnalyzerDelayConfig::new(FRAC_PI_4, FRAC_PI_4, a0, b0);
    let err = delay_scan(
        &p,
        &cfg,
        Sweep::centered(b0, 20.0, period / 4.0).unwrap(),
        Exec::default(),
    )
    .unwrap_err();
    assert!(err.to_string().contains("fringe_period/8"), "{err}");
    assert!(polarization_scan(
        &p,
        a0,
        b0,
        FRAC_PI_4,
        Sweep::new(0.0, PI, PI / 32.0).unwrap(),
        Exec::default()
    )
    .is_err());
}

#[test]
fn polarization_visibility_equals_space_time() {
    let p = common::params();
    let peak = max_visibility(&p);
    let tau_b = lock_to_fringe(&p, peak.tau_a, peak.tau_b);
    assert!((tau_b - peak.tau_b).abs() <= 0.25 * fringe_period(&p) + 1e-12);
    let sweep = Sweep::new(0.0, PI, PI / 128.0).unwrap();
    let scan = polarization_scan(&p, peak.tau_a, tau_b, FRAC_PI_4, sweep, Exec::default()).unwrap();
    let v = extract_visibility(&scan).unwrap();
    assert_abs_diff_eq!(v, peak.visibility, epsilon = 0.01);

    // One analyzer at 0: full contrast whatever the delays.
    for (ta, tb) in [(peak.tau_a, tau_b), (0.0, 0.0), (100.0, 900.0)] {
        let scan = polarization_scan(&p, ta, tb, 0.0, sweep, Exec::default()).unwrap();
        assert_eq!(extract_visibility(&scan).unwrap(), 1.0);
    }

    // Without interference the θ_A = π/4 pattern is flat.
    let classical = p.without_interference();
    let scan = polarization_scan(
        &classical,
        peak.tau_a,
        tau_b,
        FRAC_PI_4,
        sweep,
        Exec::default(),
    )
    .unwrap();
    assert!(extract_visibility(&scan).unwrap() < 1e-12);
}

#[test]
fn visibility_is_scale_free() {
    let scan = fringe_scan(FRAC_PI_4, FRAC_PI_4);
    let v = extract_visibility(&scan).unwrap();
    for f in [1e-6, 0.3, 7.0, 1e5] {
        assert_abs_diff_eq!(
            extract_visibility(&scan.scaled(f).unwrap()).unwrap(),
            v,
            epsilon = 1e-12
        );
    }
}

#[test]
fn short_scans_rejected() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let period = fringe_period(&p);
    let scan = delay_scan(
        &p,
        &AnalyzerDelayConfig::new(FRAC_PI_4, FRAC_PI_4, a0, b0),
        Sweep::centered(b0, 0.5 * period, period / 32.0).unwrap(),
        Exec::default(),
    )
    .unwrap();
    assert!(extract_visibility(&scan).is_err());
}

#[test]
fn visibility_curve_shape() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let grid = Sweep::new(b0 - 300.0, b0 + 200.0, 10.0).unwrap();
    let curve =
        visibility_curve(&p, a0, grid, LocalVisibility::FringeScan, Exec::default()).unwrap();
    let (x_peak, v_peak) = curve
        .points
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((x_peak - b0).abs() <= 30.0);
    assert_abs_diff_eq!(v_peak, max_visibility(&p).visibility, epsilon = 0.01);
    // Outside the window (delay sum below t_o − t_e) there are no fringes.
    assert_eq!(curve.points[0].1, 0.0);
    // Single peak: non-decreasing up to it, non-increasing after.
    let i_peak = curve.points.iter().position(|pt| pt.0 == x_peak).unwrap();
    for w in curve.points[..=i_peak].windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-9);
    }
    for w in curve.points[i_peak..].windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-9);
    }
}

#[test]
fn visibility_at_optimum_matches_peak() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let v = local_fringe_visibility(&p, a0, b0).unwrap();
    assert_abs_diff_eq!(v, max_visibility(&p).visibility, epsilon = 0.01);
}

#[test]
fn thicker_crystal_curve_peaks_near_reference_values() {
    let times = common::times(1.1);
    let p = InterferenceParams::from_pump(times, &common::pump()).unwrap();
    let (a0, b0) = p.optimal_delays();
    let curve = visibility_curve(
        &p,
        a0,
        Sweep::new(300.0, 560.0, 5.0).unwrap(),
        LocalVisibility::Analytic,
        Exec::default(),
    )
    .unwrap();
    let (x_peak, _) = curve
        .points
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((x_peak - b0).abs() <= 5.0);
    assert!((400.0..=450.0).contains(&x_peak), "{x_peak}");
}

#[test]
fn narrowband_curve_peaks_at_one() {
    let p = common::params();
    let narrow = p.with_sigma(p.sigma / 1000.0).unwrap();
    let peak = max_visibility(&narrow);
    assert_abs_diff_eq!(peak.visibility, 1.0, epsilon = 1e-3);
}

#[test]
fn executors_agree_bitwise() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let grid = Sweep::new(b0 - 50.0, b0 + 50.0, 5.0).unwrap();
    let s = visibility_curve(&p, a0, grid, LocalVisibility::FringeScan, Exec::Sequential).unwrap();
    let q = visibility_curve(&p, a0, grid, LocalVisibility::FringeScan, Exec::Parallel).unwrap();
    assert_eq!(s, q);
}

#[test]
fn quartz_axis_conversion() {
    let scan = fringe_scan(FRAC_PI_4, FRAC_PI_4);
    let q = scan.in_quartz_mm(31.6).unwrap();
    assert_eq!(q.abscissa, AbscissaKind::QuartzMm);
    assert_abs_diff_eq!(q.points[3].0 * 31.6, scan.points[3].0, epsilon = 1e-9);
}

#[test]
fn analytic_and_scanned_curves_agree() {
    let p = common::params();
    let (a0, b0) = p.optimal_delays();
    let grid = Sweep::new(b0 - 250.0, b0 + 200.0, 25.0).unwrap();
    let scanned =
        visibility_curve(&p, a0, grid, LocalVisibility::FringeScan, Exec::default()).unwrap();
    let analytic =
        visibility_curve(&p, a0, grid, LocalVisibility::Analytic, Exec::default()).unwrap();
    for (s, a) in scanned.points.iter().zip(&analytic.points) {
        // The scan sees the envelope slope across ±2 fringes; allow for it.
        assert!((s.1 - a.1).abs() < 0.03, "{s:?} vs {a:?}");
    }
    // In the narrowband limit only the analytic extrema reach one.
    let narrow = p.with_sigma(p.sigma / 1000.0).unwrap();
    let at = Sweep::new(b0 - 5.0, b0 + 5.0, 5.0).unwrap();
    let peak = |m| {
        visibility_curve(&narrow, a0, at, m, Exec::default())
            .unwrap()
            .ys()
            .fold(0.0, f64::max)
    };
    assert_abs_diff_eq!(peak(LocalVisibility::Analytic), 1.0, epsilon = 1e-3);
    let scanned_peak = peak(LocalVisibility::FringeScan);
    assert!(
        scanned_peak > 0.99 && scanned_peak < 0.999,
        "{scanned_peak}"
    );
}
