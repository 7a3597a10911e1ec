use std::f64::consts::PI;

use super::scan::{AbscissaKind, ScanSeries};
use crate::interference::contrast;
use crate::{Error, Result};

/// Vertex of the parabola through three points, computed relative to the
/// middle one for conditioning. Falls back to the middle sample when the
/// points are collinear or the vertex leaves the bracket.
fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> (f64, f64) {
    let (h0, d0) = (p0.0 - p1.0, p0.1 - p1.1);
    let (h2, d2) = (p2.0 - p1.0, p2.1 - p1.1);
    // y − y1 = a u² + b u with u = x − x1.
    let det = h0 * h2 * (h0 - h2);
    let a = (d0 * h2 - d2 * h0) / det;
    let b = (d2 * h0 * h0 - d0 * h2 * h2) / det;
    if a == 0.0 || !a.is_finite() {
        return p1;
    }
    let u = -b / (2.0 * a);
    if !(h0..=h2).contains(&u) {
        return p1;
    }
    (p1.0 + u, p1.1 - b * b / (4.0 * a))
}

/// Sampled extremum refined by a parabola through its neighbours; edge
/// samples are taken as they are.
fn refined_extremum(points: &[(f64, f64)], idx: usize) -> (f64, f64) {
    if idx == 0 || idx + 1 >= points.len() {
        return points[idx];
    }
    parabola_vertex(points[idx - 1], points[idx], points[idx + 1])
}

fn check_span(series: &ScanSeries) -> Result<()> {
    let span = series.span();
    match series.abscissa {
        AbscissaKind::DelayFs => {
            if let Some(snap) = &series.snapshot {
                let need = 2.0 * snap.fringe_period_fs;
                if span < need * (1.0 - 1e-9) {
                    return Err(Error::InvalidArgument(format!(
                        "delay scan spans {span:.4} fs, need at least two fringes ({need:.4} fs)"
                    )));
                }
            }
        }
        AbscissaKind::AnalyzerRad => {
            if span < PI * (1.0 - 1e-9) {
                return Err(Error::InvalidArgument(format!(
                    "analyzer scan spans {span:.4} rad, need at least pi"
                )));
            }
        }
        AbscissaKind::QuartzMm => {}
    }
    Ok(())
}

/// Fringe contrast `(max − min)/(max + min)` of a scan, with the sampled
/// extrema refined by quadratic interpolation.
pub fn extract_visibility(series: &ScanSeries) -> Result<f64> {
    check_span(series)?;
    let pts = &series.points;
    let by_y = |a: &(usize, &(f64, f64)), b: &(usize, &(f64, f64))| a.1 .1.total_cmp(&b.1 .1);
    let (i_max, _) = pts.iter().enumerate().max_by(by_y).expect("non-empty");
    let (i_min, _) = pts.iter().enumerate().min_by(by_y).expect("non-empty");
    let max = refined_extremum(pts, i_max).1.max(pts[i_max].1);
    let min = refined_extremum(pts, i_min).1.min(pts[i_min].1).max(0.0);
    if max + min <= 0.0 {
        return Err(Error::UndefinedVisibility("every sample is zero".into()));
    }
    Ok(contrast(max, min))
}

/// Mean spacing of successive fringe maxima, each located by quadratic
/// interpolation.
pub fn fringe_spacing(series: &ScanSeries) -> Result<f64> {
    let pts = &series.points;
    let peaks: Vec<f64> = (1..pts.len().saturating_sub(1))
        .filter(|&i| pts[i].1 > pts[i - 1].1 && pts[i].1 >= pts[i + 1].1)
        .map(|i| refined_extremum(pts, i).0)
        .collect();
    if peaks.len() < 2 {
        return Err(Error::UndefinedVisibility(format!(
            "need two fringe maxima to measure a spacing, found {}",
            peaks.len()
        )));
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}
