//! Plain-text renderings of results: CSV tables and one-line JSON summaries.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::ScanSeries;
use crate::geometry::EmissionTimeMap;

/// Significant digits used for every number in CSV output.
pub const CSV_SIGNIFICANT_DIGITS: usize = 6;

pub const EMISSION_MAP_HEADER: &str = "phi_deg,t_1e_fs,t_1o_fs,t_2e_fs,t_2o_fs";

/// Rounds `x` to six significant digits and prints the shortest decimal
/// that reads back as the rounded value.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", CSV_SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation round-trips");
    // Avoid "-0".
    if rounded == 0.0 {
        return "0".to_owned();
    }
    rounded.to_string()
}

pub fn emission_map_csv(map: &EmissionTimeMap) -> String {
    let mut out = String::with_capacity(64 * (map.phi.len() + 1));
    out.push_str(EMISSION_MAP_HEADER);
    out.push('\n');
    for (phi, t) in map.phi.iter().zip(&map.times) {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig6(phi.to_degrees()),
            sig6(t.first_e),
            sig6(t.first_o),
            sig6(t.second_e),
            sig6(t.second_o)
        );
    }
    out
}

/// Header `<abscissa with units>,<ordinate>` followed by one row per point.
pub fn scan_csv(series: &ScanSeries) -> String {
    let mut out = String::with_capacity(32 * (series.points.len() + 1));
    let _ = writeln!(
        out,
        "{},{}",
        series.abscissa.column(),
        series.ordinate.column()
    );
    for &(x, y) in &series.points {
        let _ = writeln!(out, "{},{}", sig6(x), sig6(y));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VisibilitySummary {
    pub visibility: f64,
    pub fringe_period_fs: f64,
    #[serde(rename = "tau_A_fs")]
    pub tau_a_fs: f64,
    #[serde(rename = "tau_B_fs")]
    pub tau_b_fs: f64,
}

impl VisibilitySummary {
    pub fn to_json_line(&self) -> String {
        json_line(self)
    }
}

/// Serializes `value` as compact JSON with a trailing newline.
pub fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("summary records serialize");
    s.push('\n');
    s
}
