#![allow(dead_code)]

use spdc_cascade::geometry::Cascade;
use spdc_cascade::interference::InterferenceParams;
use spdc_cascade::materials::{
    axial_propagation_times, AxisSign, CrystalSpec, DispersionModel, PropagationTimes, PumpSpec,
};

pub const THICKNESS_MM: f64 = 1.07;
pub const CUT_ANGLE_DEG: f64 = 43.65;
pub const PUMP_NM: f64 = 395.0;
pub const BANDWIDTH_NM: f64 = 1.0;

pub fn pump() -> PumpSpec {
    PumpSpec::new(PUMP_NM, BANDWIDTH_NM).unwrap()
}

pub fn crystal(thickness_mm: f64) -> CrystalSpec {
    CrystalSpec::new(
        DispersionModel::bbo(),
        thickness_mm,
        CUT_ANGLE_DEG.to_radians(),
        AxisSign::Plus,
    )
    .unwrap()
}

pub fn cascade(thickness_mm: f64) -> Cascade {
    Cascade::symmetric(crystal(thickness_mm))
}

pub fn times(thickness_mm: f64) -> PropagationTimes {
    axial_propagation_times(&crystal(thickness_mm), &pump()).unwrap()
}

pub fn params() -> InterferenceParams {
    InterferenceParams::from_pump(times(THICKNESS_MM), &pump()).unwrap()
}
