//! Experiment-level routines built on the interference model.

mod delays;
mod quartz;
mod scan;
mod visibility;

pub use delays::{
    lock_to_fringe, optimal_delays, optimize_delays_numeric, NumericOptimum, OptimalDelays,
    SearchBox, NUMERIC_AGREEMENT_FS,
};
pub use quartz::{quartz_delay, quartz_thickness, DelayPrescription, QuartzDelayLine};
pub use scan::{
    delay_scan, local_fringe_visibility, polarization_scan, visibility_curve, AbscissaKind,
    LocalVisibility, OrdinateKind, ScanSeries, ScanSnapshot, Sweep,
};
pub use visibility::{extract_visibility, fringe_spacing};
