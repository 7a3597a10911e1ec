//! Dispersion engine for uniaxial crystals.

mod crystal;
mod model;
mod sellmeier;

pub use crystal::{
    axial_propagation_times, propagation_times, AxisSign, CrystalSpec, PropagationTimes, PumpSpec,
    GRAZING_COS,
};
pub use model::{DispersionModel, MaterialCatalog, OpticalSign, Polarization};
pub use sellmeier::{Sellmeier, SellmeierTerm};

/// `n_o(λ)`; free-function form of [`DispersionModel::index_ordinary`].
pub fn index_ordinary(model: &DispersionModel, lam_nm: f64) -> crate::Result<f64> {
    model.index_ordinary(lam_nm)
}

/// `n_e(λ, θ)`; free-function form of [`DispersionModel::index_extraordinary`].
pub fn index_extraordinary(model: &DispersionModel, lam_nm: f64, theta: f64) -> crate::Result<f64> {
    model.index_extraordinary(lam_nm, theta)
}

/// Group index; free-function form of [`DispersionModel::group_index`].
pub fn group_index(model: &DispersionModel, lam_nm: f64, pol: Polarization) -> crate::Result<f64> {
    model.group_index(lam_nm, pol)
}
