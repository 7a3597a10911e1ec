use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength_nm} nm is outside the valid range [{min_nm}, {max_nm}] nm of {material}")]
    OutOfRange {
        material: String,
        wavelength_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    #[error("wavelength {wavelength_nm} nm must lie strictly inside ({min_nm}, {max_nm}) nm of {material} to take a derivative")]
    AtRangeBoundary {
        material: String,
        wavelength_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    #[error("propagation angle {0} rad is outside [0, pi/2]")]
    AngleOutOfRange(f64),

    #[error("not phase-matchable: best longitudinal mismatch is {residual_rad_per_um:.6e} rad/um")]
    NotPhaseMatchable { residual_rad_per_um: f64 },

    #[error("emission cones do not enclose the pump axis (axial mismatch {residual_rad_per_um:.6e} rad/um); only axis-enclosing cones are supported")]
    ConeExcludesAxis { residual_rad_per_um: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("visibility undefined: {0}")]
    UndefinedVisibility(String),

    #[error("material definition error: {0}")]
    MaterialDefinition(String),

    #[error("failed to parse material file: {0}")]
    MaterialParse(#[from] toml::de::Error),
}
