use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation on (or numerically at) an undamped Lorentz resonance.
    #[error("resonance singularity: |{which}| = {modulus:e} below tolerance")]
    ResonanceSingularity { which: &'static str, modulus: f64 },

    #[error("degenerate longitudinal response: |1 + chi33| = {0:e}")]
    DegenerateLongitudinal(f64),

    #[error("group velocity undefined for an evanescent mode")]
    EvanescentMode,

    #[error("not in the filtering regime (k- is propagating)")]
    NotFilteringRegime,

    #[error("mode is not evanescent")]
    NotEvanescent,

    #[error("mode Jones vectors are not circular; use the general interface solver")]
    NonCircularModes,

    #[error("quadrature did not converge with {nodes} nodes (max change {change:e})")]
    QuadratureNotConverged { nodes: usize, change: f64 },

    #[error("grid truncated: field at z_max is {ratio:e} of peak")]
    GridTruncation { ratio: f64 },

    #[error("grid under-resolved: dz = {dz:e} m exceeds {limit:e} m")]
    UnderResolved { dz: f64, limit: f64 },

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("handedness rule and mode solver disagree at omega = {omega}, omega_cz = {omega_cz}")]
    InconsistentHandedness { omega: f64, omega_cz: f64 },

    #[error("handedness rule undefined at omega = omega_S")]
    HandednessBoundary,

    #[error("Rabi frequency is zero")]
    OmegaZero,

    #[error("susceptibility not small: max(|chi11|, |chi12|) = {0}")]
    NotSmallChi(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable variant name, used by the CLI when reporting numeric failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ResonanceSingularity { .. } => "ResonanceSingularity",
            Error::DegenerateLongitudinal(_) => "DegenerateLongitudinal",
            Error::EvanescentMode => "EvanescentMode",
            Error::NotFilteringRegime => "NotFilteringRegime",
            Error::NotEvanescent => "NotEvanescent",
            Error::NonCircularModes => "NonCircularModes",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::GridTruncation { .. } => "GridTruncation",
            Error::UnderResolved { .. } => "UnderResolved",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::InconsistentHandedness { .. } => "InconsistentHandedness",
            Error::HandednessBoundary => "HandednessBoundary",
            Error::OmegaZero => "OmegaZero",
            Error::NotSmallChi(_) => "NotSmallChi",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
