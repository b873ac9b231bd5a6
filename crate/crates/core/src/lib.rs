//! Optical analog of Rabi oscillation and its suppression.
//!
//! Light pulses entering a semi-infinite optically active (or magneto-optic)
//! medium show a time-dependent rotation of their linear polarization, the
//! optical counterpart of a two-level atom's Rabi oscillation. This crate
//! computes the medium response (Lorentz model), the two propagation modes,
//! the vacuum/medium interface amplitudes, the time-dependent pulse field by
//! spectral quadrature, and the integrated observables used to tell apart
//! the oscillating, averaged, split and filtered regimes. The magneto-optic
//! filter-design maps and the closed-form atomic formulas live alongside.
//!
//! All frequencies are angular (rad/s) and lengths in metres unless a
//! function says otherwise. The Lorentz and filter-design code is unit
//! agnostic: pass `omega0 = 1` to work in ratios to the resonance frequency.

pub mod atomic;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod filter;
pub mod interface;
pub mod lorentz;
pub mod observables;
pub mod pulse;
pub mod quadrature;

pub use num_complex::Complex64 as C64;

pub use atomic::{AtomScenario, AtomicAnalogy};
pub use dispersion::{
    DispersionCoefficients, Handedness, Mode, ModeKind, PolarizationEllipse, PropagationModes,
};
pub use error::{Error, Result};
pub use filter::{BoundaryCurves, FilterRegion, FilterRegionMap, Subregion, SurvivingMode};
pub use interface::InterfaceSolution;
pub use lorentz::{LorentzMedium, Structure, SusceptibilityTensor};
pub use observables::{
    IntensityProfile, IntensityTrace, OscillationMetrics, Regime, RegimeReport, RotationScales,
};
pub use pulse::{
    FieldGrid, FieldGridRequest, FieldSample, HarmonicProfile, PulseSpec, UniformAxis,
};
pub use quadrature::{QuadratureOptions, QuadratureRule};
