//! Shared inputs for the `polrot` benchmarks.

use polrot::dispersion::faraday_modes;
use polrot::interface::match_interface;
use polrot::{InterfaceSolution, PulseSpec, C64};

/// 500 nm, 100 fs pulse starting 600 um before the medium.
pub fn reference_pulse() -> PulseSpec {
    PulseSpec::from_wavelength(500e-9, 100e-15, -600e-6).unwrap()
}

/// Interface of a lossless Faraday medium with `chi12 = i * chi12_abs`.
pub fn faraday_interface(spec: &PulseSpec, chi12_abs: f64) -> InterfaceSolution {
    let modes = faraday_modes(C64::new(0.0, 0.0), C64::new(0.0, chi12_abs), spec.omega0()).unwrap();
    match_interface(spec.k0, &modes).unwrap()
}
