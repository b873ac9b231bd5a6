//! Physical constants (SI, CODATA 2018 exact or recommended values).

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass (kg).
pub const M_ELECTRON: f64 = 9.109_383_701_5e-31;

/// Atomic mass unit (kg).
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Magnetic field (T) corresponding to a cyclotron angular frequency
/// `omega_c = e B / m_e`.
pub fn tesla_from_cyclotron(omega_c: f64) -> f64 {
    M_ELECTRON * omega_c / E_CHARGE
}
