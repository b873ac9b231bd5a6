//! Closed-form two-level atom in a detuned laser field, and the map from an
//! optically active medium onto an equivalent atom.
//!
//! The internal-state Hamiltonian is `(hbar/2) [[0, Omega], [Omega*, -2 delta]]`
//! with `delta = omega_L - omega_atom`.

use std::f64::consts::PI;

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Largest `max(|chi11|, |chi12|)` accepted by [`analogy_map`].
pub const SMALL_CHI_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomScenario {
    /// On-resonance Rabi frequency (rad/s).
    pub omega: C64,
    /// Detuning `omega_L - omega_atom` (rad/s).
    pub delta: f64,
    /// Atomic mass (kg).
    pub mass: f64,
    /// Incident wavenumber (rad/m).
    pub k: f64,
    /// Spatial width of the incident packet (m).
    pub sigma_z: f64,
}

impl AtomScenario {
    pub fn new(omega: C64, delta: f64, mass: f64, k: f64, sigma_z: f64) -> Result<Self> {
        if !(omega.re.is_finite() && omega.im.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidParameter(
                "Rabi frequency and detuning must be finite".into(),
            ));
        }
        for (name, v) in [("mass", mass), ("k", k), ("sigma_z", sigma_z)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            omega,
            delta,
            mass,
            k,
            sigma_z,
        })
    }

    /// Effective Rabi frequency `sqrt(delta^2 + |Omega|^2)`.
    pub fn omega_prime(&self) -> f64 {
        self.delta.hypot(self.omega.norm())
    }

    pub fn rabi_period(&self) -> f64 {
        2.0 * PI / self.omega_prime()
    }

    pub fn velocity(&self) -> f64 {
        HBAR * self.k / self.mass
    }

    /// Time at which the two internal components have separated by `2 sigma_z`.
    pub fn splitting_time(&self) -> f64 {
        2.0 * self.sigma_z * self.k / self.omega_prime()
    }

    /// Internal-state potential divided by `hbar`.
    pub fn potential(&self) -> [[C64; 2]; 2] {
        [
            [C64::new(0.0, 0.0), 0.5 * self.omega],
            [0.5 * self.omega.conj(), C64::new(-self.delta, 0.0)],
        ]
    }
}

/// `sin(w t / 2) / w`, finite as `w -> 0`.
fn sin_over(w: f64, t: f64) -> f64 {
    let x = 0.5 * w * t;
    if x.abs() < 1e-8 {
        0.5 * t * (1.0 - x * x / 6.0)
    } else {
        x.sin() / w
    }
}

/// Ground and excited amplitudes at time `t` for an atom starting in the
/// ground state.
pub fn rabi_amplitudes(s: &AtomScenario, t: f64) -> (C64, C64) {
    let w = s.omega_prime();
    let phase = (I * (0.5 * s.delta * t)).exp();
    let so = sin_over(w, t);
    let ground = phase * (C64::new((0.5 * w * t).cos(), 0.0) - I * (s.delta * so));
    let excited = phase * (-I * s.omega.conj() * so);
    (ground, excited)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpairs {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Unnormalized, first component 1.
    pub v_plus: [C64; 2],
    pub v_minus: [C64; 2],
}

/// Eigenvalues `(-delta +- Omega')/2` of [`AtomScenario::potential`] and
/// their eigenvectors `(1, 2 lambda / Omega)`.
pub fn eigenpairs(s: &AtomScenario) -> Result<Eigenpairs> {
    if s.omega.norm() == 0.0 {
        return Err(Error::OmegaZero);
    }
    let (lp, lm) = split_eigenvalues(s);
    let one = C64::new(1.0, 0.0);
    Ok(Eigenpairs {
        lambda_plus: lp,
        lambda_minus: lm,
        v_plus: [one, 2.0 * lp / s.omega],
        v_minus: [one, 2.0 * lm / s.omega],
    })
}

/// The larger-magnitude root directly, the other from the product
/// `lambda_+ lambda_- = -|Omega|^2 / 4`.
fn split_eigenvalues(s: &AtomScenario) -> (f64, f64) {
    let w = s.omega_prime();
    if w == 0.0 {
        return (0.0, 0.0);
    }
    let prod = -0.25 * s.omega.norm_sqr();
    if s.delta >= 0.0 {
        let lm = -0.5 * (s.delta + w);
        (prod / lm, lm)
    } else {
        let lp = 0.5 * (w - s.delta);
        (lp, prod / lp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicWavenumbers {
    pub plus: C64,
    pub minus: C64,
    pub plus_evanescent: bool,
    pub minus_evanescent: bool,
}

/// Wavenumbers `k sqrt(1 - 2 m lambda_+- / (hbar k^2))` of the two dressed
/// components inside the laser region. Evanescent branches get a positive
/// imaginary part.
pub fn atomic_wavenumbers(s: &AtomScenario) -> AtomicWavenumbers {
    let (lp, lm) = split_eigenvalues(s);
    let scale = 2.0 * s.mass / (HBAR * s.k * s.k);
    let branch = |lambda: f64| {
        let r = 1.0 - scale * lambda;
        if r >= 0.0 {
            (C64::new(s.k * r.sqrt(), 0.0), false)
        } else {
            (C64::new(0.0, s.k * (-r).sqrt()), true)
        }
    };
    let (plus, plus_evanescent) = branch(lp);
    let (minus, minus_evanescent) = branch(lm);
    AtomicWavenumbers {
        plus,
        minus,
        plus_evanescent,
        minus_evanescent,
    }
}

/// Internal-state envelope of the stationary wave at depth `z >= 0`, with
/// `z m / (hbar k)` in the role of time. The common factor `exp(i k z)` is
/// left out.
pub fn semiclassical_profile(s: &AtomScenario, z: f64) -> (C64, C64) {
    let tau = z * s.mass / (HBAR * s.k);
    let w = s.omega_prime();
    let arg = 0.5 * w * tau;
    let phase = C64::from_polar(1.0, 0.5 * s.delta * tau);
    let (sn, cs) = arg.sin_cos();
    if w == 0.0 {
        return (phase, C64::new(0.0, 0.0));
    }
    let ground = phase * C64::new(cs, -s.delta / w * sn);
    let excited = phase * (-I * s.omega.conj() / w) * sn;
    (ground, excited)
}

/// Spatial period `2 pi hbar k / (m Omega')` of the density undulations.
pub fn rabi_wavelength(s: &AtomScenario) -> f64 {
    2.0 * PI * HBAR * s.k / (s.mass * s.omega_prime())
}

/// Atom equivalent to a weakly susceptible Faraday medium at angular
/// frequency `omega`.
///
/// The mass `hbar k / c` makes the atom travel at `c`, so `hbar k^2 / m = omega`
/// and the optical index shifts become level shifts: the circular splitting
/// `omega |chi12|` is the effective Rabi frequency and `omega Re chi11` the
/// common shift. The optical `+` mode (larger index) pairs with the lower
/// dressed level `lambda_-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicAnalogy {
    pub omega: f64,
    pub k: f64,
    pub mass: f64,
    /// On-resonance Rabi frequency `i omega |chi12|`, whose dressed states
    /// are the circular vectors `(1, -+i)`.
    pub omega_eff: C64,
    /// `omega Re chi11`.
    pub delta_eff: f64,
    /// Optical rotation period `2 pi / (omega |chi12|)`.
    pub optical_period: f64,
    /// Rabi period of the mapped atom.
    pub atomic_period: f64,
}

impl AtomicAnalogy {
    /// The mapped atom. The common shift does not enter the splitting, so the
    /// atom is driven on resonance.
    pub fn scenario(&self, sigma_z: f64) -> Result<AtomScenario> {
        AtomScenario::new(self.omega_eff, 0.0, self.mass, self.k, sigma_z)
    }
}

pub fn analogy_map(chi11: C64, chi12: C64, omega: f64) -> Result<AtomicAnalogy> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let size = chi11.norm().max(chi12.norm());
    if size.is_nan() || size > SMALL_CHI_LIMIT {
        return Err(Error::NotSmallChi(size));
    }
    let k = omega / C;
    let split = omega * chi12.norm();
    Ok(AtomicAnalogy {
        omega,
        k,
        mass: HBAR * k / C,
        omega_eff: C64::new(0.0, split),
        delta_eff: omega * chi11.re,
        optical_period: 2.0 * PI / split,
        atomic_period: 2.0 * PI / split.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::AMU;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cesium(omega: C64, delta: f64, k: f64) -> AtomScenario {
        AtomScenario::new(omega, delta, 133.0 * AMU, k, 1e-6).unwrap()
    }

    fn apply(m: &[[C64; 2]; 2], v: &[C64; 2]) -> [C64; 2] {
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    #[test]
    fn ground_state_at_zero_time() {
        let s = cesium(C64::new(3e6, 1e6), 2e6, 1e7);
        let (g, e) = rabi_amplitudes(&s, 0.0);
        assert_eq!(g, C64::new(1.0, 0.0));
        assert_eq!(e, C64::new(0.0, 0.0));
    }

    #[test]
    fn full_inversion_on_resonance() {
        let s = cesium(C64::new(0.0, 2e6), 0.0, 1e7);
        let (g, e) = rabi_amplitudes(&s, PI / 2e6);
        assert!(g.norm() < 1e-15);
        assert_relative_eq!(e.norm_sqr(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn amplitudes_solve_the_schrodinger_equation() {
        // i d psi/dt = V psi, checked with a fourth-order central difference
        let s = cesium(C64::new(1.3, -0.7), 0.9, 1e7);
        let v = s.potential();
        let h = 1e-3;
        for t in [0.0, 0.4, 2.1, 7.3] {
            let f = |t| {
                let (g, e) = rabi_amplitudes(&s, t);
                [g, e]
            };
            let (a, b, c, d) = (f(t - 2.0 * h), f(t - h), f(t + h), f(t + 2.0 * h));
            let psi = f(t);
            let rhs = apply(&v, &psi);
            for j in 0..2 {
                let deriv = (a[j] - 8.0 * b[j] + 8.0 * c[j] - d[j]) / (12.0 * h);
                assert!((I * deriv - rhs[j]).norm() < 1e-10, "t={t} j={j}");
            }
        }
    }

    #[test]
    fn resonant_circular_eigenvectors() {
        let s = cesium(C64::new(0.0, 5e5), 0.0, 1e7);
        let ep = eigenpairs(&s).unwrap();
        assert_relative_eq!(ep.lambda_plus, 2.5e5, max_relative = 1e-15);
        assert_relative_eq!(ep.lambda_minus, -2.5e5, max_relative = 1e-15);
        assert!((ep.v_plus[1] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((ep.v_minus[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn eigenpairs_need_a_drive() {
        let s = cesium(C64::new(0.0, 0.0), 1e6, 1e7);
        assert!(matches!(eigenpairs(&s), Err(Error::OmegaZero)));
    }

    #[test]
    fn far_detuned_eigenvalues() {
        let omega = 1e3;
        let delta = 1e9;
        let ep = eigenpairs(&cesium(C64::new(omega, 0.0), delta, 1e7)).unwrap();
        // series in (omega/delta)^2
        let x = (omega / delta).powi(2);
        let light_shift = omega * omega / (4.0 * delta) * (1.0 - x / 4.0);
        assert_relative_eq!(ep.lambda_plus, light_shift, max_relative = 1e-12);
        assert_relative_eq!(ep.lambda_minus, -delta - light_shift, max_relative = 1e-15);
        let ep = eigenpairs(&cesium(C64::new(omega, 0.0), -delta, 1e7)).unwrap();
        assert_relative_eq!(ep.lambda_minus, -light_shift, max_relative = 1e-12);
    }

    #[test]
    fn free_wavenumbers_without_field() {
        let s = cesium(C64::new(0.0, 0.0), 0.0, 1e7);
        let w = atomic_wavenumbers(&s);
        assert_eq!(w.plus, C64::new(1e7, 0.0));
        assert_eq!(w.minus, C64::new(1e7, 0.0));
        assert!(!w.plus_evanescent && !w.minus_evanescent);
    }

    #[test]
    fn fast_atom_wavenumber_expansion() {
        let k = 1e10;
        let s = cesium(C64::new(2e5, 1e5), 3e5, k);
        let w = atomic_wavenumbers(&s);
        let wp = s.omega_prime();
        let c = s.mass / (2.0 * HBAR * k);
        // shifts are ~1e-6 k, so the first-order term is good to ~1e-6 of itself
        assert_relative_eq!(w.plus.re - k, c * (s.delta - wp), max_relative = 1e-5);
        assert_relative_eq!(w.minus.re - k, c * (s.delta + wp), max_relative = 1e-5);
    }

    #[test]
    fn slow_atom_upper_branch_is_evanescent() {
        let m = 133.0 * AMU;
        let omega = 1e6;
        // hbar k^2 / m = omega / 4
        let k = (0.25 * omega * m / HBAR).sqrt();
        let s = AtomScenario::new(C64::new(omega, 0.0), 0.0, m, k, 1e-6).unwrap();
        let w = atomic_wavenumbers(&s);
        assert!(w.plus_evanescent && !w.minus_evanescent);
        // radicands 1 - 4 and 1 + 4
        assert_relative_eq!(w.plus.im, k * 3f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(w.minus.re, k * 5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn excited_density_vanishes_at_the_rabi_wavelength() {
        let s = cesium(C64::new(0.0, 4e6), 0.0, 2e7);
        let lr = rabi_wavelength(&s);
        let (g, e) = semiclassical_profile(&s, 0.0);
        assert_eq!((g, e), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        assert!(semiclassical_profile(&s, lr).1.norm() < 1e-14);
        assert_relative_eq!(
            semiclassical_profile(&s, 0.5 * lr).1.norm_sqr(),
            1.0,
            max_relative = 1e-14
        );
        // half of the density is excited a quarter of the way
        assert_relative_eq!(
            semiclassical_profile(&s, 0.25 * lr).1.norm_sqr(),
            0.5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn optical_period_example() {
        let lambda0 = 500e-9;
        let omega = 2.0 * PI * C / lambda0;
        let a = analogy_map(C64::new(0.0, 0.0), C64::new(2e-4, 0.0), omega).unwrap();
        assert_relative_eq!(a.omega_eff.im, 7.534606269235e11, max_relative = 1e-12);
        assert_relative_eq!(a.optical_period, 8.339102379954e-12, max_relative = 1e-12);
        // hbar k^2 / m = omega
        assert_relative_eq!(HBAR * a.k * a.k / a.mass, omega, max_relative = 1e-15);
        let s = a.scenario(30e-6).unwrap();
        assert_relative_eq!(s.rabi_period(), a.optical_period, max_relative = 1e-12);
        assert_relative_eq!(s.velocity(), C, max_relative = 1e-15);
    }

    #[test]
    fn splitting_time_matches_the_optical_one() {
        let omega = 3.7e15;
        let chi12 = C64::new(0.0, 2e-3);
        let a = analogy_map(C64::new(1e-3, 0.0), chi12, omega).unwrap();
        let sigma_z = 30e-6;
        let s = a.scenario(sigma_z).unwrap();
        assert_relative_eq!(
            s.splitting_time(),
            2.0 * sigma_z / (C * chi12.norm()),
            max_relative = 1e-14
        );
    }

    #[test]
    fn analogy_rejects_large_chi_and_tends_to_infinite_period() {
        assert!(matches!(
            analogy_map(C64::new(0.2, 0.0), C64::new(0.0, 0.01), 1e15),
            Err(Error::NotSmallChi(v)) if v == 0.2
        ));
        let a = analogy_map(C64::new(0.0, 0.0), C64::new(0.0, 0.0), 1e15).unwrap();
        assert_eq!(a.omega_eff.norm(), 0.0);
        assert!(a.optical_period.is_infinite());
    }

    fn scenario_strategy() -> impl Strategy<Value = AtomScenario> {
        (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0)
            .prop_map(|(or, oi, d)| AtomScenario::new(C64::new(or, oi), d, 1.0, 1.0, 1.0).unwrap())
    }

    proptest! {
        #[test]
        fn population_is_conserved(s in scenario_strategy(), t in -50.0f64..50.0) {
            let (g, e) = rabi_amplitudes(&s, t);
            prop_assert!((g.norm_sqr() + e.norm_sqr() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn eigen_residuals(s in scenario_strategy()) {
            prop_assume!(s.omega.norm() > 1e-3);
            let ep = eigenpairs(&s).unwrap();
            let v = s.potential();
            for (lambda, vec) in [(ep.lambda_plus, ep.v_plus), (ep.lambda_minus, ep.v_minus)] {
                let mv = apply(&v, &vec);
                for j in 0..2 {
                    prop_assert!((mv[j] - vec[j] * lambda).norm() < 1e-12 * (1.0 + vec[j].norm()) * s.omega_prime());
                }
            }
        }

        #[test]
        fn space_time_correspondence(s in scenario_strategy(), z in 0.0f64..40.0) {
            let t = z * s.mass / (HBAR * s.k);
            let (g1, e1) = semiclassical_profile(&s, z);
            let (g2, e2) = rabi_amplitudes(&s, t);
            prop_assert!((g1 - g2).norm() < 1e-12);
            prop_assert!((e1 - e2).norm() < 1e-12);
        }

        #[test]
        fn mapped_splitting_matches_optics(a in 1e-5f64..0.05, c11 in -0.05f64..0.05) {
            let omega = 3.0e15;
            let chi11 = C64::new(c11, 0.0);
            let chi12 = C64::new(0.0, a);
            let map = analogy_map(chi11, chi12, omega).unwrap();
            let w = atomic_wavenumbers(&map.scenario(1e-5).unwrap());
            let k = map.k;
            let optical = k * ((1.0 + c11 + a).sqrt() - (1.0 + c11 - a).sqrt());
            let atomic = (w.minus - w.plus).re;
            prop_assert!(((atomic - optical) / optical).abs() < c11.abs().max(a));
        }
    }
}
