//! Field matching at the vacuum/medium boundary for a normally incident
//! wave polarized along x.

use nalgebra::{Matrix4, Vector4};

use crate::dispersion::{Mode, PropagationModes};
use crate::error::{Error, Result};
use crate::C64;

/// Reflection and transmission amplitudes. The amplitudes depend on the
/// refractive indices only, so one solution serves every `k` in a
/// quasi-monochromatic band (see [`InterfaceSolution::at`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceSolution {
    /// Vacuum wavenumber (rad/m).
    pub k: f64,
    pub k_plus: C64,
    pub k_minus: C64,
    pub n_plus: C64,
    pub n_minus: C64,
    /// Co-polarized reflection amplitude.
    pub r11: C64,
    /// Cross-polarized reflection amplitude.
    pub r21: C64,
    pub c_plus: C64,
    pub c_minus: C64,
    pub jones_plus: [C64; 2],
    pub jones_minus: [C64; 2],
}

impl InterfaceSolution {
    /// Same amplitudes at another vacuum wavenumber.
    pub fn at(&self, k: f64) -> Self {
        Self {
            k,
            k_plus: self.n_plus * k,
            k_minus: self.n_minus * k,
            ..*self
        }
    }

    /// Residuals of the four continuity equations (continuity of `Ex`, `Ey`
    /// and their z-derivatives), each relative to the incident term.
    pub fn matching_residuals(&self) -> [f64; 4] {
        let (jp, jm) = (self.jones_plus, self.jones_minus);
        let (cp, cm) = (self.c_plus, self.c_minus);
        let k = self.k;
        let one = C64::new(1.0, 0.0);
        [
            (one + self.r11 - cp * jp[0] - cm * jm[0]).norm(),
            (self.r21 - cp * jp[1] - cm * jm[1]).norm(),
            ((one - self.r11) * k - self.k_plus * cp * jp[0] - self.k_minus * cm * jm[0]).norm()
                / k,
            (-self.r21 * k - self.k_plus * cp * jp[1] - self.k_minus * cm * jm[1]).norm() / k,
        ]
    }

    pub fn reflectance(&self) -> f64 {
        self.r11.norm_sqr() + self.r21.norm_sqr()
    }
}

fn jones_norm_sqr(j: &[C64; 2]) -> f64 {
    j[0].norm_sqr() + j[1].norm_sqr()
}

/// `Some(s)` if the modes form the circular pair `[1, -s i]`, `[1, s i]`.
fn circular_orientation(plus: &Mode, minus: &Mode) -> Option<f64> {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let close = |a: C64, b: C64| (a - b).norm() <= 1e-12;
    [1.0, -1.0].into_iter().find(|&s| {
        close(plus.jones[0], one)
            && close(minus.jones[0], one)
            && close(plus.jones[1], -i * s)
            && close(minus.jones[1], i * s)
    })
}

fn circular_basis(s: f64) -> ([C64; 2], [C64; 2]) {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    ([one, -i * s], [one, i * s])
}

/// Closed-form matching for circular modes (optically active medium):
/// `R11 = (k^2 - k+ k-) / ((k + k+)(k + k-))`,
/// `R21 = -i s k (k- - k+) / ((k + k+)(k + k-))`, `C± = k / (k + k±)`,
/// where `s = +1` for `k+` carrying `[1, -i]` and `-1` for `[1, i]`.
/// Degenerate modes are re-expressed in the circular basis.
pub fn match_interface(k: f64, modes: &PropagationModes) -> Result<InterfaceSolution> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k must be > 0, got {k}")));
    }
    let s = if modes.degenerate {
        1.0
    } else {
        circular_orientation(&modes.plus, &modes.minus).ok_or(Error::NonCircularModes)?
    };
    let (jones_plus, jones_minus) = circular_basis(s);
    let (n_plus, n_minus) = (modes.plus.n, modes.minus.n);
    let (kp, km) = (n_plus * k, n_minus * k);
    let den = (kp + k) * (km + k);
    let i = C64::new(0.0, 1.0);
    Ok(InterfaceSolution {
        k,
        k_plus: kp,
        k_minus: km,
        n_plus,
        n_minus,
        r11: (k * k - kp * km) / den,
        r21: -i * s * k * (km - kp) / den,
        c_plus: k / (k + kp),
        c_minus: k / (k + km),
        jones_plus,
        jones_minus,
    })
}

/// Matching for arbitrary mode polarizations by a direct 4x4 solve.
pub fn match_interface_general(k: f64, modes: &PropagationModes) -> Result<InterfaceSolution> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("k must be > 0, got {k}")));
    }
    let (jp, jm) = (modes.plus.jones, modes.minus.jones);
    let (np, nm) = (modes.plus.n, modes.minus.n);
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // unknowns: R11, R21, C+, C-
    #[rustfmt::skip]
    let a = Matrix4::new(
        -one, z, jp[0], jm[0],
        z, -one, jp[1], jm[1],
        one, z, np * jp[0], nm * jm[0],
        z, one, np * jp[1], nm * jm[1],
    );
    let b = Vector4::new(one, z, one, z);
    let x = a.lu().solve(&b).ok_or_else(|| {
        Error::InvalidParameter("interface system is singular (modes not independent)".into())
    })?;
    Ok(InterfaceSolution {
        k,
        k_plus: np * k,
        k_minus: nm * k,
        n_plus: np,
        n_minus: nm,
        r11: x[0],
        r21: x[1],
        c_plus: x[2],
        c_minus: x[3],
        jones_plus: jp,
        jones_minus: jm,
    })
}

/// `Re(n+) |C+|^2`, the transmitted fraction quoted for the filtering
/// regime. It counts one Jones component only; see [`flux_transmittance`].
pub fn surviving_transmittance(solution: &InterfaceSolution) -> Result<f64> {
    if solution.n_minus.re.abs() > 1e-12 * solution.n_minus.norm() {
        return Err(Error::NotFilteringRegime);
    }
    Ok(solution.n_plus.re * solution.c_plus.norm_sqr())
}

/// Transmitted energy flux over incident flux,
/// `sum_j Re(n_j) |C_j|^2 |J_j|^2`. Equals `1 - |R11|^2 - |R21|^2` in a
/// lossless medium.
pub fn flux_transmittance(solution: &InterfaceSolution) -> f64 {
    solution.n_plus.re * solution.c_plus.norm_sqr() * jones_norm_sqr(&solution.jones_plus)
        + solution.n_minus.re * solution.c_minus.norm_sqr() * jones_norm_sqr(&solution.jones_minus)
}

/// `1 / Im(k-)` in metres; infinite on the threshold.
pub fn penetration_length(modes: &PropagationModes) -> Result<f64> {
    if !modes.minus.is_non_propagating() {
        return Err(Error::NotEvanescent);
    }
    let im = modes.minus.k.im;
    Ok(if im > 0.0 { 1.0 / im } else { f64::INFINITY })
}
