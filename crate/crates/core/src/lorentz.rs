//! Susceptibility tensor of a homogeneous dielectric in a static magnetic
//! field, from the classical Lorentz (bound electron) model.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::C64;

/// Relative tolerance used by [`SusceptibilityTensor::structure`].
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Default singularity tolerance for the Lorentz denominators, relative to
/// `omega0^2` (first-order denominator) and `omega0^4` (second-order one).
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Single-resonance Lorentz medium.
///
/// `omega_c` holds the signed cyclotron components `e B_u / m_e`. Any
/// consistent frequency unit works; the filter-design scans use `omega0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMedium {
    pub omega0: f64,
    pub omega_p: f64,
    pub omega_c: [f64; 3],
    pub gamma: f64,
}

impl LorentzMedium {
    pub fn new(omega0: f64, omega_p: f64, omega_c: [f64; 3], gamma: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be > 0, got {omega0}"
            )));
        }
        if !(omega_p >= 0.0 && omega_p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega_p must be >= 0, got {omega_p}"
            )));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        if omega_c.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "cyclotron components must be finite".into(),
            ));
        }
        Ok(Self {
            omega0,
            omega_p,
            omega_c,
            gamma,
        })
    }

    /// Medium in units of the resonance frequency (`omega0 = 1`).
    pub fn scaled(omega_p: f64, omega_c: [f64; 3], gamma: f64) -> Result<Self> {
        Self::new(1.0, omega_p, omega_c, gamma)
    }

    /// Total cyclotron frequency `|omega_c|`.
    pub fn cyclotron(&self) -> f64 {
        let [x, y, z] = self.omega_c;
        (x * x + y * y + z * z).sqrt()
    }

    /// Same medium with the field replaced by `B ∥ z` of the given cyclotron
    /// frequency (Faraday configuration).
    pub fn with_faraday_field(&self, omega_cz: f64) -> Self {
        Self {
            omega_c: [0.0, 0.0, omega_cz],
            ..*self
        }
    }

    /// `omega_S = sqrt(omega0^2 + omega_p^2 / 2)`.
    pub fn omega_s(&self) -> f64 {
        (self.omega0.powi(2) + 0.5 * self.omega_p.powi(2)).sqrt()
    }

    /// `omega_0p = sqrt(omega0^2 + omega_p^2)`.
    pub fn omega_0p(&self) -> f64 {
        (self.omega0.powi(2) + self.omega_p.powi(2)).sqrt()
    }

    pub fn susceptibility(&self, omega: f64) -> Result<SusceptibilityTensor> {
        lorentz_susceptibility(self, omega, SINGULARITY_TOL)
    }
}

/// Builds the six independent elements of the undamped tensor in terms of
/// the detuning factor `d = omega0^2 - omega^2`, then applies
/// `d -> d - i gamma omega`. The lower triangle follows the formal rule:
/// conjugate the undamped transpose element, then substitute. For
/// `gamma = 0` the result is exactly Hermitian.
pub fn lorentz_susceptibility(
    medium: &LorentzMedium,
    omega: f64,
    tol: f64,
) -> Result<SusceptibilityTensor> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega must be > 0, got {omega}"
        )));
    }
    let w0sq = medium.omega0 * medium.omega0;
    let d = C64::new(w0sq - omega * omega, -medium.gamma * omega);
    let wc2 = medium.cyclotron().powi(2);
    let d2 = d * d - omega * omega * wc2;
    if d.norm() < tol * w0sq {
        return Err(Error::ResonanceSingularity {
            which: "omega0^2 - omega^2",
            modulus: d.norm(),
        });
    }
    if d2.norm() < tol * w0sq * w0sq {
        return Err(Error::ResonanceSingularity {
            which: "(omega0^2 - omega^2)^2 - omega^2 omega_c^2",
            modulus: d2.norm(),
        });
    }

    let [cx, cy, cz] = medium.omega_c;
    let wp2 = medium.omega_p * medium.omega_p;
    let i = C64::i();
    let den = d2 * d;
    let w = omega;

    let diag = |cu: f64| wp2 * (d * d - w * w * cu * cu) / den;
    // Off-diagonal (u, v) with rotation axis a: w [ s*i*c_a d - c_u c_v w ].
    // s = +1/-1 picks the upper-triangle sign; the lower triangle is the
    // conjugated form, i.e. s flipped.
    let off = |s: f64, ca: f64, cu: f64, cv: f64| wp2 * w * (s * i * ca * d - cu * cv * w) / den;

    let chi = [
        [diag(cx), off(1.0, cz, cx, cy), off(-1.0, cy, cx, cz)],
        [off(-1.0, cz, cx, cy), diag(cy), off(1.0, cx, cy, cz)],
        [off(1.0, cy, cx, cz), off(-1.0, cx, cy, cz), diag(cz)],
    ];
    Ok(SusceptibilityTensor::new(chi))
}

/// Tensor shape classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Isotropic,
    Faraday,
    CottonMouton,
    General,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::Isotropic => "isotropic",
            Structure::Faraday => "faraday",
            Structure::CottonMouton => "cotton_mouton",
            Structure::General => "general",
        })
    }
}

/// 3x3 complex susceptibility, `P = eps0 chi E`. Indices are zero based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilityTensor {
    chi: [[C64; 3]; 3],
}

impl Index<(usize, usize)> for SusceptibilityTensor {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.chi[i][j]
    }
}

impl SusceptibilityTensor {
    pub fn new(chi: [[C64; 3]; 3]) -> Self {
        Self { chi }
    }

    pub fn zero() -> Self {
        Self::new([[C64::new(0.0, 0.0); 3]; 3])
    }

    pub fn isotropic(chi: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new([[chi, z, z], [z, chi, z], [z, z, chi]])
    }

    /// Optically active (Faraday) form: `chi22 = chi11`, `chi21 = conj(chi12)`,
    /// no coupling to z.
    pub fn faraday(chi11: C64, chi12: C64, chi33: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new([[chi11, chi12, z], [chi12.conj(), chi11, z], [z, z, chi33]])
    }

    /// Cotton-Mouton form (`B ∥ x`).
    pub fn cotton_mouton(chi11: C64, chi23: C64, chi33: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Self::new([[chi11, z, z], [z, chi33, chi23], [z, chi23.conj(), chi33]])
    }

    /// Hermitian tensor from its upper triangle.
    pub fn hermitian(diag: [f64; 3], chi12: C64, chi13: C64, chi23: C64) -> Self {
        let d = |x: f64| C64::new(x, 0.0);
        Self::new([
            [d(diag[0]), chi12, chi13],
            [chi12.conj(), d(diag[1]), chi23],
            [chi13.conj(), chi23.conj(), d(diag[2])],
        ])
    }

    pub fn as_array(&self) -> &[[C64; 3]; 3] {
        &self.chi
    }

    pub fn max_norm(&self) -> f64 {
        self.chi
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `max_ij |chi_ij - conj(chi_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.chi[i][j] - self.chi[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_defect() <= rel_tol * self.max_norm()
    }

    /// Classifies which off-diagonal entries vanish (relative to the largest
    /// entry, tolerance [`STRUCTURE_TOL`]).
    pub fn structure(&self) -> Structure {
        let scale = self.max_norm();
        if scale == 0.0 {
            return Structure::Isotropic;
        }
        let tol = STRUCTURE_TOL * scale;
        let zero =
            |i: usize, j: usize| self.chi[i][j].norm() <= tol && self.chi[j][i].norm() <= tol;
        let same = |a: C64, b: C64| (a - b).norm() <= tol;
        let c = &self.chi;

        if zero(0, 1)
            && zero(0, 2)
            && zero(1, 2)
            && same(c[0][0], c[1][1])
            && same(c[1][1], c[2][2])
        {
            return Structure::Isotropic;
        }
        if zero(0, 2)
            && zero(1, 2)
            && same(c[0][0], c[1][1])
            && c[0][1].re.abs() <= tol
            && same(c[1][0], c[0][1].conj())
        {
            return Structure::Faraday;
        }
        if zero(0, 1)
            && zero(0, 2)
            && same(c[1][1], c[2][2])
            && c[1][2].re.abs() <= tol
            && same(c[2][1], c[1][2].conj())
        {
            return Structure::CottonMouton;
        }
        Structure::General
    }
}

/// Free-function form of [`SusceptibilityTensor::structure`].
pub fn validate_structure(chi: &SusceptibilityTensor) -> Structure {
    chi.structure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    /// Independent route: chi = wp^2 (D I + i w [wc x])^-1 from the equation
    /// of motion of the bound electron.
    fn inverse_oracle(m: &LorentzMedium, w: f64) -> Matrix3<C64> {
        let d = C64::new(m.omega0.powi(2) - w * w, -m.gamma * w);
        let [bx, by, bz] = m.omega_c;
        let iw = C64::new(0.0, w);
        let a = Matrix3::new(
            d,
            -iw * bz,
            iw * by, //
            iw * bz,
            d,
            -iw * bx, //
            -iw * by,
            iw * bx,
            d,
        );
        a.try_inverse().unwrap() * C64::new(m.omega_p.powi(2), 0.0)
    }

    fn assert_matches_oracle(m: &LorentzMedium, w: f64) {
        let chi = m.susceptibility(w).unwrap();
        let oracle = inverse_oracle(m, w);
        let scale = chi.max_norm();
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (chi[(i, j)] - oracle[(i, j)]).norm() < 1e-12 * scale,
                    "element ({i},{j}): {} vs {}",
                    chi[(i, j)],
                    oracle[(i, j)]
                );
            }
        }
    }

    #[test]
    fn isotropic_without_field() {
        let m = LorentzMedium::scaled(1.0, [0.0; 3], 0.0).unwrap();
        let chi = m.susceptibility(0.5).unwrap();
        for i in 0..3 {
            assert_relative_eq!(chi[(i, i)].re, 4.0 / 3.0, max_relative = 1e-15);
            assert_eq!(chi[(i, i)].im, 0.0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(chi[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(chi.structure(), Structure::Isotropic);
    }

    #[test]
    fn faraday_form_for_field_along_z() {
        let m = LorentzMedium::scaled(0.84, [0.0, 0.0, 2.65], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        assert_eq!(chi[(0, 2)], C64::new(0.0, 0.0));
        assert_eq!(chi[(1, 2)], C64::new(0.0, 0.0));
        assert_eq!(chi[(0, 0)], chi[(1, 1)]);
        assert_eq!(chi[(0, 1)].re, 0.0);
        assert_eq!(chi.structure(), Structure::Faraday);
    }

    #[test]
    fn cotton_mouton_form_for_field_along_x() {
        let m = LorentzMedium::scaled(0.84, [1.3, 0.0, 0.0], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        assert_eq!(chi.structure(), Structure::CottonMouton);
    }

    #[test]
    fn zero_tensor_is_isotropic() {
        assert_eq!(
            SusceptibilityTensor::zero().structure(),
            Structure::Isotropic
        );
    }

    #[test]
    fn general_orientation_is_general() {
        let m = LorentzMedium::scaled(0.84, [2.0, 0.0, 2.65], 0.0).unwrap();
        assert_eq!(
            m.susceptibility(0.98).unwrap().structure(),
            Structure::General
        );
    }

    #[test]
    fn faraday_elements_frozen() {
        // Values from a 3x3 matrix inversion of the equation of motion.
        let m = LorentzMedium::scaled(0.84, [0.0, 0.0, 2.65], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        assert_relative_eq!(chi[(0, 0)].re, -0.004143915103889661, max_relative = 1e-12);
        assert_relative_eq!(chi[(0, 1)].im, -0.2717613011313492, max_relative = 1e-12);
        assert_matches_oracle(&m, 0.98);
    }

    #[test]
    fn matches_inverse_oracle_general_field_and_damping() {
        for (wc, g, w) in [
            ([2.0, 0.0, 2.65], 0.0, 0.98),
            ([0.3, -1.1, 0.7], 0.0, 1.2),
            ([0.3, -1.1, 0.7], 0.05, 1.2),
            ([1.5, 0.4, -0.2], 0.2, 0.6),
        ] {
            let m = LorentzMedium::scaled(0.84, wc, g).unwrap();
            assert_matches_oracle(&m, w);
        }
    }

    #[test]
    fn hermitian_without_damping() {
        let m = LorentzMedium::scaled(0.9, [0.3, -1.1, 0.7], 0.0).unwrap();
        let chi = m.susceptibility(1.37).unwrap();
        assert!(chi.hermiticity_defect() < 1e-13 * chi.max_norm());
    }

    #[test]
    fn damping_breaks_hermiticity() {
        let m = LorentzMedium::scaled(0.9, [0.3, -1.1, 0.7], 0.1).unwrap();
        let chi = m.susceptibility(1.37).unwrap();
        assert!((chi[(1, 0)] - chi[(0, 1)].conj()).norm() > 1e-3);
    }

    #[test]
    fn continuity_in_gamma() {
        let m0 = LorentzMedium::scaled(0.9, [0.3, -1.1, 0.7], 0.0).unwrap();
        let m1 = LorentzMedium { gamma: 1e-8, ..m0 };
        let a = m0.susceptibility(1.37).unwrap();
        let b = m1.susceptibility(1.37).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let rel = (a[(i, j)] - b[(i, j)]).norm() / a.max_norm();
                assert!(rel < 1e-6, "({i},{j}) rel {rel}");
            }
        }
    }

    #[test]
    fn resonance_is_an_error() {
        let m = LorentzMedium::scaled(0.84, [0.0; 3], 0.0).unwrap();
        assert!(matches!(
            m.susceptibility(1.0),
            Err(Error::ResonanceSingularity { .. })
        ));
        // second-order resonance: (1 - w^2)^2 = w^2 wc^2
        let w: f64 = 0.8;
        let wc = (1.0 - w * w) / w;
        let m = LorentzMedium::scaled(0.84, [0.0, 0.0, wc], 0.0).unwrap();
        assert!(matches!(
            m.susceptibility(w),
            Err(Error::ResonanceSingularity { .. })
        ));
        // damping removes it
        let m = LorentzMedium { gamma: 0.01, ..m };
        assert!(m.susceptibility(w).is_ok());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LorentzMedium::new(0.0, 1.0, [0.0; 3], 0.0).is_err());
        assert!(LorentzMedium::new(1.0, -1.0, [0.0; 3], 0.0).is_err());
        assert!(LorentzMedium::new(1.0, 1.0, [0.0; 3], -0.1).is_err());
        let m = LorentzMedium::scaled(1.0, [0.0; 3], 0.0).unwrap();
        assert!(m.susceptibility(0.0).is_err());
    }

    #[test]
    fn special_frequencies() {
        let m = LorentzMedium::scaled(0.84, [0.0; 3], 0.0).unwrap();
        assert_relative_eq!(m.omega_s(), (1.0f64 + 0.84 * 0.84 / 2.0).sqrt());
        assert_relative_eq!(m.omega_0p(), (1.0f64 + 0.84 * 0.84).sqrt());
    }
}
