//! Plane-wave dispersion for normal incidence along z in a medium of
//! arbitrary susceptibility: the biquadratic `k^4 + alpha k^2 + beta = 0`,
//! selection of the two physical roots `k±`, and the polarization of each.

use std::fmt;

use crate::constants::C;
use crate::error::{Error, Result};
use crate::lorentz::SusceptibilityTensor;
use crate::C64;

/// `|1 + chi33|` below this is treated as a vanishing longitudinal response.
pub const LONGITUDINAL_TOL: f64 = 1e-12;

/// Relative splitting `|k+^2 - k-^2| / max |k^2|` below which the two modes
/// are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Relative size of `Re k` (resp. `Im k`) below which it counts as zero when
/// classifying a root.
pub const BRANCH_TOL: f64 = 1e-12;

/// `|n^2|` below this marks a root sitting on the evanescence threshold.
pub const THRESHOLD_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionCoefficients {
    pub alpha: C64,
    pub beta: C64,
}

impl DispersionCoefficients {
    /// `k^4 + alpha k^2 + beta`.
    pub fn residual(&self, k: C64) -> C64 {
        let k2 = k * k;
        k2 * k2 + self.alpha * k2 + self.beta
    }
}

/// Reduced 2x2 transverse system after eliminating `E_z`, in units of
/// `(omega/c)^2`: `(a - n^2 I) [Ex, Ey]^T = 0`.
#[derive(Debug, Clone, Copy)]
struct Transverse {
    a11: C64,
    a12: C64,
    a21: C64,
    a22: C64,
    /// `1 + chi33`; `None` when `E_z` is decoupled.
    gamma3: Option<C64>,
}

impl Transverse {
    fn new(chi: &SusceptibilityTensor) -> Result<Self> {
        let c = chi.as_array();
        let one = C64::new(1.0, 0.0);
        let gamma3 = one + c[2][2];
        let zero = C64::new(0.0, 0.0);
        let decoupled = [c[0][2], c[1][2], c[2][0], c[2][1]]
            .iter()
            .all(|&x| x == zero);
        if decoupled {
            // E_z separates from the transverse problem whatever gamma3 is
            return Ok(Self {
                a11: one + c[0][0],
                a12: c[0][1],
                a21: c[1][0],
                a22: one + c[1][1],
                gamma3: None,
            });
        }
        if gamma3.norm() < LONGITUDINAL_TOL {
            return Err(Error::DegenerateLongitudinal(gamma3.norm()));
        }
        Ok(Self {
            a11: one + c[0][0] - c[0][2] * c[2][0] / gamma3,
            a12: c[0][1] - c[0][2] * c[2][1] / gamma3,
            a21: c[1][0] - c[1][2] * c[2][0] / gamma3,
            a22: one + c[1][1] - c[1][2] * c[2][1] / gamma3,
            gamma3: Some(gamma3),
        })
    }

    fn trace(&self) -> C64 {
        self.a11 + self.a22
    }

    fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }
}

/// `alpha`, `beta` of the biquadratic, from the determinant of the reduced
/// transverse system. For Hermitian `chi` both are real.
pub fn dispersion_coefficients(
    chi: &SusceptibilityTensor,
    omega: f64,
) -> Result<DispersionCoefficients> {
    let t = Transverse::new(chi)?;
    let k0sq = (omega / C).powi(2);
    Ok(DispersionCoefficients {
        alpha: -k0sq * t.trace(),
        beta: k0sq * k0sq * t.det(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    /// Real, positive propagation constant.
    Propagating,
    /// Purely imaginary propagation constant with positive imaginary part.
    Evanescent,
    /// Propagating with attenuation (complex `k`, lossy medium).
    Attenuated,
    /// `k = 0`: the mode sits on the evanescence boundary.
    Threshold,
}

/// One physical root of the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Propagation constant (rad/m).
    pub k: C64,
    /// Refractive index, `k = (omega/c) n`.
    pub n: C64,
    /// Transverse Jones vector. Normalized to `Ex = 1` unless the mode is
    /// polarized purely along y, in which case it is `[0, 1]`.
    pub jones: [C64; 2],
    /// Longitudinal field `E_z` accompanying `jones`.
    pub ez: C64,
    pub kind: ModeKind,
}

impl Mode {
    /// `(Ey/Ex)` of the mode, `None` for a y-polarized mode.
    pub fn jones_ratio(&self) -> Option<C64> {
        (self.jones[0].norm() > 0.0).then(|| self.jones[1] / self.jones[0])
    }

    pub fn is_evanescent(&self) -> bool {
        self.kind == ModeKind::Evanescent
    }

    /// True for modes that carry no energy into the medium.
    pub fn is_non_propagating(&self) -> bool {
        matches!(self.kind, ModeKind::Evanescent | ModeKind::Threshold)
    }

    pub fn ellipse(&self) -> PolarizationEllipse {
        ellipse_from_jones(self.jones)
    }
}

/// The two physical modes `k±` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationModes {
    pub omega: f64,
    pub plus: Mode,
    pub minus: Mode,
    /// Set when the two roots coincide; the modes then carry the canonical
    /// linear basis `[1, 0]`, `[0, 1]`.
    pub degenerate: bool,
    /// Largest relative disagreement between the Jones ratios obtained from
    /// the first and second rows of the transverse system. Zero when one of
    /// the rows is ill-conditioned and was not used.
    pub row_disagreement: f64,
}

impl PropagationModes {
    pub fn k0(&self) -> f64 {
        self.omega / C
    }
}

/// Principal square root, then flipped onto the physical branch: decaying
/// (`Im k > 0`) or, if real, forward (`Re k > 0`).
fn physical_root(k2: C64) -> C64 {
    let k = k2.sqrt();
    if k.im < 0.0 || (k.im == 0.0 && k.re < 0.0) {
        -k
    } else {
        k
    }
}

fn classify(n: C64, n2: C64) -> ModeKind {
    let scale = n.norm();
    if n2.norm() <= THRESHOLD_TOL {
        ModeKind::Threshold
    } else if n.re.abs() <= BRANCH_TOL * scale && n.im > 0.0 {
        ModeKind::Evanescent
    } else if n.im.abs() <= BRANCH_TOL * scale {
        ModeKind::Propagating
    } else {
        ModeKind::Attenuated
    }
}

fn normalize_jones(v: [C64; 2]) -> [C64; 2] {
    let scale = v[0].norm().max(v[1].norm());
    if v[0].norm() > 1e-13 * scale {
        [C64::new(1.0, 0.0), v[1] / v[0]]
    } else {
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
    }
}

fn longitudinal(chi: &SusceptibilityTensor, gamma3: Option<C64>, jones: [C64; 2]) -> C64 {
    match gamma3 {
        Some(g) => -(chi[(2, 0)] * jones[0] + chi[(2, 1)] * jones[1]) / g,
        None => C64::new(0.0, 0.0),
    }
}

/// Solves the biquadratic, applies the physical-branch rule and labels the
/// root with the larger `Re k^2` as `k+`. Jones ratios come from whichever
/// row of the transverse system is better conditioned,
/// `(Ey/Ex) = (a11 - n^2) / (-a12)` or `a21 / (n^2 - a22)`; the other row
/// serves as a cross-check. When `a12` vanishes (Cotton-Mouton form) only
/// the second row is usable.
pub fn propagation_modes(chi: &SusceptibilityTensor, omega: f64) -> Result<PropagationModes> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega must be > 0, got {omega}"
        )));
    }
    let t = Transverse::new(chi)?;
    let k0 = omega / C;

    // (a11 - a22)^2 + 4 a12 a21 avoids the cancellation in tr^2 - 4 det.
    let disc = (t.a11 - t.a22) * (t.a11 - t.a22) + 4.0 * t.a12 * t.a21;
    let q = disc.sqrt();
    let tr = t.trace();
    // Roots (tr + sigma q) / 2 tagged with sigma, so the Jones rows below
    // can be formed without subtracting nearly equal numbers.
    let mut big = ((tr + q) * 0.5, 1.0);
    let mut small = ((tr - q) * 0.5, -1.0);
    if big.0.norm() < small.0.norm() {
        std::mem::swap(&mut big, &mut small);
    }
    // Vieta for the smaller root keeps it accurate near the threshold.
    if big.0.norm() > 0.0 {
        small.0 = t.det() / big.0;
    }
    let (plus, minus) = if big.0.re >= small.0.re {
        (big, small)
    } else {
        (small, big)
    };
    let (n2_plus, n2_minus) = (plus.0, minus.0);

    let scale = n2_plus.norm().max(n2_minus.norm());
    let degenerate = (n2_plus - n2_minus).norm() <= DEGENERACY_TOL * scale;

    let build = |n2: C64, jones: [C64; 2]| {
        let n = physical_root(n2);
        Mode {
            k: n * k0,
            n,
            jones,
            ez: longitudinal(chi, t.gamma3, jones),
            kind: classify(n, n2),
        }
    };

    if degenerate {
        let x = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let y = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        return Ok(PropagationModes {
            omega,
            plus: build(n2_plus, x),
            minus: build(n2_minus, y),
            degenerate,
            row_disagreement: 0.0,
        });
    }

    let mut row_disagreement: f64 = 0.0;
    let d = t.a11 - t.a22;
    let mut jones_for = |sigma: f64| {
        let row1 = [-t.a12, (d - q * sigma) * 0.5];
        let row2 = [(d + q * sigma) * 0.5, t.a21];
        let norm = |v: &[C64; 2]| v[0].norm().max(v[1].norm());
        let conditioned = |v: &[C64; 2]| norm(v) > 1e-10 * scale && v[0].norm() > 1e-10 * scale;
        if conditioned(&row1) && conditioned(&row2) {
            let r1 = row1[1] / row1[0];
            let r2 = row2[1] / row2[0];
            row_disagreement = row_disagreement.max((r1 - r2).norm() / r1.norm().max(1.0));
        }
        normalize_jones(if norm(&row1) >= norm(&row2) {
            row1
        } else {
            row2
        })
    };
    let jp = jones_for(plus.1);
    let jm = jones_for(minus.1);

    Ok(PropagationModes {
        omega,
        plus: build(n2_plus, jp),
        minus: build(n2_minus, jm),
        degenerate,
        row_disagreement,
    })
}

/// Closed form for the optically active (Faraday) tensor:
/// `k± = (omega/c) (1 + chi11 ± |chi12|)^(1/2)`, Jones ratios
/// `(Ey/Ex)± = ∓|chi12| / chi12` (`∓i` when `Im chi12 > 0`).
pub fn faraday_modes(chi11: C64, chi12: C64, omega: f64) -> Result<PropagationModes> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega must be > 0, got {omega}"
        )));
    }
    let k0 = omega / C;
    let one = C64::new(1.0, 0.0);
    let a = chi12.norm();
    let n2_plus = one + chi11 + a;
    let n2_minus = one + chi11 - a;
    let scale = n2_plus.norm().max(n2_minus.norm());
    let degenerate = (2.0 * a) <= DEGENERACY_TOL * scale;

    let (jp, jm) = if degenerate {
        ([one, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), one])
    } else {
        let u = a / chi12;
        ([one, u], [one, -u])
    };
    let build = |n2: C64, jones: [C64; 2]| {
        let n = physical_root(n2);
        Mode {
            k: n * k0,
            n,
            jones,
            ez: C64::new(0.0, 0.0),
            kind: classify(n, n2),
        }
    };
    Ok(PropagationModes {
        omega,
        plus: build(n2_plus, jp),
        minus: build(n2_minus, jm),
        degenerate,
        row_disagreement: 0.0,
    })
}

/// Group velocities `c / Re n±` for a dispersionless medium.
pub fn group_velocities(modes: &PropagationModes) -> Result<(f64, f64)> {
    let v = |m: &Mode| {
        if m.is_non_propagating() {
            Err(Error::EvanescentMode)
        } else {
            Ok(C / m.n.re)
        }
    };
    Ok((v(&modes.plus)?, v(&modes.minus)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Right,
    Left,
    Linear,
}

impl fmt::Display for Handedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Handedness::Right => "right",
            Handedness::Left => "left",
            Handedness::Linear => "linear",
        })
    }
}

/// Polarization ellipse traced by the Jones vector (not intensity
/// normalized: for `[1, ib]` the semiaxes are `1` and `|b|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationEllipse {
    pub semi_major: f64,
    pub semi_minor: f64,
    pub eccentricity: f64,
    pub handedness: Handedness,
}

pub fn ellipse_from_ratio(r: C64) -> PolarizationEllipse {
    ellipse_from_jones([C64::new(1.0, 0.0), r])
}

/// Semiaxes from the Stokes parameters of `(Ex, Ey)`:
/// `xi^2 + eta^2 = S0`, `xi eta = |S3| / 2`. `[1, -i]` is right handed.
pub fn ellipse_from_jones(j: [C64; 2]) -> PolarizationEllipse {
    let s0 = j[0].norm_sqr() + j[1].norm_sqr();
    let s1 = j[0].norm_sqr() - j[1].norm_sqr();
    let cross = j[0].conj() * j[1];
    let s2 = 2.0 * cross.re;
    let s3 = 2.0 * cross.im;
    let lin = s1.hypot(s2);
    let major2 = 0.5 * (s0 + lin);
    let minor2 = if major2 > 0.0 {
        s3 * s3 / (4.0 * major2)
    } else {
        0.0
    };
    let semi_major = major2.sqrt();
    let semi_minor = minor2.sqrt().min(semi_major);
    let eccentricity = if semi_major > 0.0 {
        (1.0 - (semi_minor / semi_major).powi(2)).max(0.0).sqrt()
    } else {
        0.0
    };
    let handedness = if s3.abs() <= 1e-12 * s0 {
        Handedness::Linear
    } else if s3 < 0.0 {
        Handedness::Right
    } else {
        Handedness::Left
    };
    PolarizationEllipse {
        semi_major,
        semi_minor,
        eccentricity,
        handedness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::LorentzMedium;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const W: f64 = 3.767e15;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Independent route to alpha, beta: the full 3x3 determinant of
    /// `(I + chi) - n^2 diag(1, 1, 0)`, expanded by cofactors, is
    /// `gamma3 (n^4 - tr n^2 + det)`. Sample it at three values of n^2 and
    /// read off the quadratic.
    fn determinant_oracle(chi: &SusceptibilityTensor) -> (C64, C64) {
        let det3 = |x: f64| {
            let mut m = *chi.as_array();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += 1.0;
                if i < 2 {
                    row[i] -= x;
                }
            }
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let (f0, f1, f2) = (det3(0.0), det3(1.0), det3(2.0));
        let lead = (f2 - 2.0 * f1 + f0) * 0.5;
        let lin = f1 - f0 - lead;
        (lin / lead, f0 / lead)
    }

    #[test]
    fn vacuum_coefficients() {
        let d = dispersion_coefficients(&SusceptibilityTensor::zero(), W).unwrap();
        let k0sq = (W / C).powi(2);
        assert_relative_eq!(d.alpha.re, -2.0 * k0sq, max_relative = 1e-15);
        assert_relative_eq!(d.beta.re, k0sq * k0sq, max_relative = 1e-15);
    }

    #[test]
    fn faraday_coefficients_by_vieta() {
        let chi = SusceptibilityTensor::faraday(c(0.3, 0.0), c(0.0, 0.2), c(0.1, 0.0));
        let d = dispersion_coefficients(&chi, W).unwrap();
        let k0sq = (W / C).powi(2);
        assert_relative_eq!(d.alpha.re, -2.0 * k0sq * 1.3, max_relative = 1e-14);
        assert_relative_eq!(d.beta.re, k0sq * k0sq * (1.69 - 0.04), max_relative = 1e-14);
    }

    #[test]
    fn tilted_field_point_against_determinant_oracle() {
        let m = LorentzMedium::scaled(0.84, [2.0, 0.0, 2.65], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        let d = dispersion_coefficients(&chi, C).unwrap(); // k0 = 1
        let (alpha, beta) = determinant_oracle(&chi);
        assert!((d.alpha - alpha).norm() < 1e-12 * alpha.norm());
        assert!((d.beta - beta).norm() < 1e-12 * beta.norm());
        // frozen from an independent numpy evaluation
        assert_relative_eq!(d.alpha.re, -2.5155580565337177, max_relative = 1e-11);
        assert_relative_eq!(d.beta.re, 1.4438907874262916, max_relative = 1e-11);
        assert!(d.alpha.im.abs() < 1e-14 && d.beta.im.abs() < 1e-14);
    }

    #[test]
    fn damped_general_tensor_against_determinant_oracle() {
        let m = LorentzMedium::scaled(0.84, [0.4, -1.2, 0.9], 0.07).unwrap();
        let chi = m.susceptibility(1.1).unwrap();
        let d = dispersion_coefficients(&chi, C).unwrap();
        let (alpha, beta) = determinant_oracle(&chi);
        assert!((d.alpha - alpha).norm() < 1e-11 * alpha.norm());
        assert!((d.beta - beta).norm() < 1e-11 * beta.norm());
    }

    #[test]
    fn degenerate_longitudinal() {
        let chi = SusceptibilityTensor::hermitian(
            [0.0, 0.0, -1.0],
            c(0.0, 0.1),
            c(0.1, 0.0),
            c(0.0, 0.0),
        );
        assert!(matches!(
            dispersion_coefficients(&chi, W),
            Err(Error::DegenerateLongitudinal(_))
        ));
        // a decoupled E_z does not care
        let chi = SusceptibilityTensor::faraday(c(0.0, 0.0), c(0.0, 0.1), c(-1.0, 0.0));
        let m = propagation_modes(&chi, W).unwrap();
        assert_relative_eq!(m.plus.n.re, 1.1f64.sqrt(), max_relative = 1e-15);
        assert_eq!(m.plus.ez, c(0.0, 0.0));
    }

    #[test]
    fn small_faraday_indices() {
        let chi = SusceptibilityTensor::faraday(c(0.0, 0.0), c(0.0, 2e-4), c(0.0, 0.0));
        let m = propagation_modes(&chi, W).unwrap();
        assert_relative_eq!(m.plus.n.re, 1.0002f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(m.minus.n.re, 0.9998f64.sqrt(), max_relative = 1e-14);
        assert!((m.plus.n.re - 1.0001000).abs() < 1e-7);
        assert!((m.minus.n.re - 0.9998999).abs() < 1e-7);
        assert_eq!(m.plus.jones_ratio().unwrap(), c(0.0, -1.0));
        assert_eq!(m.minus.jones_ratio().unwrap(), c(0.0, 1.0));
        assert_eq!(m.plus.kind, ModeKind::Propagating);
        assert!(!m.degenerate);
    }

    #[test]
    fn strong_faraday_makes_minus_evanescent() {
        let chi = SusceptibilityTensor::faraday(c(0.0, 0.0), c(0.0, 1.2), c(0.0, 0.0));
        let m = propagation_modes(&chi, W).unwrap();
        let k0 = W / C;
        assert_relative_eq!(m.plus.k.re, k0 * 2.2f64.sqrt(), max_relative = 1e-14);
        assert_eq!(m.minus.k.re, 0.0);
        assert_relative_eq!(m.minus.k.im, k0 * 0.2f64.sqrt(), max_relative = 1e-13);
        assert!(m.minus.is_evanescent());
        assert!(!m.plus.is_evanescent());
    }

    #[test]
    fn vacuum_is_degenerate_with_linear_basis() {
        let m = propagation_modes(&SusceptibilityTensor::zero(), W).unwrap();
        assert!(m.degenerate);
        assert_eq!(m.plus.n, c(1.0, 0.0));
        assert_eq!(m.minus.n, c(1.0, 0.0));
        assert_eq!(m.plus.jones, [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(m.minus.jones, [c(0.0, 0.0), c(1.0, 0.0)]);
        let f = faraday_modes(c(0.0, 0.0), c(0.0, 0.0), W).unwrap();
        assert!(f.degenerate);
        assert_eq!(f.plus.k, c(W / C, 0.0));
    }

    #[test]
    fn negative_im_chi12_swaps_handedness() {
        let chi = SusceptibilityTensor::faraday(c(0.1, 0.0), c(0.0, -0.05), c(0.0, 0.0));
        let m = propagation_modes(&chi, W).unwrap();
        assert!((m.plus.jones_ratio().unwrap() - c(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(m.plus.ellipse().handedness, Handedness::Left);
    }

    #[test]
    fn threshold_roots_on_evanescence_boundary() {
        // 1 + chi11 = -|chi12| zeroes k+; 1 + chi11 = +|chi12| zeroes k-.
        let f = faraday_modes(c(-1.5, 0.0), c(0.0, 0.5), W).unwrap();
        assert_eq!(f.plus.k, c(0.0, 0.0));
        assert_eq!(f.plus.kind, ModeKind::Threshold);
        assert!(f.minus.is_evanescent());
        let f = faraday_modes(c(-0.5, 0.0), c(0.0, 0.5), W).unwrap();
        assert_eq!(f.minus.kind, ModeKind::Threshold);
        assert_eq!(f.plus.kind, ModeKind::Propagating);
    }

    #[test]
    fn closed_form_matches_general_solver() {
        for (x11, x12) in [
            (0.0, 2e-4),
            (0.0, 0.08),
            (0.0, 1.2),
            (0.3, -0.7),
            (-0.9, 0.4),
        ] {
            let chi = SusceptibilityTensor::faraday(c(x11, 0.0), c(0.0, x12), c(0.2, 0.0));
            let g = propagation_modes(&chi, W).unwrap();
            let f = faraday_modes(c(x11, 0.0), c(0.0, x12), W).unwrap();
            for (a, b) in [(g.plus, f.plus), (g.minus, f.minus)] {
                assert!((a.k - b.k).norm() <= 1e-12 * b.k.norm());
                assert!((a.jones[1] - b.jones[1]).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn cotton_mouton_modes_are_linear() {
        let m = LorentzMedium::scaled(0.84, [1.3, 0.0, 0.0], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        let modes = propagation_modes(&chi, C).unwrap();
        for mode in [modes.plus, modes.minus] {
            let e = mode.ellipse();
            assert_eq!(e.handedness, Handedness::Linear);
            assert_relative_eq!(e.eccentricity, 1.0);
        }
        // one mode along x (ordinary), one along y
        let along_x = |m: &Mode| m.jones[1].norm() < 1e-12;
        assert!(along_x(&modes.plus) ^ along_x(&modes.minus));
    }

    #[test]
    fn row_cross_check_on_general_tensor() {
        let m = LorentzMedium::scaled(0.84, [2.0, 0.0, 2.65], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        let modes = propagation_modes(&chi, C).unwrap();
        assert!(modes.row_disagreement < 1e-8, "{}", modes.row_disagreement);
    }

    #[test]
    fn longitudinal_component_general_tensor() {
        let m = LorentzMedium::scaled(0.84, [2.0, 0.0, 2.65], 0.0).unwrap();
        let chi = m.susceptibility(0.98).unwrap();
        let modes = propagation_modes(&chi, C).unwrap();
        // third row of (I + chi) E = n^2 (Ex, Ey, 0)
        for mode in [modes.plus, modes.minus] {
            let e = [mode.jones[0], mode.jones[1], mode.ez];
            let row3 = chi[(2, 0)] * e[0] + chi[(2, 1)] * e[1] + (1.0 + chi[(2, 2)]) * e[2];
            assert!(row3.norm() < 1e-13);
        }
    }

    #[test]
    fn group_velocity_values() {
        let chi = SusceptibilityTensor::faraday(c(0.0, 0.0), c(0.0, 0.08), c(0.0, 0.0));
        let m = propagation_modes(&chi, W).unwrap();
        let (vp, vm) = group_velocities(&m).unwrap();
        assert_relative_eq!(vp / C, 1.0 / 1.08f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(vm / C, 1.0 / 0.92f64.sqrt(), max_relative = 1e-14);
        assert!((vp / C - 0.96225).abs() < 1e-5);
        assert!((vm / C - 1.04257).abs() < 1e-5);

        let vac = propagation_modes(&SusceptibilityTensor::zero(), W).unwrap();
        assert_eq!(group_velocities(&vac).unwrap(), (C, C));

        let chi = SusceptibilityTensor::faraday(c(0.0, 0.0), c(0.0, 1.2), c(0.0, 0.0));
        let m = propagation_modes(&chi, W).unwrap();
        assert_eq!(group_velocities(&m), Err(Error::EvanescentMode));
    }

    #[test]
    fn splitting_time_from_group_velocities() {
        // the modes separate by 2 sigma_z after 2 sigma_t / |chi12|
        let sigma_z = 30e-6;
        let x = 1e-4;
        let chi = SusceptibilityTensor::faraday(c(0.0, 0.0), c(0.0, x), c(0.0, 0.0));
        let (vp, vm) = group_velocities(&propagation_modes(&chi, W).unwrap()).unwrap();
        let split = 2.0 * sigma_z / (vp - vm).abs();
        assert_relative_eq!(split, 2.0 * sigma_z / C / x, max_relative = 1e-6);
    }

    #[test]
    fn ellipse_examples() {
        let e = ellipse_from_ratio(c(0.0, -1.0));
        assert!(e.eccentricity < 1e-7);
        assert_eq!(e.handedness, Handedness::Right);
        let e = ellipse_from_ratio(c(0.0, 0.0));
        assert_eq!(e.eccentricity, 1.0);
        assert_eq!(e.handedness, Handedness::Linear);
        let e = ellipse_from_ratio(c(0.0, 0.5));
        assert_relative_eq!(e.semi_major, 1.0, max_relative = 1e-15);
        assert_relative_eq!(e.semi_minor, 0.5, max_relative = 1e-15);
        assert_relative_eq!(e.eccentricity, 0.75f64.sqrt(), max_relative = 1e-15);
        assert_eq!(e.handedness, Handedness::Left);
        let e = ellipse_from_ratio(c(0.0, 2.0));
        assert_relative_eq!(e.semi_major, 2.0, max_relative = 1e-15);
        assert_relative_eq!(e.semi_minor, 1.0, max_relative = 1e-15);
        let e = ellipse_from_ratio(c(0.7, 0.0));
        assert_eq!(e.eccentricity, 1.0);
    }

    fn unit_disk() -> impl Strategy<Value = C64> {
        (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn quartic_residual_hermitian(
            d in prop::array::uniform3(-1.0f64..1.0),
            o12 in unit_disk(), o13 in unit_disk(), o23 in unit_disk(),
        ) {
            let chi = SusceptibilityTensor::hermitian(d, o12, o13, o23);
            let Ok(m) = propagation_modes(&chi, W) else { return Ok(()) };
            prop_assume!(!m.degenerate);
            let coef = dispersion_coefficients(&chi, W).unwrap();
            prop_assert!(coef.alpha.im.abs() <= 1e-12 * coef.alpha.norm().max(coef.beta.norm().sqrt()));
            let size = coef.alpha.norm().max(coef.beta.norm().sqrt());
            for mode in [m.plus, m.minus] {
                let r = coef.residual(mode.k).norm() / (size * size);
                prop_assert!(r < 1e-10, "residual {r}");
                let n2 = mode.n * mode.n;
                if n2.re > 0.0 && n2.im.abs() < 1e-12 * n2.norm() {
                    prop_assert!(mode.k.re > 0.0 && mode.k.im.abs() <= 1e-12 * mode.k.norm());
                }
                prop_assert!(mode.k.im >= 0.0);
            }
            prop_assert!(m.plus.n.powi(2).re >= m.minus.n.powi(2).re);
        }

        #[test]
        fn closed_form_equivalence(x11 in -2.0f64..2.0, x12 in -2.0f64..2.0, x33 in -0.5f64..2.0) {
            prop_assume!(x12.abs() > 1e-6);
            let chi = SusceptibilityTensor::faraday(c(x11, 0.0), c(0.0, x12), c(x33, 0.0));
            let g = propagation_modes(&chi, W).unwrap();
            let f = faraday_modes(c(x11, 0.0), c(0.0, x12), W).unwrap();
            for (a, b) in [(g.plus, f.plus), (g.minus, f.minus)] {
                // compared through n^2: sqrt amplifies round-off near threshold
                let k0 = W / C;
                let (na, nb) = (a.k * a.k / (k0 * k0), b.k * b.k / (k0 * k0));
                prop_assert!((na - nb).norm() <= 1e-12 * nb.norm().max(1.0), "{} vs {}", a.k, b.k);
                prop_assert!(a.k.re >= 0.0 && a.k.im >= 0.0);
                prop_assert!((a.jones[1] - b.jones[1]).norm() <= 1e-12);
            }
            // orthogonal circular pair
            let dot = f.plus.jones[0] * f.minus.jones[0].conj() + f.plus.jones[1] * f.minus.jones[1].conj();
            prop_assert!(dot.norm() < 1e-15);
        }

        #[test]
        fn eccentricity_in_unit_interval(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            let e = ellipse_from_ratio(c(re, im));
            prop_assert!((0.0..=1.0).contains(&e.eccentricity));
            prop_assert!(e.semi_minor <= e.semi_major);
        }
    }
}
