//! Magneto-optic filter design in the Faraday configuration: where in the
//! (frequency, field) plane one circular mode is evanescent while the other
//! propagates.
//!
//! Frequencies are in the same unit as `medium.omega0`; the natural choice
//! is `omega0 = 1`.

use std::fmt;

use crate::constants::tesla_from_cyclotron;
use crate::dispersion::{propagation_modes, ModeKind, PolarizationEllipse};
use crate::error::{Error, Result};
use crate::interface::{match_interface, surviving_transmittance};
use crate::lorentz::LorentzMedium;
use crate::C64;

/// Field values (as cyclotron frequencies) at which `k+` or `k-` vanishes
/// for a given frequency. Signed; only nonnegative parts bound regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCurves {
    pub omega: f64,
    /// `(-omega_p^2 - (omega0^2 - omega^2)) / omega`
    pub w1: f64,
    /// `(omega0^2 - omega^2) / omega`
    pub w2: f64,
    /// `(omega_p^2 + (omega0^2 - omega^2)) / omega`
    pub w3: f64,
    /// `-(omega0^2 - omega^2) / omega`
    pub w4: f64,
}

impl BoundaryCurves {
    pub fn as_array(&self) -> [f64; 4] {
        [self.w1, self.w2, self.w3, self.w4]
    }
}

pub fn boundary_curves(medium: &LorentzMedium, omega: f64) -> BoundaryCurves {
    let d = medium.omega0 * medium.omega0 - omega * omega;
    let wp2 = medium.omega_p * medium.omega_p;
    BoundaryCurves {
        omega,
        w1: (-wp2 - d) / omega,
        w2: d / omega,
        w3: (wp2 + d) / omega,
        w4: -d / omega,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterRegion {
    BothPropagating,
    /// `k-` evanescent, `k+` real.
    Filtering,
    /// Both modes evanescent.
    TotalReflection,
    /// The susceptibility is singular at this point.
    Resonant,
}

impl fmt::Display for FilterRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterRegion::BothPropagating => "both_propagating",
            FilterRegion::Filtering => "filtering",
            FilterRegion::TotalReflection => "total_reflection",
            FilterRegion::Resonant => "resonant",
        })
    }
}

/// `(1 + Re chi11 + |chi12|, 1 + Re chi11 - |chi12|)`, the signs of
/// `k+^2` and `k-^2`.
pub fn mode_signs(medium: &LorentzMedium, omega: f64, omega_cz: f64) -> Result<(f64, f64)> {
    let chi = medium.with_faraday_field(omega_cz).susceptibility(omega)?;
    let base = 1.0 + chi[(0, 0)].re;
    let a = chi[(0, 1)].norm();
    Ok((base + a, base - a))
}

pub fn classify_point(medium: &LorentzMedium, omega: f64, omega_cz: f64) -> Result<FilterRegion> {
    let (sp, sm) = mode_signs(medium, omega, omega_cz)?;
    Ok(match (sp > 0.0, sm > 0.0) {
        (true, true) => FilterRegion::BothPropagating,
        (true, false) => FilterRegion::Filtering,
        _ => FilterRegion::TotalReflection,
    })
}

/// Frequency bands separated by `omega0`, `omega_S` and `omega_0p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subregion {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for Subregion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subregion::I => "I",
            Subregion::II => "II",
            Subregion::III => "III",
            Subregion::IV => "IV",
        })
    }
}

/// Root of a monotone function on `[a, b]` by bisection to the last bit.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return if f(a).abs() <= f(b).abs() { a } else { b };
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
}

/// Frequencies at which the boundary curves cross:
/// `w2 = w4` (`omega0`), `w3 = w4` (`omega_S`), `w1 = w3` (`omega_0p`).
pub fn curve_crossings(medium: &LorentzMedium) -> [f64; 3] {
    let lo = 1e-6 * medium.omega0;
    let hi = 10.0 * medium.omega_0p();
    let c = |w: f64| boundary_curves(medium, w);
    [
        bisect(|w| c(w).w2 - c(w).w4, lo, hi),
        bisect(|w| c(w).w3 - c(w).w4, lo, hi),
        bisect(|w| c(w).w1 - c(w).w3, lo, hi),
    ]
}

pub fn subregion(crossings: &[f64; 3], omega: f64) -> Subregion {
    if omega < crossings[0] {
        Subregion::I
    } else if omega < crossings[1] {
        Subregion::II
    } else if omega < crossings[2] {
        Subregion::III
    } else {
        Subregion::IV
    }
}

/// Open interval of `|omega_cz|` with filtering at this frequency, from the
/// boundary curves; `None` if empty.
pub fn filtering_interval(medium: &LorentzMedium, omega: f64) -> Option<(f64, f64)> {
    let c = boundary_curves(medium, omega);
    let (lo, hi) = if omega < medium.omega0 {
        (c.w2, c.w3)
    } else if omega < medium.omega_s() {
        (c.w4, c.w3)
    } else if omega < medium.omega_0p() {
        (c.w3, c.w4)
    } else {
        (c.w1, c.w4)
    };
    let lo = lo.max(0.0);
    (hi - lo > 1e-12 * hi.abs().max(medium.omega0)).then_some((lo, hi))
}

/// Weakest Faraday field giving filtering at `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimumField {
    /// Lower end of the filtering interval in `|omega_cz|`; infinite when
    /// filtering is unattainable.
    pub omega_cz: f64,
    pub interval: Option<(f64, f64)>,
}

impl MinimumField {
    /// Field in tesla for a resonance at `omega0_si` rad/s (the medium is
    /// taken to be in units of `omega0`).
    pub fn tesla(&self, omega0_si: f64) -> f64 {
        tesla_from_cyclotron(self.omega_cz * omega0_si)
    }
}

pub fn min_field_for_filtering(medium: &LorentzMedium, omega: f64) -> MinimumField {
    let interval = filtering_interval(medium, omega);
    MinimumField {
        omega_cz: interval.map_or(f64::INFINITY, |(lo, _)| lo),
        interval,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurvivingMode {
    /// `(Ey/Ex)+ = -i`.
    PlusIsRight,
    /// `(Ey/Ex)+ = +i`.
    PlusIsLeft,
}

impl fmt::Display for SurvivingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurvivingMode::PlusIsRight => "plus_is_right",
            SurvivingMode::PlusIsLeft => "plus_is_left",
        })
    }
}

/// Polarization of the propagating mode in the filtering regime:
/// `(Ey/Ex)+ = +i` below `omega_S`, `-i` above (for `omega_cz > 0`; a
/// reversed field reverses it). Cross-checked against the mode solver.
pub fn surviving_mode_handedness(
    medium: &LorentzMedium,
    omega: f64,
    omega_cz: f64,
) -> Result<SurvivingMode> {
    if classify_point(medium, omega, omega_cz)? != FilterRegion::Filtering {
        return Err(Error::NotFilteringRegime);
    }
    let ws = medium.omega_s();
    if (omega - ws).abs() <= 1e-12 * ws {
        return Err(Error::HandednessBoundary);
    }
    let mut left = omega < ws;
    if omega_cz < 0.0 {
        left = !left;
    }
    let rule = if left {
        SurvivingMode::PlusIsLeft
    } else {
        SurvivingMode::PlusIsRight
    };

    let chi = medium.with_faraday_field(omega_cz).susceptibility(omega)?;
    let modes = propagation_modes(&chi, omega)?;
    let expect = if left {
        C64::new(0.0, 1.0)
    } else {
        C64::new(0.0, -1.0)
    };
    let r = modes.plus.jones_ratio();
    if modes.degenerate || r.is_none_or(|r| (r - expect).norm() > 1e-8) {
        return Err(Error::InconsistentHandedness { omega, omega_cz });
    }
    Ok(rule)
}

/// `|omega^2 - omega0^2| / (omega gamma)` against a required factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionCheck {
    pub margin: f64,
    pub negligible: bool,
}

pub const ABSORPTION_FACTOR: f64 = 10.0;

pub fn absorption_negligible(medium: &LorentzMedium, omega: f64, factor: f64) -> AbsorptionCheck {
    let margin = if medium.gamma == 0.0 {
        f64::INFINITY
    } else {
        (omega * omega - medium.omega0 * medium.omega0).abs() / (omega * medium.gamma)
    };
    AbsorptionCheck {
        margin,
        negligible: margin > factor,
    }
}

/// Everything reported for one point of the Faraday parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellReport {
    pub omega: f64,
    pub omega_cz: f64,
    pub region: FilterRegion,
    /// `(Ey/Ex)+`; `None` when the modes are degenerate or `chi` singular.
    pub r_plus: Option<C64>,
    pub e_plus: f64,
    pub e_minus: f64,
    /// `omega0 / (c Im k-)`, filtering cells only.
    pub penetration: Option<f64>,
    /// `Re(n+) |C+|^2`, filtering cells only.
    pub transmittance: Option<f64>,
}

pub fn cell_report(medium: &LorentzMedium, omega: f64, omega_cz: f64) -> CellReport {
    let mut rep = CellReport {
        omega,
        omega_cz,
        region: FilterRegion::Resonant,
        r_plus: None,
        e_plus: f64::NAN,
        e_minus: f64::NAN,
        penetration: None,
        transmittance: None,
    };
    let Ok(region) = classify_point(medium, omega, omega_cz) else {
        return rep;
    };
    rep.region = region;
    let Ok(modes) = medium
        .with_faraday_field(omega_cz)
        .susceptibility(omega)
        .and_then(|chi| propagation_modes(&chi, omega))
    else {
        return rep;
    };
    rep.e_plus = modes.plus.ellipse().eccentricity;
    rep.e_minus = modes.minus.ellipse().eccentricity;
    if !modes.degenerate {
        rep.r_plus = modes.plus.jones_ratio();
    }
    if region == FilterRegion::Filtering && modes.minus.kind == ModeKind::Evanescent {
        rep.penetration = Some(medium.omega0 / (omega * modes.minus.n.im));
        rep.transmittance = match_interface(omega, &modes)
            .ok()
            .and_then(|s| surviving_transmittance(&s).ok());
    }
    rep
}

/// Classification over a rectangular grid, with the boundary curves and
/// band labels along the frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRegionMap {
    pub omegas: Vec<f64>,
    pub omega_czs: Vec<f64>,
    /// Row-major: `cells[i * omega_czs.len() + j]` is `(omegas[i], omega_czs[j])`.
    pub cells: Vec<FilterRegion>,
    pub curves: Vec<BoundaryCurves>,
    pub subregions: Vec<Subregion>,
    pub crossings: [f64; 3],
}

impl FilterRegionMap {
    pub fn cell(&self, i: usize, j: usize) -> FilterRegion {
        self.cells[i * self.omega_czs.len() + j]
    }

    pub fn count(&self, region: FilterRegion) -> usize {
        self.cells.iter().filter(|&&c| c == region).count()
    }
}

/// `n` evenly spaced values covering `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn region_map(medium: &LorentzMedium, omegas: &[f64], omega_czs: &[f64]) -> FilterRegionMap {
    use rayon::prelude::*;
    let crossings = curve_crossings(medium);
    let cells: Vec<FilterRegion> = omegas
        .par_iter()
        .flat_map_iter(|&w| {
            omega_czs
                .iter()
                .map(move |&wc| classify_point(medium, w, wc).unwrap_or(FilterRegion::Resonant))
        })
        .collect();
    FilterRegionMap {
        omegas: omegas.to_vec(),
        omega_czs: omega_czs.to_vec(),
        cells,
        curves: omegas.iter().map(|&w| boundary_curves(medium, w)).collect(),
        subregions: omegas.iter().map(|&w| subregion(&crossings, w)).collect(),
        crossings,
    }
}

/// Mode ellipses along a sweep of the transverse field component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EccentricityPoint {
    pub omega_cx: f64,
    pub ratio_plus: Option<C64>,
    pub ratio_minus: Option<C64>,
    pub plus: PolarizationEllipse,
    pub minus: PolarizationEllipse,
    /// Largest `|Re r| / |r|` over the two ratios.
    pub real_fraction: f64,
}

pub fn eccentricity_scan(
    medium: &LorentzMedium,
    omega: f64,
    omega_cxs: &[f64],
    omega_cy: f64,
    omega_cz: f64,
) -> Result<Vec<EccentricityPoint>> {
    omega_cxs
        .iter()
        .map(|&wx| {
            let m = LorentzMedium {
                omega_c: [wx, omega_cy, omega_cz],
                ..*medium
            };
            let modes = propagation_modes(&m.susceptibility(omega)?, omega)?;
            let (rp, rm) = (modes.plus.jones_ratio(), modes.minus.jones_ratio());
            let frac = |r: Option<C64>| {
                r.map_or(0.0, |r| {
                    if r.norm() > 0.0 {
                        r.re.abs() / r.norm()
                    } else {
                        0.0
                    }
                })
            };
            Ok(EccentricityPoint {
                omega_cx: wx,
                ratio_plus: rp,
                ratio_minus: rm,
                plus: modes.plus.ellipse(),
                minus: modes.minus.ellipse(),
                real_fraction: frac(rp).max(frac(rm)),
            })
        })
        .collect()
}
