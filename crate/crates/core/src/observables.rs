//! Integrated intensities, traces, rotation scales and regime
//! classification.

use std::fmt;

use crate::constants::C;
use crate::dispersion::faraday_modes;
use crate::error::{Error, Result};
use crate::interface::InterfaceSolution;
use crate::lorentz::SusceptibilityTensor;
use crate::pulse::{FieldGrid, PulseSpec};

/// Field at `z_max` above this fraction of the grid peak is a truncation.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Composite Simpson rule on uniform samples; an odd number of intervals
/// takes a trapezoid on the last one.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let intervals = n - 1;
    let even = intervals - intervals % 2;
    let mut s = 0.0;
    if even > 0 {
        let mut acc = values[0] + values[even];
        for (j, v) in values.iter().enumerate().take(even).skip(1) {
            acc += if j % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s = acc * h / 3.0;
    }
    if intervals % 2 == 1 {
        s += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    s
}

/// Energy in each polarization inside the medium versus time.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTrace {
    pub times: Vec<f64>,
    /// `∫ |Ex|^2 dz` over `z >= 0`.
    pub i1: Vec<f64>,
    /// `∫ |Ey|^2 dz`.
    pub i2: Vec<f64>,
    /// `∫ |E+|^2 dz`.
    pub i_plus: Vec<f64>,
    /// `∫ |E-|^2 dz`.
    pub i_minus: Vec<f64>,
}

impl IntensityTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|I1 + I2 - I+ - I-|` over the trace.
    pub fn basis_defect(&self) -> f64 {
        (0..self.len())
            .map(|j| (self.i1[j] + self.i2[j] - self.i_plus[j] - self.i_minus[j]).abs())
            .fold(0.0, f64::max)
    }

    /// Index range of samples with `lo <= t <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.times.partition_point(|&t| t < lo);
        let b = self.times.partition_point(|&t| t <= hi);
        a..b.max(a)
    }
}

/// Peak `|E|` over the grid and the largest `|E|` on its last `z` column.
fn truncation_ratio(grid: &FieldGrid) -> f64 {
    let peak = grid.peak_amplitude();
    if peak == 0.0 {
        return 0.0;
    }
    let last = grid.nz() - 1;
    (0..grid.nt())
        .map(|it| {
            let s = grid.sample(it, last);
            s.intensity().sqrt()
        })
        .fold(0.0, f64::max)
        / peak
}

/// Spatial integrals over the medium side of the grid for every time.
pub fn integrated_intensities(grid: &FieldGrid) -> Result<IntensityTrace> {
    if grid.z.start != 0.0 || grid.nz() < 3 {
        return Err(Error::InvalidParameter(
            "intensity grid must start at z = 0 with at least 3 points".into(),
        ));
    }
    let ratio = truncation_ratio(grid);
    if ratio > TRUNCATION_TOL {
        return Err(Error::GridTruncation { ratio });
    }
    let h = grid.z.step;
    let mut trace = IntensityTrace {
        times: grid.t.values(),
        i1: Vec::with_capacity(grid.nt()),
        i2: Vec::with_capacity(grid.nt()),
        i_plus: Vec::with_capacity(grid.nt()),
        i_minus: Vec::with_capacity(grid.nt()),
    };
    let nz = grid.nz();
    let mut buf = [vec![0.0; nz], vec![0.0; nz], vec![0.0; nz], vec![0.0; nz]];
    for it in 0..grid.nt() {
        for (iz, s) in grid.row(it).enumerate() {
            let (p, m) = s.circular();
            buf[0][iz] = s.ex.norm_sqr();
            buf[1][iz] = s.ey.norm_sqr();
            buf[2][iz] = p.norm_sqr();
            buf[3][iz] = m.norm_sqr();
        }
        trace.i1.push(simpson(&buf[0], h));
        trace.i2.push(simpson(&buf[1], h));
        trace.i_plus.push(simpson(&buf[2], h));
        trace.i_minus.push(simpson(&buf[3], h));
    }
    Ok(trace)
}

/// Energy left in the medium once the pulse has fully entered:
/// `sum_j |C_j|^2 |J_j|^2 / Re(n_j)` over propagating modes.
pub fn asymptotic_medium_energy(solution: &InterfaceSolution) -> f64 {
    [
        (solution.n_plus, solution.c_plus, solution.jones_plus),
        (solution.n_minus, solution.c_minus, solution.jones_minus),
    ]
    .iter()
    .filter(|(n, _, _)| n.re > 1e-12 * n.norm() && n.im.abs() <= 1e-12 * n.norm())
    .map(|(n, c, j)| c.norm_sqr() * (j[0].norm_sqr() + j[1].norm_sqr()) / n.re)
    .sum()
}

/// Time and length scales of the polarization rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationScales {
    /// `T = 2 pi / (omega |chi12|)`.
    pub period: f64,
    /// `L = c T`.
    pub length: f64,
    /// Time for the two circular subpulses to separate, `2 sigma_t / |chi12|`.
    pub splitting_time: f64,
    /// Arrival plus splitting time.
    pub transition_time: f64,
}

pub fn rotation_scales(chi12: crate::C64, omega: f64, spec: &PulseSpec) -> Result<RotationScales> {
    let a = chi12.norm();
    if a.is_nan() || a <= 0.0 {
        return Err(Error::InvalidParameter("|chi12| must be > 0".into()));
    }
    let period = 2.0 * std::f64::consts::PI / (omega * a);
    let splitting_time = 2.0 * spec.sigma_t() / a;
    Ok(RotationScales {
        period,
        length: C * period,
        splitting_time,
        transition_time: spec.arrival_time() + splitting_time,
    })
}

/// Intensities of one trace or profile.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    /// Position (for a trace) or time (for a snapshot).
    pub at: f64,
    /// Sample coordinates along the profile (times or positions).
    pub axis: Vec<f64>,
    pub ex2: Vec<f64>,
    pub ey2: Vec<f64>,
    pub plus2: Vec<f64>,
    pub minus2: Vec<f64>,
}

impl IntensityProfile {
    fn with_capacity(at: f64, axis: Vec<f64>) -> Self {
        let n = axis.len();
        Self {
            at,
            axis,
            ex2: Vec::with_capacity(n),
            ey2: Vec::with_capacity(n),
            plus2: Vec::with_capacity(n),
            minus2: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, v: [f64; 4]) {
        self.ex2.push(v[0]);
        self.ey2.push(v[1]);
        self.plus2.push(v[2]);
        self.minus2.push(v[3]);
    }
}

fn intensities(grid: &FieldGrid, it: usize, iz: usize) -> [f64; 4] {
    let s = grid.sample(it, iz);
    let (p, m) = s.circular();
    [s.ex.norm_sqr(), s.ey.norm_sqr(), p.norm_sqr(), m.norm_sqr()]
}

/// Bracketing index and weight for linear interpolation on an axis.
fn locate(what: &'static str, x: f64, start: f64, step: f64, len: usize) -> Result<(usize, f64)> {
    let end = start + (len - 1) as f64 * step;
    let slack = 1e-9 * step.abs().max(f64::MIN_POSITIVE);
    if !(x >= start - slack && x <= end + slack) {
        return Err(Error::OutOfRange {
            what,
            value: x,
            lo: start,
            hi: end,
        });
    }
    if len == 1 {
        return Ok((0, 0.0));
    }
    let u = ((x - start) / step).clamp(0.0, (len - 1) as f64);
    let i = (u.floor() as usize).min(len - 2);
    Ok((i, u - i as f64))
}

fn lerp(a: [f64; 4], b: [f64; 4], w: f64) -> [f64; 4] {
    std::array::from_fn(|j| a[j] + w * (b[j] - a[j]))
}

/// Time series of the intensities at fixed positions, interpolated
/// linearly in `z`.
pub fn fixed_position_traces(grid: &FieldGrid, positions: &[f64]) -> Result<Vec<IntensityProfile>> {
    positions
        .iter()
        .map(|&z| {
            let (iz, w) = locate("z", z, grid.z.start, grid.z.step, grid.nz())?;
            let mut p = IntensityProfile::with_capacity(z, grid.t.values());
            for it in 0..grid.nt() {
                let a = intensities(grid, it, iz);
                let v = if w > 0.0 {
                    lerp(a, intensities(grid, it, iz + 1), w)
                } else {
                    a
                };
                p.push(v);
            }
            Ok(p)
        })
        .collect()
}

/// `z` profiles of the intensities at given times, interpolated linearly
/// in `t`.
pub fn snapshots(grid: &FieldGrid, times: &[f64]) -> Result<Vec<IntensityProfile>> {
    times
        .iter()
        .map(|&t| {
            let (it, w) = locate("t", t, grid.t.start, grid.t.step, grid.nt())?;
            let mut p = IntensityProfile::with_capacity(t, grid.z.values());
            for iz in 0..grid.nz() {
                let a = intensities(grid, it, iz);
                let v = if w > 0.0 {
                    lerp(a, intensities(grid, it + 1, iz), w)
                } else {
                    a
                };
                p.push(v);
            }
            Ok(p)
        })
        .collect()
}

/// Fraction of the time-integrated energy in `Ex` at each grid position.
pub fn fluence_fraction(grid: &FieldGrid) -> Vec<f64> {
    let mut ex = vec![0.0; grid.nt()];
    let mut all = vec![0.0; grid.nt()];
    (0..grid.nz())
        .map(|iz| {
            for it in 0..grid.nt() {
                let s = grid.sample(it, iz);
                ex[it] = s.ex.norm_sqr();
                all[it] = s.intensity();
            }
            let d = simpson(&all, grid.t.step);
            if d > 0.0 {
                simpson(&ex, grid.t.step) / d
            } else {
                f64::NAN
            }
        })
        .collect()
}

/// Normalized overlap `∫|E+||E-| dz / sqrt(∫|E+|^2 dz ∫|E-|^2 dz)` of the
/// circular components at time index `it`: 1 for identical profiles, 0 for
/// disjoint subpulses.
pub fn circular_overlap(grid: &FieldGrid, it: usize) -> f64 {
    let n = grid.nz();
    let (mut cross, mut pp, mut mm) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for (iz, s) in grid.row(it).enumerate() {
        let (p, m) = s.circular();
        cross[iz] = p.norm() * m.norm();
        pp[iz] = p.norm_sqr();
        mm[iz] = m.norm_sqr();
    }
    let h = grid.z.step;
    let d = (simpson(&pp, h) * simpson(&mm, h)).sqrt();
    if d > 0.0 {
        simpson(&cross, h) / d
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Intensities exchange periodically between the linear polarizations.
    Oscillating,
    /// The pulse is long compared with the rotation period; oscillation is
    /// washed out on entrance.
    Averaged,
    /// The circular subpulses have separated.
    Split,
    /// One circular mode is evanescent.
    Filtered,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Oscillating => "oscillating",
            Regime::Averaged => "averaged",
            Regime::Split => "split",
            Regime::Filtered => "filtered",
        })
    }
}

/// Entrance visibility below which the oscillation counts as averaged out.
pub const VISIBILITY_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    pub chi12_abs: f64,
    /// `sigma_k / k0`.
    pub bandwidth_ratio: f64,
    /// `sigma_t / T`.
    pub duration_ratio: f64,
    /// Contrast surviving the spread of entrance times,
    /// `exp(-2 pi^2 sigma_t^2 / T^2)`.
    pub visibility: f64,
    /// `|chi12| / (sigma_k/k0)`; small means no splitting.
    pub splitting_margin: f64,
    /// `sigma_k / k0`; small means quasi-monochromatic.
    pub monochromatic_margin: f64,
    pub scales: Option<RotationScales>,
    pub plus_evanescent: bool,
    pub minus_evanescent: bool,
}

/// Filtered if a mode is evanescent; split once the horizon passes the
/// transition time; averaged if the entrance visibility is below one half;
/// oscillating otherwise.
pub fn classify_regime(
    chi: &SusceptibilityTensor,
    spec: &PulseSpec,
    omega: f64,
    horizon: f64,
) -> Result<RegimeReport> {
    let chi11 = chi[(0, 0)];
    let chi12 = chi[(0, 1)];
    let modes = faraday_modes(chi11, chi12, omega)?;
    let a = chi12.norm();
    let bandwidth_ratio = spec.sigma_k() / spec.k0;
    let scales = rotation_scales(chi12, omega, spec).ok();
    let (duration_ratio, visibility) = match scales {
        Some(s) => {
            let r = spec.sigma_t() / s.period;
            (r, (-2.0 * std::f64::consts::PI.powi(2) * r * r).exp())
        }
        None => (0.0, 1.0),
    };
    let plus_evanescent = modes.plus.is_non_propagating();
    let minus_evanescent = modes.minus.is_non_propagating();
    let regime = if plus_evanescent || minus_evanescent {
        Regime::Filtered
    } else if scales.is_some_and(|s| horizon > s.transition_time) {
        Regime::Split
    } else if visibility < VISIBILITY_THRESHOLD {
        Regime::Averaged
    } else {
        Regime::Oscillating
    };
    Ok(RegimeReport {
        regime,
        chi12_abs: a,
        bandwidth_ratio,
        duration_ratio,
        visibility,
        splitting_margin: a / bandwidth_ratio,
        monochromatic_margin: bandwidth_ratio,
        scales,
        plus_evanescent,
        minus_evanescent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub at: f64,
    pub value: f64,
    pub is_max: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationMetrics {
    /// Twice the mean spacing of consecutive extrema; `None` without at
    /// least two extrema.
    pub period: Option<f64>,
    /// Mean `|value|` difference between consecutive extrema.
    pub amplitude: f64,
    pub extrema: Vec<Extremum>,
}

/// Relative amplitude below which a trace counts as flat and reports no
/// extrema.
pub const NOISE_FLOOR: f64 = 1e-9;

/// Extrema of `values(axis)` inside `window`, each refined by a parabola
/// through its three neighbouring samples.
pub fn oscillation_metrics(axis: &[f64], values: &[f64], window: (f64, f64)) -> OscillationMetrics {
    assert_eq!(axis.len(), values.len());
    let mut extrema = Vec::new();
    for j in 1..values.len().saturating_sub(1) {
        if axis[j] < window.0 || axis[j] > window.1 {
            continue;
        }
        let (a, b, c) = (values[j - 1], values[j], values[j + 1]);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        if !(is_max || is_min) {
            continue;
        }
        let h = axis[j + 1] - axis[j];
        let curv = a - 2.0 * b + c;
        let (shift, value) = if curv != 0.0 {
            let s = 0.5 * (a - c) / curv;
            (s, b - 0.25 * (a - c) * s)
        } else {
            (0.0, b)
        };
        extrema.push(Extremum {
            at: axis[j] + shift * h,
            value,
            is_max,
        });
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diffs: Vec<f64> = extrema
        .windows(2)
        .map(|p| (p[1].value - p[0].value).abs())
        .collect();
    let amplitude = if diffs.is_empty() {
        0.0
    } else {
        diffs.iter().sum::<f64>() / diffs.len() as f64
    };
    if amplitude <= NOISE_FLOOR * scale {
        return OscillationMetrics {
            period: None,
            amplitude: 0.0,
            extrema: Vec::new(),
        };
    }
    let period = (extrema.len() >= 2).then(|| {
        let first = extrema[0].at;
        let last = extrema[extrema.len() - 1].at;
        2.0 * (last - first) / (extrema.len() - 1) as f64
    });
    OscillationMetrics {
        period,
        amplitude,
        extrema,
    }
}
