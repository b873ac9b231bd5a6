//! Time-dependent field of a Gaussian pulse hitting the medium, built by
//! spectral quadrature over the harmonic solutions.
//!
//! With a `k`-independent susceptibility every harmonic solution is a sum
//! of plane waves `coef * exp(i n k z)`, so each term of the field is
//!
//! ```text
//! (2 pi)^(-1/2) sqrt(sigma_z) (2/pi)^(1/4) exp(i k0 x) ∫ exp(-q^2 sigma_z^2) exp(i q x) dq
//! ```
//!
//! with `x = n z - z0 - c t` and `k = k0 + q`. The `q` integral is done on
//! a composite rule over `|q| <= W` and refined by node doubling.

use rayon::prelude::*;

use crate::constants::C;
use crate::error::{Error, Result};
use crate::interface::InterfaceSolution;
use crate::quadrature::{GaussianFourier, QuadratureOptions};
use crate::C64;

/// Gaussian pulse launched from `z0 < 0` towards the medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Central wavenumber (rad/m).
    pub k0: f64,
    /// Spatial width (m); `|A(k)|^2` has standard deviation `1 / (2 sigma_z)`.
    pub sigma_z: f64,
    /// Initial centre (m).
    pub z0: f64,
}

/// Largest `sigma_k / k0` accepted as quasi-monochromatic.
pub const MAX_RELATIVE_BANDWIDTH: f64 = 0.05;

impl PulseSpec {
    pub fn new(k0: f64, sigma_z: f64, z0: f64) -> Result<Self> {
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::InvalidParameter(format!("k0 must be > 0, got {k0}")));
        }
        if !(sigma_z > 0.0 && sigma_z.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma_z must be > 0, got {sigma_z}"
            )));
        }
        if z0.is_nan() || z0 >= 0.0 {
            return Err(Error::InvalidParameter(format!("z0 must be < 0, got {z0}")));
        }
        let spec = Self { k0, sigma_z, z0 };
        let rel = spec.sigma_k() / k0;
        if rel > MAX_RELATIVE_BANDWIDTH {
            return Err(Error::OutOfRange {
                what: "sigma_k/k0",
                value: rel,
                lo: 0.0,
                hi: MAX_RELATIVE_BANDWIDTH,
            });
        }
        Ok(spec)
    }

    /// From vacuum wavelength (m), duration `sigma_t = sigma_z / c` (s) and
    /// starting point (m).
    pub fn from_wavelength(lambda0: f64, sigma_t: f64, z0: f64) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI / lambda0, sigma_t * C, z0)
    }

    pub fn sigma_t(&self) -> f64 {
        self.sigma_z / C
    }

    pub fn sigma_k(&self) -> f64 {
        0.5 / self.sigma_z
    }

    pub fn omega0(&self) -> f64 {
        C * self.k0
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.k0
    }

    /// Time at which the pulse centre reaches `z = 0`.
    pub fn arrival_time(&self) -> f64 {
        -self.z0 / C
    }

    /// `(2 pi)^(-1/2) sqrt(sigma_z) (2/pi)^(1/4)`.
    fn prefactor(&self) -> f64 {
        use std::f64::consts::PI;
        (2.0 * PI).powf(-0.5) * self.sigma_z.sqrt() * (2.0 / PI).powf(0.25)
    }

    /// Peak `|E|` of the free pulse.
    pub fn peak_amplitude(&self) -> f64 {
        self.prefactor() * std::f64::consts::PI.sqrt() / self.sigma_z
    }
}

/// `A(k) = sqrt(sigma_z) (2/pi)^(1/4) exp(-(k - k0)^2 sigma_z^2) exp(-i k z0)`,
/// normalized to `∫ |A|^2 dk = 1`.
pub fn spectral_amplitude(spec: &PulseSpec, k: f64) -> C64 {
    let g = spec.sigma_z.sqrt()
        * (2.0 / std::f64::consts::PI).powf(0.25)
        * (-((k - spec.k0) * spec.sigma_z).powi(2)).exp();
    C64::from_polar(g, -k * spec.z0)
}

/// Field components at one point of space-time (analytic signal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub z: f64,
    pub t: f64,
    pub ex: C64,
    pub ey: C64,
}

impl FieldSample {
    pub fn intensity(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    pub fn circular(&self) -> (C64, C64) {
        circular_components(self)
    }
}

/// `E± = (Ex ± i Ey) / sqrt(2)`; `(1, -i)` is pure `E+`.
pub fn circular_components(sample: &FieldSample) -> (C64, C64) {
    let i = C64::new(0.0, 1.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (
        (sample.ex + i * sample.ey) * s,
        (sample.ex - i * sample.ey) * s,
    )
}

/// Stationary solution `F_k(z)` for unit incident amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicProfile {
    pub solution: InterfaceSolution,
}

pub fn harmonic_profile(k: f64, interface: &InterfaceSolution) -> HarmonicProfile {
    HarmonicProfile {
        solution: interface.at(k),
    }
}

impl HarmonicProfile {
    pub fn k(&self) -> f64 {
        self.solution.k
    }

    pub fn eval(&self, z: f64) -> [C64; 2] {
        let s = &self.solution;
        let i = C64::new(0.0, 1.0);
        if z < 0.0 {
            let fwd = C64::from_polar(1.0, s.k * z);
            let back = fwd.conj();
            [fwd + s.r11 * back, s.r21 * back]
        } else {
            let ep = s.c_plus * (i * s.k_plus * z).exp();
            let em = s.c_minus * (i * s.k_minus * z).exp();
            [
                ep * s.jones_plus[0] + em * s.jones_minus[0],
                ep * s.jones_plus[1] + em * s.jones_minus[1],
            ]
        }
    }
}

/// Evenly spaced samples `start + i * step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformAxis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformAxis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if len == 0 || !start.is_finite() || !(step.is_finite() && (step > 0.0 || len == 1)) {
            return Err(Error::InvalidParameter(format!(
                "bad axis: start {start}, step {step}, len {len}"
            )));
        }
        Ok(Self { start, step, len })
    }

    /// Covers `[start, end]` with spacing at most `max_step`.
    pub fn spanning(start: f64, end: f64, max_step: f64) -> Result<Self> {
        if start.is_nan() || end.is_nan() || end < start || max_step.is_nan() || max_step <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bad span [{start}, {end}] with step {max_step}"
            )));
        }
        if end == start {
            return Self::new(start, max_step, 1);
        }
        let intervals = ((end - start) / max_step).ceil().max(1.0) as usize;
        Self::new(start, (end - start) / intervals as f64, intervals + 1)
    }

    /// A single point.
    pub fn point(x: f64) -> Self {
        Self {
            start: x,
            step: 1.0,
            len: 1,
        }
    }

    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.at(i)).collect()
    }
}

/// Space-time sampling for [`synthesize_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGridRequest {
    pub z: UniformAxis,
    pub t: UniformAxis,
}

/// Number of penetration lengths sampled when no mode propagates.
const EVANESCENT_DEPTHS: f64 = 50.0;

impl FieldGridRequest {
    /// `z` step needed to resolve both the envelope and the beat between the
    /// two modes: `min(sigma_z / max Re n, 2 pi / (k0 |n+ - n-|)) / 20`.
    pub fn max_dz(spec: &PulseSpec, interface: &InterfaceSolution) -> f64 {
        let n_max = interface.n_plus.re.max(interface.n_minus.re).max(1e-300);
        let mut limit = spec.sigma_z / n_max;
        let dn = (interface.n_plus - interface.n_minus).norm();
        if dn > 0.0 {
            limit = limit.min(2.0 * std::f64::consts::PI / (spec.k0 * dn));
        }
        // evanescent decay length
        for n in [interface.n_plus, interface.n_minus] {
            if n.im > 0.0 {
                limit = limit.min(1.0 / (spec.k0 * n.im) * 2.0 * std::f64::consts::PI);
            }
        }
        limit / 20.0
    }

    /// Depth beyond which the transmitted field is negligible for all times
    /// up to `t_end`.
    pub fn auto_z_max(spec: &PulseSpec, interface: &InterfaceSolution, t_end: f64) -> f64 {
        let propagating: Vec<f64> = [interface.n_plus, interface.n_minus]
            .iter()
            .filter(|n| n.re > 1e-12 * n.norm() && n.im.abs() <= 1e-12 * n.norm())
            .map(|n| n.re)
            .collect();
        let decay = [interface.n_plus, interface.n_minus]
            .iter()
            .filter(|n| n.im > 0.0)
            .map(|n| EVANESCENT_DEPTHS / (spec.k0 * n.im))
            .fold(0.0, f64::max);
        match propagating.iter().copied().reduce(f64::min) {
            Some(n_min) => {
                let front = (spec.z0 + C * t_end) / n_min;
                (front.max(0.0) + 8.0 * spec.sigma_z / n_min).max(decay)
            }
            None => decay,
        }
    }

    /// Medium-side grid `z ∈ [0, z_max]` for the given time axis.
    pub fn medium(spec: &PulseSpec, interface: &InterfaceSolution, t: UniformAxis) -> Result<Self> {
        let z_max = Self::auto_z_max(spec, interface, t.end());
        let z = UniformAxis::spanning(0.0, z_max, Self::max_dz(spec, interface))?;
        Ok(Self { z, t })
    }

    pub fn samples(&self) -> usize {
        self.z.len * self.t.len
    }
}

/// Synthesized field, stored time-major (`index = it * nz + iz`).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub z: UniformAxis,
    pub t: UniformAxis,
    pub ex: Vec<C64>,
    pub ey: Vec<C64>,
    /// Panels in the accepted quadrature.
    pub panels: usize,
    /// Nodes in the accepted quadrature.
    pub nodes: usize,
    /// Change on the last doubling, relative to the peak `|E|`.
    pub doubling_change: f64,
}

impl FieldGrid {
    pub fn nz(&self) -> usize {
        self.z.len
    }

    pub fn nt(&self) -> usize {
        self.t.len
    }

    pub fn index(&self, it: usize, iz: usize) -> usize {
        it * self.z.len + iz
    }

    pub fn sample(&self, it: usize, iz: usize) -> FieldSample {
        let i = self.index(it, iz);
        FieldSample {
            z: self.z.at(iz),
            t: self.t.at(it),
            ex: self.ex[i],
            ey: self.ey[i],
        }
    }

    /// Samples at time index `it`, ordered in `z`.
    pub fn row(&self, it: usize) -> impl Iterator<Item = FieldSample> + '_ {
        (0..self.z.len).map(move |iz| self.sample(it, iz))
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.ex
            .iter()
            .zip(&self.ey)
            .map(|(x, y)| (x.norm_sqr() + y.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
struct Term {
    n: C64,
    coef: [C64; 2],
}

struct Synthesizer {
    spec: PulseSpec,
    vacuum: [Term; 2],
    medium: [Term; 2],
    prefactor: f64,
    screen_tol: f64,
}

impl Synthesizer {
    fn new(spec: &PulseSpec, s: &InterfaceSolution, screen_tol: f64) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self {
            spec: *spec,
            vacuum: [
                Term {
                    n: one,
                    coef: [one, zero],
                },
                Term {
                    n: -one,
                    coef: [s.r11, s.r21],
                },
            ],
            medium: [
                Term {
                    n: s.n_plus,
                    coef: [s.c_plus * s.jones_plus[0], s.c_plus * s.jones_plus[1]],
                },
                Term {
                    n: s.n_minus,
                    coef: [s.c_minus * s.jones_minus[0], s.c_minus * s.jones_minus[1]],
                },
            ],
            prefactor: spec.prefactor(),
            screen_tol,
        }
    }

    fn terms(&self, z: f64) -> &[Term; 2] {
        if z < 0.0 {
            &self.vacuum
        } else {
            &self.medium
        }
    }

    fn argument(&self, term: &Term, z: f64, t: f64) -> C64 {
        term.n * z - self.spec.z0 - C * t
    }

    /// `|coef| exp(-k0 Im x - Re(x^2) / (4 sigma^2))`, the term magnitude
    /// relative to the free-pulse peak.
    fn relative_bound(&self, term: &Term, x: C64) -> f64 {
        let c = term.coef[0].norm().max(term.coef[1].norm());
        if c == 0.0 {
            return 0.0;
        }
        let s2 = 4.0 * self.spec.sigma_z * self.spec.sigma_z;
        c * (-self.spec.k0 * x.im - (x * x).re / s2).exp()
    }

    fn active(&self, term: &Term, x: C64) -> bool {
        self.relative_bound(term, x) >= self.screen_tol
    }

    /// Largest `|x|` over the terms that survive screening.
    fn max_argument(&self, req: &FieldGridRequest) -> f64 {
        let mut m: f64 = 0.0;
        for it in 0..req.t.len {
            let t = req.t.at(it);
            for iz in 0..req.z.len {
                let z = req.z.at(iz);
                for term in self.terms(z) {
                    let x = self.argument(term, z, t);
                    if self.active(term, x) {
                        m = m.max(x.norm());
                    }
                }
            }
        }
        m
    }

    fn eval(&self, g: &GaussianFourier, z: f64, t: f64) -> [C64; 2] {
        let i = C64::new(0.0, 1.0);
        let mut e = [C64::new(0.0, 0.0); 2];
        for term in self.terms(z) {
            let x = self.argument(term, z, t);
            if !self.active(term, x) {
                continue;
            }
            let v = (i * x * self.spec.k0).exp() * g.eval(x) * self.prefactor;
            e[0] += term.coef[0] * v;
            e[1] += term.coef[1] * v;
        }
        e
    }

    fn grid(&self, g: &GaussianFourier, req: &FieldGridRequest) -> (Vec<C64>, Vec<C64>) {
        let rows: Vec<Vec<[C64; 2]>> = (0..req.t.len)
            .into_par_iter()
            .map(|it| {
                let t = req.t.at(it);
                (0..req.z.len)
                    .map(|iz| self.eval(g, req.z.at(iz), t))
                    .collect()
            })
            .collect();
        let mut ex = Vec::with_capacity(req.samples());
        let mut ey = Vec::with_capacity(req.samples());
        for row in rows {
            for [x, y] in row {
                ex.push(x);
                ey.push(y);
            }
        }
        (ex, ey)
    }
}

/// Radians of `q x` phase allowed per panel when choosing the starting
/// panel count.
const PHASE_PER_PANEL: f64 = 10.0;

/// Field of the pulse on the requested grid. The quadrature starts from a
/// panel count matched to the largest phase `W |x|` on the grid and doubles
/// until the maximum change over the grid is below `opts.rel_tol` times the
/// grid peak, or below `opts.screen_tol` times the free-pulse peak; the finer
/// result is returned.
pub fn synthesize_field(
    spec: &PulseSpec,
    interface: &InterfaceSolution,
    request: &FieldGridRequest,
    opts: &QuadratureOptions,
) -> Result<FieldGrid> {
    let syn = Synthesizer::new(spec, interface, opts.screen_tol);
    let half_width = opts.band_sigmas * spec.sigma_k();
    let span = 2.0 * half_width * syn.max_argument(request);
    let mut panels = opts
        .initial_panels
        .unwrap_or_else(|| (span / PHASE_PER_PANEL).ceil().max(2.0) as usize);
    let build = |p: usize| GaussianFourier::new(spec.sigma_z, half_width, opts.rule, p);

    // differences below the screening level are not resolvable; this
    // matters on grids the pulse has barely reached
    let floor = opts.screen_tol * spec.peak_amplitude();
    let mut g = build(panels);
    let (mut ex, mut ey) = syn.grid(&g, request);
    let mut change = f64::INFINITY;
    loop {
        if 2 * panels > opts.max_panels {
            return Err(Error::QuadratureNotConverged {
                nodes: g.nodes(),
                change,
            });
        }
        let g2 = build(2 * panels);
        let (ex2, ey2) = syn.grid(&g2, request);
        let mut diff: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for k in 0..ex2.len() {
            diff = diff
                .max((ex2[k] - ex[k]).norm())
                .max((ey2[k] - ey[k]).norm());
            peak = peak.max(ex2[k].norm()).max(ey2[k].norm());
        }
        change = if peak > 0.0 { diff / peak } else { 0.0 };
        (ex, ey, g, panels) = (ex2, ey2, g2, 2 * panels);
        if diff <= (opts.rel_tol * peak).max(floor) {
            break;
        }
    }
    Ok(FieldGrid {
        z: request.z,
        t: request.t,
        ex,
        ey,
        panels,
        nodes: g.nodes(),
        doubling_change: change,
    })
}
