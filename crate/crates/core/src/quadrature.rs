//! Composite quadrature over a finite band, including the Gaussian-weighted
//! Fourier integral that every pulse field sample reduces to.

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre { nodes_per_panel: usize },
    Trapezoid,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::GaussLegendre {
            nodes_per_panel: 16,
        }
    }
}

impl QuadratureRule {
    /// Nodes and weights of one panel on `[-1, 1]`.
    pub fn reference(&self) -> (Vec<f64>, Vec<f64>) {
        match *self {
            QuadratureRule::GaussLegendre { nodes_per_panel } => gauss_legendre(nodes_per_panel),
            QuadratureRule::Trapezoid => (vec![-1.0, 1.0], vec![1.0, 1.0]),
        }
    }
}

/// Controls for spectral synthesis of the pulse field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rule: QuadratureRule,
    /// Starting panel count; chosen from the phase span of the grid if unset.
    pub initial_panels: Option<usize>,
    /// The doubling test gives up beyond this many panels.
    pub max_panels: usize,
    /// Largest accepted change on doubling, relative to the peak `|E|`.
    pub rel_tol: f64,
    /// Half-width of the integration band in units of `sigma_k`.
    pub band_sigmas: f64,
    /// Samples whose analytic magnitude bound is below this fraction of the
    /// peak amplitude are set to zero without quadrature.
    pub screen_tol: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::default(),
            initial_panels: None,
            max_panels: 1 << 14,
            rel_tol: 1e-6,
            band_sigmas: 12.0,
            screen_tol: 1e-13,
        }
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`, by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let legendre = |t: f64| {
        // (P_n(t), P_n'(t))
        let (mut p0, mut p1) = (1.0, t);
        for j in 2..=n {
            let jf = j as f64;
            let p2 = ((2.0 * jf - 1.0) * t * p1 - (jf - 1.0) * p0) / jf;
            p0 = p1;
            p1 = p2;
        }
        (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
    };
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(t);
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Panelled rule on `[a, b]`, flattened to nodes and weights.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(rule: QuadratureRule, a: f64, b: f64, panels: usize) -> Self {
        let (rx, rw) = rule.reference();
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * rx.len());
        let mut weights = Vec::with_capacity(panels * rx.len());
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in rx.iter().zip(&rw) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> C64>(&self, mut f: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// `I(x) = ∫_{-W}^{W} exp(-q^2 sigma^2) exp(i q x) dq` for complex `x` on a
/// fixed composite rule.
///
/// Panel midpoints are equally spaced, so `exp(i q x)` factors as
/// `exp(i q_0 x) a^p u_m` with `a = exp(i h x)` and `u_m` one per reference
/// node. A sample then costs a handful of exponentials plus one multiply-add
/// per node.
#[derive(Debug, Clone)]
pub struct GaussianFourier {
    half_width: f64,
    panels: usize,
    h: f64,
    ref_nodes: Vec<f64>,
    /// Gaussian times quadrature weight, panel-major.
    weights: Vec<f64>,
}

impl GaussianFourier {
    pub fn new(sigma: f64, half_width: f64, rule: QuadratureRule, panels: usize) -> Self {
        let (rx, rw) = rule.reference();
        let h = 2.0 * half_width / panels as f64;
        let mut weights = Vec::with_capacity(panels * rx.len());
        for p in 0..panels {
            let mid = -half_width + (p as f64 + 0.5) * h;
            for (x, w) in rx.iter().zip(&rw) {
                let q = mid + 0.5 * h * x;
                weights.push(0.5 * h * w * (-(q * sigma).powi(2)).exp());
            }
        }
        Self {
            half_width,
            panels,
            h,
            ref_nodes: rx,
            weights,
        }
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes(&self) -> usize {
        self.weights.len()
    }

    pub fn eval(&self, x: C64) -> C64 {
        let i = C64::new(0.0, 1.0);
        let m = self.ref_nodes.len();
        let u: Vec<C64> = self
            .ref_nodes
            .iter()
            .map(|&r| (i * x * (0.5 * self.h * r)).exp())
            .collect();
        let step = (i * x * self.h).exp();
        let mut phase = (i * x * (-self.half_width + 0.5 * self.h)).exp();
        let mut total = C64::new(0.0, 0.0);
        for panel in self.weights.chunks_exact(m) {
            let mut s = C64::new(0.0, 0.0);
            for (w, um) in panel.iter().zip(&u) {
                s += um * *w;
            }
            total += phase * s;
            phase *= step;
        }
        total
    }
}
