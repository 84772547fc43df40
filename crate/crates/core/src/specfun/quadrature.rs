//! Composite Gauss–Legendre quadrature for smooth, oscillatory complex integrands.
//!
//! The panel count follows the oscillation count of the integrand
//! (`samples_per_cycle` panels per expected phase turn), and every result
//! carries an error estimate from comparing `P` against `2P` panels.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// The shared 10-point rule used by all composite integrations.
    pub fn ten_point() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(10))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.sum.re = neumaier_step(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = neumaier_step(self.sum.im, v.im, &mut self.comp.im);
    }

    pub fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn neumaier_step(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}

/// Output of a fixed composite rule.
#[derive(Debug, Clone, Copy)]
pub struct PanelSum {
    pub value: Complex64,
    /// The same rule applied to `|f|`; the scale used for relative tolerances.
    pub abs_integral: f64,
}

/// Composite 10-point Gauss–Legendre over `panels` equal panels of `[a, b]`.
pub fn composite_gauss_legendre<F>(f: F, a: f64, b: f64, panels: usize) -> PanelSum
where
    F: Fn(f64) -> Complex64,
{
    let rule = GaussLegendre::ten_point();
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let half = 0.5 * h;
    let mut acc = CompensatedSum::new();
    let mut abs_acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut panel = Complex64::new(0.0, 0.0);
        let mut panel_abs = 0.0;
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let v = f(mid + half * x);
            panel += v * *w;
            panel_abs += v.norm() * *w;
        }
        acc.add(panel * half);
        abs_acc += panel_abs * half;
    }
    PanelSum {
        value: acc.total(),
        abs_integral: abs_acc,
    }
}

/// Tunables for [`oscillatory_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Panels per expected phase turn of the integrand.
    pub samples_per_cycle: f64,
    pub min_panels: usize,
    /// Target `error_estimate / ∫|f|`.
    pub rel_tol: f64,
    /// Node budget across all refinement levels.
    pub max_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            samples_per_cycle: 8.0,
            min_panels: 8,
            rel_tol: 1e-8,
            max_nodes: 1 << 24,
        }
    }
}

impl QuadratureConfig {
    /// Initial panel count for an integrand with `cycles_hint` phase turns.
    pub fn panels_for(&self, cycles_hint: f64) -> usize {
        let c = if cycles_hint.is_finite() { cycles_hint.max(0.0) } else { 0.0 };
        self.min_panels.max((self.samples_per_cycle * c).ceil() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Integrates `f` over `[a, b]`, doubling the panel count until consecutive
/// levels agree to `rel_tol · ∫|f|`.
pub fn oscillatory_quadrature<F>(
    f: F,
    a: f64,
    b: f64,
    cycles_hint: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    let nodes_per_panel = GaussLegendre::ten_point().len();
    let mut panels = config.panels_for(cycles_hint);
    let mut coarse = composite_gauss_legendre(&f, a, b, panels);
    let mut nodes_used = panels * nodes_per_panel;
    loop {
        panels *= 2;
        let fine = composite_gauss_legendre(&f, a, b, panels);
        nodes_used += panels * nodes_per_panel;
        let error_estimate = (fine.value - coarse.value).norm();
        let scale = fine.abs_integral.max(f64::MIN_POSITIVE);
        if error_estimate <= config.rel_tol * scale {
            return Ok(QuadratureResult {
                value: fine.value,
                error_estimate,
                nodes_used,
            });
        }
        if nodes_used + 2 * panels * nodes_per_panel > config.max_nodes {
            return Err(Error::Convergence {
                best: fine.value,
                error_estimate,
                nodes_used,
            });
        }
        coarse = fine;
    }
}
