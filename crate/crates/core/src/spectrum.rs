//! Spatial spectrum `G(k_τ) = ∫ g(τ) e^{−j k_τ τ} dτ` of the pair product,
//! measured and chirp-predicted band limits, and the no-folding test.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Position;
use crate::scenario::Scenario;
use crate::specfun::quadrature::{CompensatedSum, GaussLegendre, QuadratureConfig};
use crate::wavefield::PairIntegrand;

/// Default `ε_rel` for measured band limits.
pub const DEFAULT_EPS_REL: f64 = 0.01;

/// Default number of τ nodes in the chirp band-limit search.
pub const DEFAULT_SEARCH_POINTS: usize = 2048;

const PHASOR_BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BandLimitMethod {
    Measured { eps_rel: f64 },
    Chirp,
}

/// Spatial band limit `K` in rad per unit `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandLimit {
    pub value: f64,
    #[serde(flatten)]
    pub method: BandLimitMethod,
}

impl BandLimit {
    pub fn chirp(value: f64) -> Self {
        Self {
            value,
            method: BandLimitMethod::Chirp,
        }
    }
}

/// `G` sampled on a uniform axis symmetric about `k_τ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub scenario: Scenario,
    pub tentative: Position,
    pub k_tau: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Largest `|G_{2P} − G_P|` over the axis.
    pub error_estimate: f64,
    pub nodes_used: usize,
}

impl SpectrumGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn k_max(&self) -> f64 {
        self.k_tau.last().copied().unwrap_or(0.0)
    }

    /// `G(0)`.
    pub fn center(&self) -> Complex64 {
        self.values[self.values.len() / 2]
    }
}

/// `1.5 K + 4π/|𝒯|`: the chirp support plus the aperture main-lobe bleed.
pub fn default_k_max(chirp_k: f64, domain_length: f64) -> f64 {
    1.5 * chirp_k + 2.0 * TAU / domain_length
}

/// Uniform symmetric axis of `m` (odd) points on `[−k_max, k_max]`.
pub fn symmetric_axis(k_max: f64, m: usize) -> Result<Vec<f64>> {
    if m % 2 == 0 {
        return Err(Error::InvalidInput(format!("spectrum size must be odd, got {m}")));
    }
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::InvalidInput(format!("k_max must be positive, got {k_max}")));
    }
    if m == 1 {
        return Ok(vec![0.0]);
    }
    let half = (m / 2) as i64;
    let step = k_max / half as f64;
    Ok((-half..=half).map(|i| i as f64 * step).collect())
}

struct WeightedNodes {
    tau: Vec<f64>,
    weighted: Vec<Complex64>,
    abs_integral: f64,
}

fn weighted_nodes(integrand: &PairIntegrand, a: f64, b: f64, panels: usize) -> WeightedNodes {
    let rule = GaussLegendre::ten_point();
    let h = (b - a) / panels as f64;
    let half = 0.5 * h;
    let mut tau = Vec::with_capacity(panels * rule.len());
    let mut weighted = Vec::with_capacity(panels * rule.len());
    let mut abs_integral = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let t = mid + half * x;
            let g = integrand.eval(t) * (w * half);
            abs_integral += g.norm();
            tau.push(t);
            weighted.push(g);
        }
    }
    WeightedNodes {
        tau,
        weighted,
        abs_integral,
    }
}

/// `Σ_j w_j g(τ_j) e^{−j k τ_j}` for every `k` on a uniform axis, using a
/// phasor recurrence re-seeded at the start of each block of `k` values.
fn transform(nodes: &WeightedNodes, k_axis: &[f64]) -> Vec<Complex64> {
    if k_axis.is_empty() {
        return Vec::new();
    }
    let dk = if k_axis.len() > 1 {
        k_axis[1] - k_axis[0]
    } else {
        0.0
    };
    let steps: Vec<Complex64> = nodes
        .tau
        .iter()
        .map(|&t| Complex64::from_polar(1.0, -dk * t))
        .collect();
    k_axis
        .par_chunks(PHASOR_BLOCK)
        .flat_map_iter(|block| {
            let mut phasor: Vec<Complex64> = nodes
                .tau
                .iter()
                .zip(&nodes.weighted)
                .map(|(&t, &g)| g * Complex64::from_polar(1.0, -block[0] * t))
                .collect();
            let mut out = Vec::with_capacity(block.len());
            for i in 0..block.len() {
                let mut acc = CompensatedSum::new();
                for v in &phasor {
                    acc.add(*v);
                }
                out.push(acc.total());
                if i + 1 < block.len() {
                    for (p, s) in phasor.iter_mut().zip(&steps) {
                        *p *= s;
                    }
                }
            }
            out
        })
        .collect()
}

/// Chirp band limit of the exact phase, `max |φ̇|` over the curve domain.
pub fn band_limit_chirp(
    scenario: &Scenario,
    tentative: Position,
    search_points: usize,
) -> Result<BandLimit> {
    let integrand = scenario.integrand(tentative)?;
    let (a, b) = scenario.curve.domain();
    let value = max_abs_on_interval(|t| integrand.phase_rate(t), a, b, search_points)?;
    Ok(BandLimit::chirp(value))
}

/// `max_{τ∈[a,b]} |f(τ)|` by a dense grid followed by golden-section
/// refinement around the best node.
pub fn max_abs_on_interval<F>(f: F, a: f64, b: f64, search_points: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if search_points < 64 {
        return Err(Error::InvalidInput(format!(
            "band-limit search needs at least 64 points, got {search_points}"
        )));
    }
    let n = search_points;
    let h = (b - a) / (n - 1) as f64;
    let node = |i: usize| if i + 1 == n { b } else { a + i as f64 * h };
    let (mut best_i, mut best) = (0, f(a).abs());
    for i in 1..n {
        let v = f(node(i)).abs();
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = node(best_i.saturating_sub(1));
    let hi = node((best_i + 1).min(n - 1));
    let refined = golden_section_max(|t| f(t).abs(), lo, hi);
    Ok(best.max(refined))
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if (hi - lo).abs() <= 1e-14 * (lo.abs() + hi.abs()).max(1.0) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// `G(k_τ)` on `m` (odd) uniform nodes of `[−k_max, k_max]`.
///
/// The quadrature starts from `samples_per_cycle` panels per phase turn of
/// `g e^{−j k_max τ}` and doubles until the whole axis agrees between
/// consecutive levels to `rel_tol · ∫|g|`.
pub fn spectrum_numeric(
    scenario: &Scenario,
    tentative: Position,
    k_max: f64,
    m: usize,
    config: &QuadratureConfig,
) -> Result<SpectrumGrid> {
    let k_tau = symmetric_axis(k_max, m)?;
    let integrand = scenario.integrand(tentative)?;
    let (a, b) = scenario.curve.domain();
    let chirp = max_abs_on_interval(|t| integrand.phase_rate(t), a, b, 64)?;
    let cycles = (chirp + k_max) * (b - a) / TAU;
    let mut panels = config.panels_for(cycles);
    let nodes_per_panel = GaussLegendre::ten_point().len();
    let mut coarse = transform(&weighted_nodes(&integrand, a, b, panels), &k_tau);
    let mut nodes_used = panels * nodes_per_panel;
    loop {
        panels *= 2;
        let fine_nodes = weighted_nodes(&integrand, a, b, panels);
        let fine = transform(&fine_nodes, &k_tau);
        nodes_used += panels * nodes_per_panel;
        let error_estimate = coarse
            .iter()
            .zip(&fine)
            .map(|(c, f)| (f - c).norm())
            .fold(0.0, f64::max);
        if error_estimate <= config.rel_tol * fine_nodes.abs_integral.max(f64::MIN_POSITIVE) {
            return Ok(SpectrumGrid {
                scenario: *scenario,
                tentative,
                k_tau,
                values: fine,
                error_estimate,
                nodes_used,
            });
        }
        if nodes_used + 2 * panels * nodes_per_panel > config.max_nodes {
            return Err(Error::Convergence {
                best: fine[fine.len() / 2],
                error_estimate,
                nodes_used,
            });
        }
        coarse = fine;
    }
}

/// Largest `|k_τ|` with `|G(k_τ)| > ε_rel · max|G|`.
pub fn band_limit_measured(spec: &SpectrumGrid, eps_rel: f64) -> Result<BandLimit> {
    if !(eps_rel > 0.0 && eps_rel < 1.0) {
        return Err(Error::InvalidInput(format!("eps_rel must lie in (0, 1), got {eps_rel}")));
    }
    let peak = spec.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let method = BandLimitMethod::Measured { eps_rel };
    if peak == 0.0 {
        return Ok(BandLimit { value: 0.0, method });
    }
    let threshold = eps_rel * peak;
    let last = spec.values.len() - 1;
    let mut value: f64 = 0.0;
    for (i, (k, v)) in spec.k_tau.iter().zip(&spec.values).enumerate() {
        if v.norm() > threshold {
            if (i == 0 || i == last) && last > 0 {
                return Err(Error::Range(format!(
                    "|G| exceeds the threshold at the axis edge |k_tau| = {}; increase k_max",
                    k.abs()
                )));
            }
            value = value.max(k.abs());
        }
    }
    Ok(BandLimit { value, method })
}

/// Measured band limit on an automatically sized axis, widening `k_max`
/// (at constant resolution) while the support reaches the edge.
pub fn band_limit_measured_auto(
    scenario: &Scenario,
    tentative: Position,
    eps_rel: f64,
    m: usize,
    config: &QuadratureConfig,
) -> Result<(BandLimit, SpectrumGrid)> {
    let chirp = band_limit_chirp(scenario, tentative, DEFAULT_SEARCH_POINTS)?;
    let mut k_max = default_k_max(chirp.value, scenario.curve.domain_length());
    let mut m = m;
    for _ in 0..6 {
        let spec = spectrum_numeric(scenario, tentative, k_max, m, config)?;
        match band_limit_measured(&spec, eps_rel) {
            Ok(k) => return Ok((k, spec)),
            Err(Error::Range(_)) => {
                k_max *= 2.0;
                m = 2 * m - 1;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Range(format!(
        "spectral support still reaches the axis edge at k_max = {k_max}"
    )))
}

/// No zero-folding: `2π/δ ≥ K`. `δ` must be positive.
pub fn no_alias(delta: f64, band_limit: f64) -> bool {
    assert!(delta > 0.0, "sampling step must be positive, got {delta}");
    TAU / delta >= band_limit
}

/// Largest step with no folding, `2π/K` (infinite for `K = 0`).
pub fn critical_step(band_limit: f64) -> f64 {
    if band_limit == 0.0 {
        f64::INFINITY
    } else {
        2.0 * PI / band_limit
    }
}
