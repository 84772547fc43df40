//! Closed forms for a circular arc of radius `R_ca` and half aperture `ψ`
//! with sources well inside the circle.
//!
//! With `(R, θ)` the polar form of `x_s − x̃_s`, the pair-product phase is
//! `φ(τ) ≈ −k R cos(τ − θ)`, so `φ̇ ≈ k R sin(τ − θ)` and the AF expands
//! into a Jacobi–Anger series in `J_n(k R)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{normalize_angle, ArrayCurve, NodePlacement, PolarPosition, Position};
use crate::scenario::Scenario;
use crate::specfun::{bessel_jn_sequence, truncation_order};
use crate::spectrum::BandLimit;
use crate::wavefield::Wavenumber;

/// Default far-source guard: positions must satisfy `‖x‖ ≤ R_ca / η`.
pub const DEFAULT_GUARD: f64 = 10.0;

/// Cosine-approximated phase `−k R cos(τ − θ)`.
pub fn phase_approx_ca(tau: f64, r: f64, theta: f64, k: Wavenumber) -> f64 {
    -k.value() * r * (tau - theta).cos()
}

/// Cosine-approximated local wave number `k R sin(τ − θ)`.
pub fn local_wavenumber_ca(tau: f64, r: f64, theta: f64, k: Wavenumber) -> f64 {
    k.value() * r * (tau - theta).sin()
}

/// `Ω_ca(θ) = max_{τ∈[−ψ,ψ]} |sin(τ − θ)|`.
pub fn visual_aperture(theta: f64, psi: f64) -> f64 {
    let inside = |a: f64| normalize_angle(a).abs() <= psi * (1.0 + 4.0 * f64::EPSILON);
    if inside(theta + FRAC_PI_2) || inside(theta - FRAC_PI_2) {
        1.0
    } else {
        (psi - theta).sin().abs().max((-psi - theta).sin().abs())
    }
}

/// `K_ca = k R Ω_ca(θ)`.
pub fn band_limit_ca(r: f64, theta: f64, psi: f64, k: Wavenumber) -> BandLimit {
    BandLimit::chirp(k.value() * r * visual_aperture(theta, psi))
}

/// Aliasing radius `λ / (δ Ω_ca)`; infinite when `Ω_ca = 0`.
pub fn alias_radius(delta: f64, theta: f64, psi: f64, wavelength: f64) -> f64 {
    let omega = visual_aperture(theta, psi);
    if omega == 0.0 {
        f64::INFINITY
    } else {
        wavelength / (delta * omega)
    }
}

/// Alias fronts `m R_max`, `m = 1, 2, …`, not exceeding `r_window`.
pub fn alias_fronts(delta: f64, theta: f64, psi: f64, wavelength: f64, r_window: f64) -> Vec<f64> {
    let r_max = alias_radius(delta, theta, psi, wavelength);
    if !r_max.is_finite() {
        return Vec::new();
    }
    (1..)
        .map(|m| m as f64 * r_max)
        .take_while(|r| *r <= r_window)
        .collect()
}

/// Truncated series value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub n_max: u32,
    /// Upper bound on the magnitude of the dropped terms.
    pub tail_bound: f64,
    /// `n_max` is below the turning-point rule.
    pub truncation_warning: bool,
}

/// Doubled tail `Σ_{n > n_max} b_n` bounding `Σ_{|n|>n_max} |J_n(x)|`, with
/// `b_n = min(1, (x/2)ⁿ/n!, Kapteyn)`. Kapteyn's inequality
/// `|J_n(nz)| ≤ zⁿ e^{n√(1−z²)} / (1+√(1−z²))ⁿ` (`z ≤ 1`) keeps the bound
/// tight at large `x`.
fn bessel_tail_bound(x: f64, n_max: u32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let ln_half = (0.5 * x).ln();
    let mut log_crude: f64 = (1..=n_max).map(|i| ln_half - f64::from(i).ln()).sum();
    let mut sum = 0.0;
    let mut n = f64::from(n_max);
    loop {
        n += 1.0;
        log_crude += ln_half - n.ln();
        let log_kapteyn = if n >= x {
            let z = x / n;
            let w = (1.0 - z * z).sqrt();
            n * (z.ln() + w - (1.0 + w).ln())
        } else {
            0.0
        };
        let term = log_crude.min(log_kapteyn).min(0.0).exp();
        sum += term;
        if n > x && (term <= 1e-17 * sum || term == 0.0) {
            break;
        }
    }
    2.0 * sum
}

fn resolve_order(x: f64, n_max: Option<u32>) -> (u32, bool) {
    let rule = truncation_order(x);
    match n_max {
        Some(n) => (n, n < rule),
        None => (rule, false),
    }
}

/// Continuous-aperture series
/// `(2/R_ca) Σ_n e^{jn(π/2−θ)} J_n(kR) sin(nψ)/n`, with `sin(nψ)/n → ψ` at `n = 0`.
pub fn af_ca_series_continuous(
    r: f64,
    theta: f64,
    psi: f64,
    r_ca: f64,
    k: Wavenumber,
    n_max: Option<u32>,
) -> Result<SeriesValue> {
    check_series_inputs(r, theta, psi, r_ca)?;
    let x = k.value() * r;
    let (n_max, truncation_warning) = resolve_order(x, n_max);
    let j = bessel_jn_sequence(n_max, x)?;
    let beta = FRAC_PI_2 - theta;
    let mut sum = Complex64::new(psi * j[0], 0.0);
    for n in 1..=n_max {
        let nf = f64::from(n);
        let c = (nf * psi).sin() / nf;
        sum += c * j[n as usize] * pair_phase(n, beta, 0.0);
    }
    Ok(SeriesValue {
        value: sum * (2.0 / r_ca),
        n_max,
        tail_bound: 2.0 / r_ca * psi * bessel_tail_bound(x, n_max),
        truncation_warning,
    })
}

/// `e^{jnβ'} + (−1)ⁿ e^{−jnβ''}`: the `±n` pair of the series with
/// `J_{−n} = (−1)ⁿ J_n`, where the node-placement phase `shift` enters as
/// `β' = β − shift`, `β'' = β − shift` mirrored.
#[inline]
fn pair_phase(n: u32, beta: f64, shift: f64) -> Complex64 {
    let nf = f64::from(n);
    let plus = Complex64::from_polar(1.0, nf * (beta - shift));
    let minus = Complex64::from_polar(1.0, -nf * (beta - shift));
    if n % 2 == 0 {
        plus + minus
    } else {
        plus - minus
    }
}

/// `sin(nψ)/sin(nψ/N)`, replaced by its limit `N cos(nψ)/cos(nψ/N)` where
/// the denominator vanishes.
fn dirichlet_ratio(n: u32, psi: f64, antennas: usize) -> f64 {
    let nf = f64::from(n);
    let nn = antennas as f64;
    let y = nf * psi / nn;
    let m = (y / PI).round();
    if (y - m * PI).abs() < 1e-9 {
        nn * (nf * psi).cos() / y.cos()
    } else {
        (nf * psi).sin() / y.sin()
    }
}

/// Sampled-array series
/// `(2ψ/(N R_ca)) Σ_n e^{jn(π/2−θ)} J_n(kR) sin(nψ)/sin(nψ/N)`.
///
/// Left-endpoint placement multiplies each term by `e^{−jnδ/2}`.
pub fn af_ca_series_discrete(
    r: f64,
    theta: f64,
    psi: f64,
    r_ca: f64,
    antennas: usize,
    placement: NodePlacement,
    k: Wavenumber,
    n_max: Option<u32>,
) -> Result<SeriesValue> {
    check_series_inputs(r, theta, psi, r_ca)?;
    if antennas == 0 {
        return Err(Error::InvalidInput("antenna count must be at least 1".into()));
    }
    let x = k.value() * r;
    let (n_max, truncation_warning) = resolve_order(x, n_max);
    let j = bessel_jn_sequence(n_max, x)?;
    let beta = FRAC_PI_2 - theta;
    let delta = 2.0 * psi / antennas as f64;
    let shift = match placement {
        NodePlacement::Midpoint => 0.0,
        NodePlacement::Endpoint => 0.5 * delta,
    };
    let mut sum = Complex64::new(antennas as f64 * j[0], 0.0);
    for n in 1..=n_max {
        let ratio = dirichlet_ratio(n, psi, antennas);
        if ratio == 0.0 {
            continue;
        }
        // β − shift for +n and β + shift for −n share the form e^{±jn(β−shift)}
        sum += ratio * j[n as usize] * pair_phase(n, beta, shift);
    }
    let scale = 2.0 * psi / (antennas as f64 * r_ca);
    Ok(SeriesValue {
        value: sum * scale,
        n_max,
        tail_bound: scale * antennas as f64 * bessel_tail_bound(x, n_max),
        truncation_warning,
    })
}

fn check_series_inputs(r: f64, theta: f64, psi: f64, r_ca: f64) -> Result<()> {
    ensure_finite("R_ss", r)?;
    ensure_finite("theta_ss", theta)?;
    if r < 0.0 {
        return Err(Error::InvalidInput(format!("separation must be non-negative, got {r}")));
    }
    if !(psi > 0.0 && psi <= PI) {
        return Err(Error::InvalidInput(format!("half aperture must lie in (0, π], got {psi}")));
    }
    if !(r_ca > 0.0 && r_ca.is_finite()) {
        return Err(Error::InvalidInput(format!("R_ca must be positive, got {r_ca}")));
    }
    Ok(())
}

/// Circular-array configuration with its far-source guard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularScenario {
    pub radius: f64,
    pub half_aperture: f64,
    pub antennas: Option<usize>,
    pub wavenumber: Wavenumber,
    /// `η`: admissible positions satisfy `‖x‖ ≤ R_ca / η`.
    pub guard: f64,
}

impl CircularScenario {
    pub fn new(radius: f64, half_aperture: f64, wavenumber: Wavenumber) -> Result<Self> {
        ArrayCurve::circular_arc(radius, half_aperture)?;
        Ok(Self {
            radius,
            half_aperture,
            antennas: None,
            wavenumber,
            guard: DEFAULT_GUARD,
        })
    }

    pub fn from_scenario(s: &Scenario) -> Result<Self> {
        match s.curve {
            ArrayCurve::CircularArc {
                radius,
                half_aperture,
            } => Ok(Self {
                radius,
                half_aperture,
                antennas: s.antennas,
                wavenumber: s.wavenumber,
                guard: DEFAULT_GUARD,
            }),
            ArrayCurve::LineSegment { .. } => Err(Error::InvalidInput(
                "circular analysis needs a circular-arc scenario".into(),
            )),
        }
    }

    pub fn with_antennas(mut self, n: usize) -> Self {
        self.antennas = Some(n);
        self
    }

    pub fn with_guard(mut self, eta: f64) -> Result<Self> {
        if !(eta >= 1.0 && eta.is_finite()) {
            return Err(Error::InvalidInput(format!("guard η must be ≥ 1, got {eta}")));
        }
        self.guard = eta;
        Ok(self)
    }

    /// Parametric spacing `2ψ/N`.
    pub fn step(&self) -> Option<f64> {
        self.antennas.map(|n| 2.0 * self.half_aperture / n as f64)
    }

    fn guard_radius(&self) -> f64 {
        self.radius / self.guard
    }

    /// Polar separation of two admissible positions.
    pub fn separation(&self, source: Position, tentative: Position) -> Result<PolarPosition> {
        for p in [source, tentative] {
            if p.norm() > self.guard_radius() {
                return Err(Error::ApproximationDomain(format!(
                    "position ({}, {}) lies outside R_ca/η = {}",
                    p.x,
                    p.y,
                    self.guard_radius()
                )));
            }
        }
        Ok(crate::geometry::separation(source, tentative))
    }

    fn check_separation(&self, r: f64) -> Result<()> {
        // admissible positions are at most 2 R_ca/η apart
        if r > 2.0 * self.guard_radius() {
            return Err(Error::ApproximationDomain(format!(
                "separation {r} exceeds 2 R_ca/η = {}",
                2.0 * self.guard_radius()
            )));
        }
        Ok(())
    }

    pub fn phase_approx(&self, tau: f64, r: f64, theta: f64) -> Result<f64> {
        self.check_separation(r)?;
        Ok(phase_approx_ca(tau, r, theta, self.wavenumber))
    }

    pub fn visual_aperture(&self, theta: f64) -> f64 {
        visual_aperture(theta, self.half_aperture)
    }

    pub fn band_limit(&self, r: f64, theta: f64) -> BandLimit {
        band_limit_ca(r, theta, self.half_aperture, self.wavenumber)
    }

    pub fn alias_radius(&self, theta: f64) -> Result<f64> {
        let delta = self
            .step()
            .ok_or_else(|| Error::InvalidInput("alias radius needs an antenna count".into()))?;
        Ok(alias_radius(delta, theta, self.half_aperture, self.wavenumber.wavelength()))
    }

    pub fn series_continuous(&self, r: f64, theta: f64) -> Result<SeriesValue> {
        self.check_separation(r)?;
        af_ca_series_continuous(r, theta, self.half_aperture, self.radius, self.wavenumber, None)
    }

    pub fn series_discrete(&self, r: f64, theta: f64, placement: NodePlacement) -> Result<SeriesValue> {
        self.check_separation(r)?;
        let n = self
            .antennas
            .ok_or_else(|| Error::InvalidInput("discrete series needs an antenna count".into()))?;
        af_ca_series_discrete(
            r,
            theta,
            self.half_aperture,
            self.radius,
            n,
            placement,
            self.wavenumber,
            None,
        )
    }

    /// Matched continuous value `2ψ/R_ca` for a source at the centre.
    pub fn matched(&self) -> f64 {
        2.0 * self.half_aperture / self.radius
    }
}
