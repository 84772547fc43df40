//! Fresnel-regime closed forms for a horizontal ULA of length `L`
//! centred at the origin. Angles are measured from the array axis, so
//! broadside is `θ = π/2`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{ArrayCurve, PolarPosition, Position};
use crate::scenario::Scenario;
use crate::spectrum::BandLimit;
use crate::wavefield::Wavenumber;

/// Default Fresnel guard factor `γ` in `R_s ≥ γ L`.
pub const DEFAULT_FRESNEL_GUARD: f64 = 1.0;

/// Order-2 distance expansion `R_s + τ²/(2R_s) − τ cos θ_s`.
pub fn fresnel_distance(tau: f64, r_s: f64, theta_s: f64) -> f64 {
    r_s + tau * tau / (2.0 * r_s) - tau * theta_s.cos()
}

/// Range and direction mismatch between the true and a tentative source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaMismatch {
    /// `Δ = 1/R_s − 1/R̃_s`.
    pub delta: f64,
    /// `Ω = cos θ_s − cos θ̃_s`.
    pub omega: f64,
}

impl UlaMismatch {
    pub const ZERO: Self = Self {
        delta: 0.0,
        omega: 0.0,
    };
}

pub fn mismatch(source: PolarPosition, tentative: PolarPosition) -> Result<UlaMismatch> {
    for (name, r) in [("R_s", source.radius), ("tentative R", tentative.radius)] {
        ensure_finite(name, r)?;
        if r <= 0.0 {
            return Err(Error::InvalidInput(format!("{name} must be positive, got {r}")));
        }
    }
    Ok(UlaMismatch {
        delta: 1.0 / source.radius - 1.0 / tentative.radius,
        omega: source.angle.cos() - tentative.angle.cos(),
    })
}

/// Fresnel local wave number `k(τΔ − Ω)`.
pub fn local_wavenumber_ula(tau: f64, m: UlaMismatch, k: Wavenumber) -> f64 {
    k.value() * (tau * m.delta - m.omega)
}

/// `K_ula = k(L/2·|Δ| + |Ω|)`.
pub fn band_limit_ula(m: UlaMismatch, length: f64, k: Wavenumber) -> BandLimit {
    BandLimit::chirp(k.value() * (0.5 * length * m.delta.abs() + m.omega.abs()))
}

/// Folding test `2πN/L ≤ K_ula`; equality counts as aliasing.
pub fn ula_aliasing(m: UlaMismatch, length: f64, antennas: usize, k: Wavenumber) -> bool {
    std::f64::consts::TAU * antennas as f64 / length <= band_limit_ula(m, length, k).value
}

/// Radial thresholds on the `Ω = 0` ray: aliasing for `R̃ ≤ lower` and,
/// when finite, for `R̃ ≥ upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialBounds {
    pub lower: f64,
    /// `None` when `1/R_s ≤ 2Nλ/L²`: no outer alias closure.
    pub upper: Option<f64>,
}

impl RadialBounds {
    /// Whether a tentative range lies strictly between the thresholds.
    pub fn contains(&self, r: f64) -> bool {
        r > self.lower && self.upper.map_or(true, |u| r < u)
    }
}

pub fn radial_alias_bounds(r_s: f64, antennas: usize, length: f64, wavelength: f64) -> Result<RadialBounds> {
    ensure_finite("R_s", r_s)?;
    if r_s <= 0.0 {
        return Err(Error::InvalidInput(format!("R_s must be positive, got {r_s}")));
    }
    if antennas == 0 || !(length > 0.0) || !(wavelength > 0.0) {
        return Err(Error::InvalidInput("radial bounds need N ≥ 1, L > 0 and λ > 0".into()));
    }
    let c = 2.0 * antennas as f64 * wavelength / (length * length);
    let inv = 1.0 / r_s;
    Ok(RadialBounds {
        lower: 1.0 / (inv + c),
        upper: (inv > c).then(|| 1.0 / (inv - c)),
    })
}

/// ULA configuration with its advisory Fresnel guard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaScenario {
    pub length: f64,
    pub antennas: Option<usize>,
    pub wavenumber: Wavenumber,
    /// `γ` in `R_s ≥ γ L`.
    pub guard: f64,
}

/// Closed-form summary for one source pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaAnalysis {
    pub mismatch: UlaMismatch,
    pub band_limit: f64,
    pub aliasing: Option<bool>,
    pub radial_bounds: Option<RadialBounds>,
    /// A position lies closer than `γ L`; the expansion is used anyway.
    pub fresnel_warning: bool,
}

impl UlaScenario {
    pub fn new(length: f64, wavenumber: Wavenumber) -> Result<Self> {
        ArrayCurve::line_segment(length)?;
        Ok(Self {
            length,
            antennas: None,
            wavenumber,
            guard: DEFAULT_FRESNEL_GUARD,
        })
    }

    pub fn from_scenario(s: &Scenario) -> Result<Self> {
        match s.curve {
            ArrayCurve::LineSegment { length } => Ok(Self {
                length,
                antennas: s.antennas,
                wavenumber: s.wavenumber,
                guard: DEFAULT_FRESNEL_GUARD,
            }),
            ArrayCurve::CircularArc { .. } => Err(Error::InvalidInput(
                "ULA analysis needs a line-segment scenario".into(),
            )),
        }
    }

    pub fn with_antennas(mut self, n: usize) -> Self {
        self.antennas = Some(n);
        self
    }

    pub fn with_guard(mut self, gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!("Fresnel guard γ must be ≥ 1, got {gamma}")));
        }
        self.guard = gamma;
        Ok(self)
    }

    /// `δ_ula = L/N`.
    pub fn step(&self) -> Option<f64> {
        self.antennas.map(|n| self.length / n as f64)
    }

    pub fn fresnel_valid(&self, range: f64) -> bool {
        range >= self.guard * self.length
    }

    pub fn analyze(&self, source: Position, tentative: Position) -> Result<UlaAnalysis> {
        let (ps, pt) = (PolarPosition::from(source), PolarPosition::from(tentative));
        let m = mismatch(ps, pt)?;
        let radial_bounds = match self.antennas {
            Some(n) => Some(radial_alias_bounds(ps.radius, n, self.length, self.wavenumber.wavelength())?),
            None => None,
        };
        Ok(UlaAnalysis {
            mismatch: m,
            band_limit: band_limit_ula(m, self.length, self.wavenumber).value,
            aliasing: self.antennas.map(|n| ula_aliasing(m, self.length, n, self.wavenumber)),
            radial_bounds,
            fresnel_warning: !(self.fresnel_valid(ps.radius) && self.fresnel_valid(pt.radius)),
        })
    }
}
