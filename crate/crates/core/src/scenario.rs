//! Scenario bundle `(k_s, curve, x_s)` and its JSON description.
//!
//! ```json
//! {
//!   "curve": {"kind": "circular", "R_ca": 1000, "psi": 3.141592653589793},
//!   "N": 256,
//!   "source": [0, 0]
//! }
//! ```
//!
//! `source` may also be polar, `{"R": 1000, "theta": 1.5707963267948966}`.
//! Optional keys: `k_s` (default `2π`), `lambda_s` (length unit of the file;
//! all lengths are divided by it and `k_s` multiplied by it) and `placement`
//! (`"midpoint"` or `"endpoint"`).

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{ArrayCurve, NodePlacement, Position, SamplingGrid};
use crate::wavefield::{PairIntegrand, Wavenumber};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Circular {
        #[serde(rename = "R_ca")]
        radius: f64,
        psi: f64,
    },
    Ula {
        #[serde(rename = "L")]
        length: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceSpec {
    Cartesian([f64; 2]),
    Polar {
        #[serde(rename = "R")]
        radius: f64,
        theta: f64,
    },
}

/// On-disk form of a [`Scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub curve: CurveSpec,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub antennas: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_s: Option<f64>,
    pub source: SourceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<NodePlacement>,
}

/// Carrier, array and true source shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub wavenumber: Wavenumber,
    pub curve: ArrayCurve,
    pub source: Position,
    pub antennas: Option<usize>,
    pub placement: NodePlacement,
}

impl Scenario {
    pub fn new(curve: ArrayCurve, source: Position, wavenumber: Wavenumber) -> Result<Self> {
        ensure_finite("source x", source.x)?;
        ensure_finite("source y", source.y)?;
        Ok(Self {
            wavenumber,
            curve,
            source,
            antennas: None,
            placement: NodePlacement::Midpoint,
        })
    }

    pub fn with_antennas(mut self, n: usize) -> Self {
        self.antennas = Some(n);
        self
    }

    pub fn with_placement(mut self, placement: NodePlacement) -> Self {
        self.placement = placement;
        self
    }

    pub fn with_source(mut self, source: Position) -> Self {
        self.source = source;
        self
    }

    pub fn wavelength(&self) -> f64 {
        self.wavenumber.wavelength()
    }

    /// Antenna grid; requires `N`.
    pub fn grid(&self) -> Result<SamplingGrid> {
        let n = self
            .antennas
            .ok_or_else(|| Error::InvalidInput("scenario has no antenna count N".into()))?;
        SamplingGrid::new(&self.curve, n, self.placement)
    }

    /// Validated pair-product integrand against a tentative position.
    pub fn integrand(&self, tentative: Position) -> Result<PairIntegrand> {
        PairIntegrand::new(self.curve, self.source, tentative, self.wavenumber)
    }

    pub fn from_file_spec(spec: &ScenarioFile) -> Result<Self> {
        let unit = spec.lambda_s.unwrap_or(1.0);
        ensure_finite("lambda_s", unit)?;
        if unit <= 0.0 {
            return Err(Error::InvalidInput(format!("lambda_s must be positive, got {unit}")));
        }
        let curve = match spec.curve {
            CurveSpec::Circular { radius, psi } => ArrayCurve::circular_arc(radius / unit, psi)?,
            CurveSpec::Ula { length } => ArrayCurve::line_segment(length / unit)?,
        };
        let source = match spec.source {
            SourceSpec::Cartesian([x, y]) => Position::try_new(x / unit, y / unit)?,
            SourceSpec::Polar { radius, theta } => {
                ensure_finite("source R", radius)?;
                ensure_finite("source theta", theta)?;
                if radius < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "source radius must be non-negative, got {radius}"
                    )));
                }
                Position::from_polar(radius / unit, theta)
            }
        };
        let wavenumber = match spec.k_s {
            Some(k) => Wavenumber::new(k * unit)?,
            None => Wavenumber::new(TAU)?,
        };
        if spec.antennas == Some(0) {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        Ok(Self {
            wavenumber,
            curve,
            source,
            antennas: spec.antennas,
            placement: spec.placement.unwrap_or_default(),
        })
    }

    /// Canonical file form in internal units.
    pub fn to_file_spec(&self) -> ScenarioFile {
        let curve = match self.curve {
            ArrayCurve::CircularArc {
                radius,
                half_aperture,
            } => CurveSpec::Circular {
                radius,
                psi: half_aperture,
            },
            ArrayCurve::LineSegment { length } => CurveSpec::Ula { length },
        };
        ScenarioFile {
            curve,
            antennas: self.antennas,
            k_s: Some(self.wavenumber.value()),
            source: SourceSpec::Cartesian([self.source.x, self.source.y]),
            lambda_s: None,
            placement: Some(self.placement),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ScenarioFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed scenario: {e}")))?;
        Self::from_file_spec(&spec)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file_spec()).expect("scenario serializes")
    }
}
