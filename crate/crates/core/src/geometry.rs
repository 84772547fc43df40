//! Planar positions and the parametric curves that carry the array.
//!
//! Lengths are expressed in carrier wavelengths throughout the crate, so the
//! default wave number is `2π`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Cartesian point (or vector) in the array plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Checked constructor rejecting non-finite components.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        ensure_finite("x", x)?;
        ensure_finite("y", y)?;
        Ok(Self { x, y })
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dot(self, other: Position) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn distance(self, other: Position) -> f64 {
        (self - other).norm()
    }

    pub fn to_polar(self) -> PolarPosition {
        PolarPosition::from(self)
    }
}

impl Add for Position {
    type Output = Position;
    #[inline]
    fn add(self, rhs: Position) -> Position {
        Position::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Position {
    type Output = Position;
    #[inline]
    fn sub(self, rhs: Position) -> Position {
        Position::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Position> for f64 {
    type Output = Position;
    #[inline]
    fn mul(self, rhs: Position) -> Position {
        Position::new(self * rhs.x, self * rhs.y)
    }
}

/// Polar description `(R, θ)` with `R ≥ 0` and `θ ∈ (-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPosition {
    pub radius: f64,
    pub angle: f64,
}

impl PolarPosition {
    pub fn new(radius: f64, angle: f64) -> Result<Self> {
        ensure_finite("radius", radius)?;
        ensure_finite("angle", angle)?;
        if radius < 0.0 {
            return Err(Error::InvalidInput(format!(
                "polar radius must be non-negative, got {radius}"
            )));
        }
        Ok(Self {
            radius,
            angle: normalize_angle(angle),
        })
    }

    pub fn to_cartesian(self) -> Position {
        Position::from_polar(self.radius, self.angle)
    }
}

impl From<Position> for PolarPosition {
    fn from(p: Position) -> Self {
        let radius = p.norm();
        // atan2(±0, -x) returns ±π; fold -π onto π.
        let angle = if radius == 0.0 {
            0.0
        } else {
            normalize_angle(p.y.atan2(p.x))
        };
        Self { radius, angle }
    }
}

/// Polar form of `x_s - x̃_s`: the separation `(R_ss̃, θ_ss̃)` between the
/// true and the tentative source. The angle is 0 for coincident points.
pub fn separation(source: Position, tentative: Position) -> PolarPosition {
    PolarPosition::from(source - tentative)
}

/// Parametric array support `x(τ)`, `τ ∈ 𝒯`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayCurve {
    /// Arc of the origin-centred circle, `x(τ) = R(cos τ, sin τ)`, `τ ∈ [-ψ, ψ]`.
    CircularArc { radius: f64, half_aperture: f64 },
    /// Segment on the x-axis, `x(τ) = (τ, 0)`, `τ ∈ [-L/2, L/2]`.
    LineSegment { length: f64 },
}

impl ArrayCurve {
    pub fn circular_arc(radius: f64, half_aperture: f64) -> Result<Self> {
        ensure_finite("radius", radius)?;
        ensure_finite("half_aperture", half_aperture)?;
        if radius <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "circular array radius must be positive, got {radius}"
            )));
        }
        if !(half_aperture > 0.0 && half_aperture <= PI) {
            return Err(Error::InvalidInput(format!(
                "half aperture must lie in (0, π], got {half_aperture}"
            )));
        }
        Ok(Self::CircularArc {
            radius,
            half_aperture,
        })
    }

    pub fn line_segment(length: f64) -> Result<Self> {
        ensure_finite("length", length)?;
        if length <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "array length must be positive, got {length}"
            )));
        }
        Ok(Self::LineSegment { length })
    }

    /// Parameter domain `[τ_min, τ_max]`.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            Self::CircularArc { half_aperture, .. } => (-half_aperture, half_aperture),
            Self::LineSegment { length } => (-0.5 * length, 0.5 * length),
        }
    }

    /// `|𝒯|`.
    pub fn domain_length(&self) -> f64 {
        let (a, b) = self.domain();
        b - a
    }

    /// Whether `τ` lies in the domain, up to a few ulps of slack at the ends.
    pub fn contains(&self, tau: f64) -> bool {
        let (a, b) = self.domain();
        let slack = 8.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        tau >= a - slack && tau <= b + slack
    }

    fn check(&self, tau: f64) -> Result<()> {
        if self.contains(tau) {
            Ok(())
        } else {
            let (min, max) = self.domain();
            Err(Error::Domain { tau, min, max })
        }
    }

    pub fn point_at(&self, tau: f64) -> Result<Position> {
        self.check(tau)?;
        Ok(self.point(tau))
    }

    pub fn tangent_norm_at(&self, tau: f64) -> Result<f64> {
        self.check(tau)?;
        Ok(self.tangent_norm(tau))
    }

    /// `x(τ)` without the domain check.
    #[inline]
    pub fn point(&self, tau: f64) -> Position {
        match *self {
            Self::CircularArc { radius, .. } => Position::from_polar(radius, tau),
            Self::LineSegment { .. } => Position::new(tau, 0.0),
        }
    }

    /// `ẋ(τ)` without the domain check.
    #[inline]
    pub fn tangent(&self, tau: f64) -> Position {
        match *self {
            Self::CircularArc { radius, .. } => {
                let (s, c) = tau.sin_cos();
                Position::new(-radius * s, radius * c)
            }
            Self::LineSegment { .. } => Position::new(1.0, 0.0),
        }
    }

    /// `‖ẋ(τ)‖`; both supported curves have constant speed.
    #[inline]
    pub fn tangent_norm(&self, _tau: f64) -> f64 {
        match *self {
            Self::CircularArc { radius, .. } => radius,
            Self::LineSegment { .. } => 1.0,
        }
    }

    /// Euclidean distance from `p` to the curve.
    pub fn distance_to(&self, p: Position) -> f64 {
        match *self {
            Self::CircularArc {
                radius,
                half_aperture,
            } => {
                let r = p.norm();
                if r == 0.0 {
                    return radius;
                }
                let theta = p.y.atan2(p.x);
                if theta.abs() <= half_aperture {
                    (r - radius).abs()
                } else {
                    let a = p.distance(Position::from_polar(radius, half_aperture));
                    let b = p.distance(Position::from_polar(radius, -half_aperture));
                    a.min(b)
                }
            }
            Self::LineSegment { length } => {
                let half = 0.5 * length;
                let cx = p.x.clamp(-half, half);
                p.distance(Position::new(cx, 0.0))
            }
        }
    }
}

/// Where antenna parameters sit inside each of the `N` cells of width `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodePlacement {
    /// `τ_i = τ_min + (i + ½)δ`: symmetric, never duplicates the seam of a full circle.
    #[default]
    Midpoint,
    /// `τ_i = τ_min + iδ`: anchored at the left end of the domain.
    Endpoint,
}

impl NodePlacement {
    pub fn offset(self) -> f64 {
        match self {
            Self::Midpoint => 0.5,
            Self::Endpoint => 0.0,
        }
    }
}

impl std::str::FromStr for NodePlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Self::Midpoint),
            "endpoint" => Ok(Self::Endpoint),
            other => Err(Error::InvalidInput(format!(
                "unknown node placement '{other}' (expected midpoint or endpoint)"
            ))),
        }
    }
}

/// Uniform discretization of a curve domain into `N` antenna parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    step: f64,
    placement: NodePlacement,
    nodes: Vec<f64>,
}

impl SamplingGrid {
    pub fn new(curve: &ArrayCurve, n: usize, placement: NodePlacement) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("antenna count must be at least 1".into()));
        }
        let (a, _) = curve.domain();
        let step = curve.domain_length() / n as f64;
        let off = placement.offset();
        let nodes = (0..n).map(|i| a + (i as f64 + off) * step).collect();
        Ok(Self {
            step,
            placement,
            nodes,
        })
    }

    pub fn midpoint(curve: &ArrayCurve, n: usize) -> Result<Self> {
        Self::new(curve, n, NodePlacement::Midpoint)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Parametric step `δ = |𝒯| / N`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn placement(&self) -> NodePlacement {
        self.placement
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}
