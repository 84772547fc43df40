//! Ambiguity function `A(x̃_s, x_s) = ∫ g dτ` for continuous and sampled
//! arrays, and its evaluation over grids of tentative positions.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Position, SamplingGrid};
use crate::scenario::Scenario;
use crate::specfun::quadrature::{oscillatory_quadrature, CompensatedSum, QuadratureConfig, QuadratureResult};
use crate::spectrum::max_abs_on_interval;
use crate::wavefield::{PairIntegrand, SINGULARITY_GUARD};

/// Continuous-aperture AF by oscillatory quadrature with the default tolerance.
pub fn af_continuous(scenario: &Scenario, tentative: Position) -> Result<Complex64> {
    Ok(af_continuous_with(scenario, tentative, &QuadratureConfig::default())?.value)
}

pub fn af_continuous_with(
    scenario: &Scenario,
    tentative: Position,
    config: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let integrand = scenario.integrand(tentative)?;
    let (a, b) = scenario.curve.domain();
    let rate = max_abs_on_interval(|t| integrand.phase_rate(t), a, b, 64)?;
    let cycles = rate * (b - a) / TAU;
    oscillatory_quadrature(|t| integrand.eval(t), a, b, cycles, config)
}

/// Sampled-array AF `Σ_i g(τ_i) δ`.
pub fn af_discrete(scenario: &Scenario, grid: &SamplingGrid, tentative: Position) -> Result<Complex64> {
    let curve = scenario.curve;
    for p in [scenario.source, tentative] {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite position ({}, {})", p.x, p.y)));
        }
    }
    let integrand = PairIntegrand::new_unchecked(
        curve,
        scenario.source,
        tentative,
        scenario.wavenumber,
    );
    let mut acc = CompensatedSum::new();
    for &tau in grid.nodes() {
        let x = curve.point(tau);
        for p in [scenario.source, tentative] {
            let d = x.distance(p);
            if d < SINGULARITY_GUARD {
                return Err(Error::Singularity {
                    x: p.x,
                    y: p.y,
                    distance: d,
                });
            }
        }
        acc.add(integrand.eval(tau));
    }
    Ok(acc.total() * grid.step())
}

/// Evaluation mode for a field.
#[derive(Debug, Clone, PartialEq)]
pub enum AfMode {
    Continuous(QuadratureConfig),
    Discrete(SamplingGrid),
}

impl AfMode {
    /// `A(x̃_s, x_s)` in this mode.
    pub fn evaluate(&self, scenario: &Scenario, tentative: Position) -> Result<Complex64> {
        match self {
            Self::Continuous(cfg) => Ok(af_continuous_with(scenario, tentative, cfg)?.value),
            Self::Discrete(grid) => af_discrete(scenario, grid, tentative),
        }
    }

    /// Matched value `A(x_s, x_s)`, the normalization reference.
    pub fn matched(&self, scenario: &Scenario) -> Result<f64> {
        Ok(self.evaluate(scenario, scenario.source)?.re)
    }
}

/// Uniform axis of `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidInput(format!("axis bounds must be finite: [{min}, {max}]")));
        }
        if count == 0 {
            return Err(Error::InvalidInput("axis needs at least one point".into()));
        }
        if count > 1 && max <= min {
            return Err(Error::InvalidInput(format!(
                "axis must be strictly increasing, got [{min}, {max}]"
            )));
        }
        Ok(Self { min, max, count })
    }

    pub fn single(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            count: 1,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Tentative-position lattice. Values are stored row-major with the first
/// axis (`x` or radius) varying fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldAxes {
    Cartesian { x: Axis, y: Axis },
    /// `x̃ = center + r (cos a, sin a)`.
    Polar { radius: Axis, angle: Axis, center: Position },
}

impl FieldAxes {
    /// `(inner, outer)` counts.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Self::Cartesian { x, y } => (x.count, y.count),
            Self::Polar { radius, angle, .. } => (radius.count, angle.count),
        }
    }

    pub fn len(&self) -> usize {
        let (a, b) = self.shape();
        a * b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis coordinates `(u, v)` of flat index `idx`.
    pub fn coordinates(&self, idx: usize) -> (f64, f64) {
        let (inner, _) = self.shape();
        let (i, j) = (idx % inner, idx / inner);
        match self {
            Self::Cartesian { x, y } => (x.value(i), y.value(j)),
            Self::Polar { radius, angle, .. } => (radius.value(i), angle.value(j)),
        }
    }

    pub fn position(&self, idx: usize) -> Position {
        let (u, v) = self.coordinates(idx);
        match self {
            Self::Cartesian { .. } => Position::new(u, v),
            Self::Polar { center, .. } => *center + Position::from_polar(u, v),
        }
    }
}

/// AF values over a [`FieldAxes`] lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub axes: FieldAxes,
    pub values: Vec<Complex64>,
    /// `A(x_s, x_s)` of the same mode.
    pub matched: f64,
    /// Nodes rejected because a position lies on the array.
    pub singular_nodes: usize,
    /// Nodes whose quadrature exhausted its budget.
    pub unconverged_nodes: usize,
}

impl ComplexField {
    pub fn nan_count(&self) -> usize {
        self.singular_nodes + self.unconverged_nodes
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (inner, _) = self.axes.shape();
        self.values[j * inner + i]
    }

    /// `|A| / A(x_s, x_s)`.
    pub fn normalized_magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm() / self.matched).collect()
    }
}

/// Evaluates the AF at every lattice node in parallel. Singular or
/// unconverged nodes become NaN and are counted instead of aborting.
pub fn af_field(scenario: &Scenario, mode: &AfMode, axes: FieldAxes) -> Result<ComplexField> {
    let matched = mode.matched(scenario)?;
    let results: Vec<std::result::Result<Complex64, Error>> = (0..axes.len())
        .into_par_iter()
        .map(|idx| mode.evaluate(scenario, axes.position(idx)))
        .collect();
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let mut singular_nodes = 0;
    let mut unconverged_nodes = 0;
    let mut values = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(v) => values.push(v),
            Err(Error::Singularity { .. }) => {
                singular_nodes += 1;
                values.push(nan);
            }
            Err(Error::Convergence { .. }) => {
                unconverged_nodes += 1;
                values.push(nan);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ComplexField {
        axes,
        values,
        matched,
        singular_nodes,
        unconverged_nodes,
    })
}
