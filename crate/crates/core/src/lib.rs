pub mod ambiguity;
pub mod circular;
pub mod error;
pub mod geometry;
pub mod scenario;
pub mod specfun;
pub mod spectrum;
pub mod ula;
pub mod validation;
pub mod wavefield;

pub use circular::{CircularScenario, SeriesValue};
pub use ambiguity::{AfMode, Axis, ComplexField, FieldAxes};
pub use error::{Error, Result};
pub use geometry::{ArrayCurve, NodePlacement, PolarPosition, Position, SamplingGrid};
pub use scenario::Scenario;
pub use spectrum::{BandLimit, BandLimitMethod, SpectrumGrid};
pub use ula::{RadialBounds, UlaAnalysis, UlaMismatch, UlaScenario};
pub use validation::{CriterionReport, ValidationConfig};
pub use wavefield::{ChirpSample, Wavenumber};
