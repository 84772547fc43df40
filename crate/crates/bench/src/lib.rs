//! Fixture scenarios shared by the benchmarks.

use std::f64::consts::PI;

use chirp_af::{ArrayCurve, Position, Scenario, Wavenumber};

/// Full circle, `R_ca = 1000λ`, source at the centre.
pub fn full_circle() -> Scenario {
    Scenario::new(ArrayCurve::circular_arc(1000.0, PI).unwrap(), Position::ORIGIN, Wavenumber::default()).unwrap()
}

/// `L = 500λ` ULA with the source at `(0, 1000λ)`.
pub fn ula() -> Scenario {
    Scenario::new(ArrayCurve::line_segment(500.0).unwrap(), Position::new(0.0, 1000.0), Wavenumber::default())
        .unwrap()
}
