use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use chirp_af::ambiguity::{af_continuous, af_discrete};
use chirp_af::circular::{af_ca_series_continuous, af_ca_series_discrete, alias_fronts, CircularScenario};
use chirp_af::geometry::SamplingGrid;
use chirp_af::ula::{fresnel_distance, mismatch, radial_alias_bounds, ula_aliasing, UlaScenario};
use chirp_af::{ArrayCurve, NodePlacement, PolarPosition, Position, Scenario, Wavenumber};
use proptest::prelude::*;

fn k() -> Wavenumber {
    Wavenumber::default()
}

fn circle(r_ca: f64, psi: f64) -> Scenario {
    Scenario::new(ArrayCurve::circular_arc(r_ca, psi).unwrap(), Position::ORIGIN, k()).unwrap()
}

#[test]
fn discrete_series_reproduces_alias_ring() {
    // near kR = N the |p| = 1 terms are O(1); compare with the exact sum
    let r_ca = 1e6;
    let s = circle(r_ca, PI).with_antennas(256);
    let g = s.grid().unwrap();
    let peak_d = af_discrete(&s, &g, s.source).unwrap().re;
    let peak_s = af_ca_series_discrete(0.0, 0.0, PI, r_ca, 256, NodePlacement::Midpoint, k(), None)
        .unwrap()
        .value
        .re;
    for i in 0..=40 {
        let r = 128.0 / PI * (0.95 + 0.0025 * i as f64);
        let theta = 0.0;
        let direct = af_discrete(&s, &g, Position::ORIGIN - Position::from_polar(r, theta)).unwrap().norm() / peak_d;
        let series = af_ca_series_discrete(r, theta, PI, r_ca, 256, NodePlacement::Midpoint, k(), None)
            .unwrap()
            .value
            .norm()
            / peak_s;
        assert!((direct - series).abs() <= 0.05, "r={r}: {direct} vs {series}");
    }
}

#[test]
fn discrete_series_tracks_both_placements_on_arc() {
    let r_ca = 1e6;
    for placement in [NodePlacement::Midpoint, NodePlacement::Endpoint] {
        let s = circle(r_ca, FRAC_PI_2).with_antennas(64).with_placement(placement);
        let g = s.grid().unwrap();
        for (r, theta) in [(3.0, 0.2), (9.0, 1.7), (14.0, -2.4)] {
            let t = Position::ORIGIN - Position::from_polar(r, theta);
            let direct = af_discrete(&s, &g, t).unwrap();
            let series = af_ca_series_discrete(r, theta, FRAC_PI_2, r_ca, 64, placement, k(), None).unwrap();
            assert!((direct - series.value).norm() <= 1e-4 * (PI / r_ca), "{placement:?} r={r}");
        }
    }
}

#[test]
fn predicted_fronts_match_circular_scenario() {
    let cs = CircularScenario::new(1000.0, PI, k()).unwrap().with_antennas(256);
    let r_max = cs.alias_radius(0.3).unwrap();
    let fronts = alias_fronts(cs.step().unwrap(), 0.3, PI, 1.0, 100.0);
    assert_eq!(fronts.len(), 2);
    assert!((fronts[0] - r_max).abs() < 1e-12 && (fronts[1] - 2.0 * r_max).abs() < 1e-12);
    let narrow = CircularScenario::new(1000.0, FRAC_PI_4, k()).unwrap().with_antennas(64);
    assert!(narrow.alias_radius(0.0).unwrap() > narrow.alias_radius(FRAC_PI_2).unwrap());
}

#[test]
fn fresnel_distance_error_orders() {
    let r: f64 = 1000.0;
    for tau in [10.0f64, 50.0, 125.0, 250.0] {
        // broadside: the expansion is exact up to the quartic term
        let exact = (r * r + tau * tau).sqrt();
        let err = (fresnel_distance(tau, r, FRAC_PI_2) - exact).abs();
        assert!(err <= tau.powi(4) / (8.0 * r.powi(3)) * 1.0001, "tau={tau}: {err}");
        // elsewhere the τ² cos²θ/(2R) term is what the expansion leaves out
        for theta in [0.4, 1.0, 2.2] {
            let exact = (tau * tau + r * r - 2.0 * tau * r * f64::cos(theta)).sqrt();
            let fresnel = fresnel_distance(tau, r, theta);
            let missing = tau * tau * f64::cos(theta).powi(2) / (2.0 * r);
            let rest = (fresnel - missing - exact).abs();
            assert!(rest <= tau.powi(3) / (r * r), "tau={tau} theta={theta}: {rest}");
        }
    }
}

#[test]
fn ula_field_scan_shows_radial_bounds() {
    let u = UlaScenario::new(500.0, k()).unwrap().with_antennas(32);
    let src = Position::new(0.0, 1000.0);
    let b = radial_alias_bounds(1000.0, 32, 500.0, 1.0).unwrap();
    let mut flips = Vec::new();
    let mut prev = None;
    for i in 0..=2000 {
        let r = 500.0 + i as f64;
        let a = u.analyze(src, Position::new(0.0, r)).unwrap().aliasing.unwrap();
        if prev.is_some_and(|p| p != a) {
            flips.push(r);
        }
        prev = Some(a);
    }
    assert_eq!(flips.len(), 2, "{flips:?}");
    assert!((flips[0] - b.lower).abs() <= 1.0 && (flips[1] - b.upper.unwrap()).abs() <= 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_matches_quadrature_in_far_source_regime(
        r in 0.0f64..15.0,
        theta in -PI..PI,
        psi_idx in 0usize..3,
        scale in 200.0f64..400.0,
    ) {
        let psi = [FRAC_PI_4, FRAC_PI_2, PI][psi_idx];
        let r_ca = scale * r.max(1.0);
        let s = circle(r_ca, psi);
        let t = Position::ORIGIN - Position::from_polar(r, theta);
        let q = af_continuous(&s, t).unwrap() / af_continuous(&s, s.source).unwrap().re;
        let series = af_ca_series_continuous(r, theta, psi, r_ca, k(), None).unwrap().value / (2.0 * psi / r_ca);
        prop_assert!((q - series).norm() <= 1e-2, "{} vs {}", q, series);
    }

    #[test]
    fn folding_rule_agrees_with_bounds_on_broadside(
        r_s in 600.0f64..3000.0, n in 4usize..64, f in 0.1f64..3.0,
    ) {
        let b = radial_alias_bounds(r_s, n, 500.0, 1.0).unwrap();
        let rt = r_s * f;
        let m = mismatch(PolarPosition::new(r_s, FRAC_PI_2).unwrap(), PolarPosition::new(rt, FRAC_PI_2).unwrap()).unwrap();
        let aliasing = ula_aliasing(m, 500.0, n, k());
        // stay clear of the thresholds where rounding decides
        let near = |x: f64| (rt / x - 1.0).abs() < 1e-9;
        if !near(b.lower) && !b.upper.is_some_and(near) {
            prop_assert_eq!(aliasing, !b.contains(rt));
        }
    }

    #[test]
    fn full_aperture_series_is_bessel_zero_order(r in 0.0f64..50.0, theta in -PI..PI) {
        let s = af_ca_series_continuous(r, theta, PI, 1000.0, k(), None).unwrap();
        let j0 = chirp_af::specfun::bessel_jn(0, TAU * r).unwrap();
        prop_assert!((s.value.re * 1000.0 / TAU - j0).abs() <= 1e-12);
        prop_assert!(s.value.im.abs() <= 1e-12 * TAU / 1000.0);
    }
}

#[test]
fn discrete_midpoint_grid_matches_scenario_grid() {
    let s = circle(10.0, 1.0).with_antennas(7);
    assert_eq!(s.grid().unwrap(), SamplingGrid::midpoint(&s.curve, 7).unwrap());
}
