//! Scalar narrowband wavefield: propagation coefficients, the pair-product
//! signal `g(τ) = z(x(τ); x_s) z*(x(τ); x̃_s) ‖ẋ(τ)‖` and its local phase,
//! amplitude and wave number.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::geometry::{ArrayCurve, Position};

/// Minimum admissible source-to-antenna distance, in wavelengths.
pub const SINGULARITY_GUARD: f64 = 1e-9;

/// Carrier wave number `k_s = 2π/λ_s`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(k: f64) -> Result<Self> {
        ensure_finite("wave number", k)?;
        if k <= 0.0 {
            return Err(Error::InvalidInput(format!("wave number must be positive, got {k}")));
        }
        Ok(Self(k))
    }

    pub fn from_wavelength(lambda: f64) -> Result<Self> {
        ensure_finite("wavelength", lambda)?;
        if lambda <= 0.0 {
            return Err(Error::InvalidInput(format!("wavelength must be positive, got {lambda}")));
        }
        Ok(Self(TAU / lambda))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn wavelength(self) -> f64 {
        TAU / self.0
    }
}

impl Default for Wavenumber {
    /// Unit wavelength.
    fn default() -> Self {
        Self(TAU)
    }
}

fn guard(x: Position, source: Position) -> Result<f64> {
    let d = x.distance(source);
    if d < SINGULARITY_GUARD {
        Err(Error::Singularity {
            x: source.x,
            y: source.y,
            distance: d,
        })
    } else {
        Ok(d)
    }
}

/// `z(x; x_s) = e^{−jk‖x − x_s‖} / ‖x − x_s‖`.
pub fn propagation_coeff(x: Position, source: Position, k: Wavenumber) -> Result<Complex64> {
    let d = guard(x, source)?;
    Ok(Complex64::from_polar(1.0 / d, -k.value() * d))
}

/// `‖x − x_s‖ − ‖x − x̃_s‖` without cancellation for nearby sources.
#[inline]
fn range_difference(x: Position, source: Position, tentative: Position, d_s: f64, d_t: f64) -> f64 {
    let sum = source + tentative;
    let num = (tentative - source).dot(2.0 * x - sum);
    num / (d_s + d_t)
}

/// Local phase, amplitude and wave number of `g` at one curve parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpSample {
    pub tau: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub local_wavenumber: f64,
}

impl ChirpSample {
    /// `α e^{−jφ}`.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, -self.phase)
    }
}

/// Pair-product integrand for fixed `(x_s, x̃_s)`, validated once so that the
/// hot loops can evaluate it without per-node checks.
#[derive(Debug, Clone, Copy)]
pub struct PairIntegrand {
    curve: ArrayCurve,
    source: Position,
    tentative: Position,
    k: f64,
}

impl PairIntegrand {
    /// Fails if either source lies within [`SINGULARITY_GUARD`] of the curve.
    pub fn new(
        curve: ArrayCurve,
        source: Position,
        tentative: Position,
        k: Wavenumber,
    ) -> Result<Self> {
        for p in [source, tentative] {
            ensure_finite("source x", p.x)?;
            ensure_finite("source y", p.y)?;
            let d = curve.distance_to(p);
            if d < SINGULARITY_GUARD {
                return Err(Error::Singularity {
                    x: p.x,
                    y: p.y,
                    distance: d,
                });
            }
        }
        Ok(Self {
            curve,
            source,
            tentative,
            k: k.value(),
        })
    }

    /// Skips the curve-distance check; callers guard the nodes they evaluate.
    pub(crate) fn new_unchecked(
        curve: ArrayCurve,
        source: Position,
        tentative: Position,
        k: Wavenumber,
    ) -> Self {
        Self {
            curve,
            source,
            tentative,
            k: k.value(),
        }
    }

    pub fn curve(&self) -> &ArrayCurve {
        &self.curve
    }

    /// `(α, φ)` at `τ`.
    #[inline]
    pub fn amplitude_phase(&self, tau: f64) -> (f64, f64) {
        let x = self.curve.point(tau);
        let d_s = x.distance(self.source);
        let d_t = x.distance(self.tentative);
        let alpha = self.curve.tangent_norm(tau) / (d_s * d_t);
        let phi = self.k * range_difference(x, self.source, self.tentative, d_s, d_t);
        (alpha, phi)
    }

    /// `g(τ)`.
    #[inline]
    pub fn eval(&self, tau: f64) -> Complex64 {
        let (alpha, phi) = self.amplitude_phase(tau);
        Complex64::from_polar(alpha, -phi)
    }

    /// `φ̇(τ)`.
    #[inline]
    pub fn phase_rate(&self, tau: f64) -> f64 {
        let x = self.curve.point(tau);
        let t = self.curve.tangent(tau);
        let a = x - self.source;
        let b = x - self.tentative;
        self.k * (a.dot(t) / a.norm() - b.dot(t) / b.norm())
    }

    pub fn sample(&self, tau: f64) -> ChirpSample {
        let (amplitude, phase) = self.amplitude_phase(tau);
        ChirpSample {
            tau,
            amplitude,
            phase,
            local_wavenumber: self.phase_rate(tau),
        }
    }
}

fn checked_point(
    curve: &ArrayCurve,
    tau: f64,
    source: Position,
    tentative: Position,
) -> Result<(Position, f64, f64)> {
    let x = curve.point_at(tau)?;
    let d_s = guard(x, source)?;
    let d_t = guard(x, tentative)?;
    Ok((x, d_s, d_t))
}

/// `g(τ) = z(x(τ); x_s) z*(x(τ); x̃_s) ‖ẋ(τ)‖ = α(τ) e^{−jφ(τ)}`.
pub fn pair_product(
    curve: &ArrayCurve,
    tau: f64,
    source: Position,
    tentative: Position,
    k: Wavenumber,
) -> Result<Complex64> {
    Ok(chirp_sample(curve, tau, source, tentative, k)?.value())
}

/// `φ(τ) = k(‖x(τ) − x_s‖ − ‖x(τ) − x̃_s‖)`.
pub fn local_phase(
    curve: &ArrayCurve,
    tau: f64,
    source: Position,
    tentative: Position,
    k: Wavenumber,
) -> Result<f64> {
    let (x, d_s, d_t) = checked_point(curve, tau, source, tentative)?;
    Ok(k.value() * range_difference(x, source, tentative, d_s, d_t))
}

/// `α(τ) = ‖ẋ(τ)‖ / (‖x(τ) − x_s‖ ‖x(τ) − x̃_s‖)`.
pub fn local_amplitude(
    curve: &ArrayCurve,
    tau: f64,
    source: Position,
    tentative: Position,
) -> Result<f64> {
    let (_, d_s, d_t) = checked_point(curve, tau, source, tentative)?;
    Ok(curve.tangent_norm(tau) / (d_s * d_t))
}

/// Analytic `φ̇(τ)`.
pub fn local_wavenumber(
    curve: &ArrayCurve,
    tau: f64,
    source: Position,
    tentative: Position,
    k: Wavenumber,
) -> Result<f64> {
    Ok(chirp_sample(curve, tau, source, tentative, k)?.local_wavenumber)
}

pub fn chirp_sample(
    curve: &ArrayCurve,
    tau: f64,
    source: Position,
    tentative: Position,
    k: Wavenumber,
) -> Result<ChirpSample> {
    checked_point(curve, tau, source, tentative)?;
    Ok(PairIntegrand::new_unchecked(*curve, source, tentative, k).sample(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn k() -> Wavenumber {
        Wavenumber::default()
    }

    #[test]
    fn wavenumber_construction() {
        assert_relative_eq!(Wavenumber::from_wavelength(0.5).unwrap().value(), 4.0 * PI);
        assert_relative_eq!(Wavenumber::new(PI).unwrap().wavelength(), 2.0);
        assert!(Wavenumber::new(0.0).is_err());
        assert!(Wavenumber::from_wavelength(-1.0).is_err());
    }

    #[test]
    fn propagation_examples() {
        let o = Position::ORIGIN;
        let z = propagation_coeff(Position::new(1.0, 0.0), o, k()).unwrap();
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let z = propagation_coeff(Position::new(2.0, 0.0), o, k()).unwrap();
        assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let z = propagation_coeff(Position::new(0.25, 0.0), o, k()).unwrap();
        assert!((z - Complex64::new(0.0, -4.0)).norm() < 1e-14);
        assert!(matches!(
            propagation_coeff(o, o, k()),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn matched_pair_is_real_positive() {
        let ula = ArrayCurve::line_segment(500.0).unwrap();
        let s = Position::new(0.0, 1000.0);
        let g = pair_product(&ula, 0.0, s, s, k()).unwrap();
        assert_eq!(g.im, 0.0);
        assert_relative_eq!(g.re, 1e-6, max_relative = 1e-14);
        for tau in [-250.0, -3.0, 100.0] {
            let g = pair_product(&ula, tau, s, s, k()).unwrap();
            let d = ula.point(tau).distance(s);
            assert_eq!(g.im, 0.0);
            assert_relative_eq!(g.re, 1.0 / (d * d), max_relative = 1e-14);
            assert_eq!(local_phase(&ula, tau, s, s, k()).unwrap(), 0.0);
            assert_eq!(local_wavenumber(&ula, tau, s, s, k()).unwrap(), 0.0);
        }
    }

    #[test]
    fn circular_pair_product_example() {
        let ca = ArrayCurve::circular_arc(1000.0, PI).unwrap();
        let s = Position::ORIGIN;
        let t = Position::new(3.0, 0.0);
        let sample = chirp_sample(&ca, 0.0, s, t, k()).unwrap();
        assert_relative_eq!(sample.amplitude, 1000.0 / (1000.0 * 997.0), max_relative = 1e-14);
        assert_relative_eq!(sample.phase, TAU * 3.0, max_relative = 1e-12);
        let direct = propagation_coeff(ca.point(0.0), s, k()).unwrap()
            * propagation_coeff(ca.point(0.0), t, k()).unwrap().conj()
            * 1000.0;
        let g = pair_product(&ca, 0.0, s, t, k()).unwrap();
        assert!((g - direct).norm() <= 1e-12 * g.norm());
    }

    #[test]
    fn collinear_phase() {
        let ula = ArrayCurve::line_segment(2.0).unwrap();
        let phi = local_phase(&ula, 0.0, Position::new(10.0, 0.0), Position::new(20.0, 0.0), k())
            .unwrap();
        assert_relative_eq!(phi, -20.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn singular_and_domain_errors() {
        let ula = ArrayCurve::line_segment(10.0).unwrap();
        let on = Position::new(1.0, 0.0);
        let off = Position::new(0.0, 5.0);
        assert!(matches!(
            pair_product(&ula, 1.0, on, off, k()),
            Err(Error::Singularity { .. })
        ));
        assert!(matches!(
            pair_product(&ula, 6.0, off, off, k()),
            Err(Error::Domain { .. })
        ));
        assert!(PairIntegrand::new(ula, off, on, k()).is_err());
        assert!(PairIntegrand::new(ula, off, Position::new(7.0, 0.0), k()).is_ok());
    }

    #[test]
    fn circular_far_source_rate() {
        // exact φ̇ ≈ k R_ss̃ sin(τ − θ_ss̃) when R_ca ≫ R_ss̃
        let ca = ArrayCurve::circular_arc(1000.0, PI).unwrap();
        let (r, theta) = (5.0, 0.6);
        let s = Position::new(1.0, -2.0);
        let t = s - Position::from_polar(r, theta);
        let scale = TAU * r;
        for i in 0..=400 {
            let tau = -PI + TAU * i as f64 / 400.0;
            let exact = local_wavenumber(&ca, tau, s, t, k()).unwrap();
            let approx = scale * (tau - theta).sin();
            assert!((exact - approx).abs() <= 0.01 * scale, "tau={tau}: {exact} vs {approx}");
        }
    }

    #[test]
    fn fresnel_regime_rate() {
        // φ̇ ≈ k(τΔ − Ω) once R_s ≫ L; at R_s = 10L the cubic remainder is below 1%
        let ula = ArrayCurve::line_segment(500.0).unwrap();
        let (th_s, th_t) = (FRAC_PI_2, FRAC_PI_2 + 0.01);
        let (r_s, r_t) = (5000.0, 4800.0);
        let s = Position::from_polar(r_s, th_s);
        let t = Position::from_polar(r_t, th_t);
        let omega = th_s.cos() - th_t.cos();
        let delta = 1.0 / r_s - 1.0 / r_t;
        let peak = TAU * (250.0 * delta.abs() + omega.abs());
        for i in 0..=200 {
            let tau = -250.0 + 2.5 * i as f64;
            let exact = local_wavenumber(&ula, tau, s, t, k()).unwrap();
            let approx = TAU * (tau * delta - omega);
            assert!((exact - approx).abs() <= 0.01 * peak, "tau={tau}: {exact} vs {approx}");
        }
    }

    #[test]
    fn far_field_rate_is_constant() {
        let ula = ArrayCurve::line_segment(500.0).unwrap();
        let radius = 1e6 * 500.0;
        for &(a, b) in &[(0.3, 2.0), (FRAC_PI_2, 1.0), (0.1, 3.0)] {
            let s = Position::from_polar(radius, a);
            let t = Position::from_polar(radius, b);
            let want = -TAU * (f64::cos(a) - f64::cos(b));
            for tau in [-250.0, -100.0, 0.0, 125.0, 250.0] {
                let rate = local_wavenumber(&ula, tau, s, t, k()).unwrap();
                assert!((rate - want).abs() <= 1e-3 * want.abs(), "{rate} vs {want}");
            }
        }
    }

    fn arb_case() -> impl Strategy<Value = (ArrayCurve, f64, Position, Position)> {
        let ca = (0.0f64..1.0, -50.0f64..50.0, -50.0f64..50.0, -50.0f64..50.0, -50.0f64..50.0)
            .prop_map(|(f, a, b, c, d)| {
                let curve = ArrayCurve::circular_arc(1000.0, PI).unwrap();
                (curve, -PI + f * TAU, Position::new(a, b), Position::new(c, d))
            });
        let ula = (0.0f64..1.0, -400.0f64..400.0, 20.0f64..2000.0, -400.0f64..400.0, 20.0f64..2000.0)
            .prop_map(|(f, a, b, c, d)| {
                let curve = ArrayCurve::line_segment(500.0).unwrap();
                (curve, -250.0 + f * 500.0, Position::new(a, b), Position::new(c, d))
            });
        prop_oneof![ca, ula]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn hermitian_symmetry((curve, tau, s, t) in arb_case()) {
            let a = pair_product(&curve, tau, s, t, k()).unwrap();
            let b = pair_product(&curve, tau, t, s, k()).unwrap();
            prop_assert_eq!(a, b.conj());
        }

        #[test]
        fn modulus_is_amplitude((curve, tau, s, t) in arb_case()) {
            let g = pair_product(&curve, tau, s, t, k()).unwrap();
            let alpha = local_amplitude(&curve, tau, s, t).unwrap();
            prop_assert!((g.norm() - alpha).abs() <= 1e-14 * alpha);
        }

        #[test]
        fn reconstruction_matches_coefficient_product(
            f in 0.0f64..1.0, a in -30.0f64..30.0, b in -30.0f64..30.0,
            c in -30.0f64..30.0, d in -30.0f64..30.0,
        ) {
            let curve = ArrayCurve::circular_arc(60.0, PI).unwrap();
            let tau = -PI + f * TAU;
            let (s, t) = (Position::new(a, b), Position::new(c, d));
            let x = curve.point(tau);
            let direct = propagation_coeff(x, s, k()).unwrap()
                * propagation_coeff(x, t, k()).unwrap().conj()
                * curve.tangent_norm(tau);
            let g = pair_product(&curve, tau, s, t, k()).unwrap();
            prop_assert!((g - direct).norm() <= 1e-12 * g.norm());
        }

        #[test]
        fn rate_matches_finite_difference((curve, tau, s, t) in arb_case()) {
            let (lo, hi) = curve.domain();
            let h = 1e-7 * (hi - lo);
            let tau = tau.clamp(lo + h, hi - h);
            let fd = (local_phase(&curve, tau + h, s, t, k()).unwrap()
                - local_phase(&curve, tau - h, s, t, k()).unwrap()) / (2.0 * h);
            let rate = local_wavenumber(&curve, tau, s, t, k()).unwrap();
            prop_assert!((fd - rate).abs() <= 1e-6 * rate.abs().max(1e-2), "{} vs {}", fd, rate);
        }
    }
}
