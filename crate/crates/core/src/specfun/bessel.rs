//! Integer-order Bessel functions of the first kind.
//!
//! Small arguments (`x ≤ 1`) use the ascending power series. Everything else
//! runs Miller's downward recurrence from a start order well past the turning
//! point, normalized by `J₀ + 2 Σ J₂ₘ = 1`.

use crate::error::{Error, Result};

/// Largest order and argument accepted by the kernel.
pub const BESSEL_RANGE_LIMIT: f64 = 1e5;

const SERIES_LIMIT: f64 = 1.0;
const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

/// `J_n(x)` for `n ≥ 0`, `x ≥ 0`.
pub fn bessel_jn(n: u32, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        return Ok(series(n, x));
    }
    Ok(miller(n, x)[n as usize])
}

/// `[J_0(x), …, J_{n_max}(x)]` from a single recurrence sweep.
pub fn bessel_jn_sequence(n_max: u32, x: f64) -> Result<Vec<f64>> {
    check_domain(n_max, x)?;
    if x == 0.0 {
        let mut v = vec![0.0; n_max as usize + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    if x <= SERIES_LIMIT {
        return Ok((0..=n_max).map(|n| series(n, x)).collect());
    }
    let mut v = miller(n_max, x);
    v.truncate(n_max as usize + 1);
    Ok(v)
}

/// `J_n(x)` for any integer order and real argument, via
/// `J_{−n}(x) = (−1)ⁿ J_n(x)` and `J_n(−x) = (−1)ⁿ J_n(x)`.
pub fn bessel_jn_signed(n: i64, x: f64) -> Result<f64> {
    let order = u32::try_from(n.unsigned_abs())
        .map_err(|_| Error::Range(format!("Bessel order {n} out of range")))?;
    let mut v = bessel_jn(order, x.abs())?;
    let odd = order % 2 == 1;
    if odd && n < 0 {
        v = -v;
    }
    if odd && x < 0.0 {
        v = -v;
    }
    Ok(v)
}

/// Turning-point truncation order `⌈x + 10 x^{1/3} + 20⌉` beyond which
/// `J_n(x)` is negligible.
pub fn truncation_order(x: f64) -> u32 {
    let x = x.abs();
    (x + 10.0 * x.cbrt() + 20.0).ceil() as u32
}

fn check_domain(n: u32, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Range(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    if f64::from(n) > BESSEL_RANGE_LIMIT || x > BESSEL_RANGE_LIMIT {
        return Err(Error::Range(format!(
            "Bessel J_{n}({x}) exceeds the supported range (n, x ≤ {BESSEL_RANGE_LIMIT:e})"
        )));
    }
    Ok(())
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for i in 1..=n {
        lead *= half / f64::from(i);
        if lead < 1e-300 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..60 {
        let kf = f64::from(k);
        term *= q / (kf * (kf + f64::from(n)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Normalized values `J_0..=J_M` for `M ≥ n_max`.
fn miller(n_max: u32, x: f64) -> Vec<f64> {
    let top = f64::from(n_max).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()).ceil() as usize;
    start += start % 2;
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * j[k] - j[k + 1];
        j[k - 1] = prev;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * prev;
        }
        if prev.abs() > RESCALE_THRESHOLD {
            for v in &mut j[k - 1..] {
                *v *= RESCALE_FACTOR;
            }
            norm *= RESCALE_FACTOR;
        }
    }
    norm += j[0];
    for v in &mut j {
        *v /= norm;
    }
    j.truncate(start + 1);
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    /// `(1/2π) ∮ cos(nθ − x sin θ) dθ` by the trapezoid rule, which is
    /// spectrally accurate for this periodic integrand.
    fn integral_oracle(n: u32, x: f64) -> f64 {
        let m = 10_000;
        let h = TAU / m as f64;
        let s: f64 = (0..m)
            .map(|i| {
                let t = i as f64 * h;
                (f64::from(n) * t - x * t.sin()).cos()
            })
            .sum();
        s / m as f64
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_jn(0, 0.0).unwrap(), 1.0);
        for n in 1..10 {
            assert_eq!(bessel_jn(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_jn(0, 2.404826).unwrap().abs() < 1e-6);
    }

    #[test]
    fn tabulated_values() {
        let cases = [
            (0, 1.0, 0.7651976865579666),
            (1, 1.0, 0.4400505857449335),
            (0, 10.0, -0.2459357644513483),
            (5, 10.0, -0.2340615281867936),
            (10, 10.0, 0.2074861066333589),
            (50, 1.0, 2.906004948173688e-80),
            (100, 100.0, 0.09636667329586155),
        ];
        for (n, x, want) in cases {
            let got = bessel_jn(n, x).unwrap();
            assert!(
                (got - want).abs() <= 1e-14_f64.max(1e-12 * want.abs()),
                "J_{n}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn large_arguments_match_oracle() {
        for &(n, x) in &[(0, 5000.0), (1, 4999.5), (300, 2500.0), (5000, 5000.0), (4000, 3000.0)] {
            let got = bessel_jn(n, x).unwrap();
            // 10⁴ nodes would alias at these bandwidths, so refine the oracle.
            let m = 40_000;
            let h = TAU / m as f64;
            let want: f64 = (0..m)
                .map(|i| {
                    let t = i as f64 * h;
                    (f64::from(n) * t - x * t.sin()).cos()
                })
                .sum::<f64>()
                / m as f64;
            assert!((got - want).abs() <= 1e-10, "J_{n}({x}): {got} vs {want}");
        }
    }

    #[test]
    fn sequence_matches_pointwise() {
        for &x in &[0.3, 1.0, 7.5, 120.0] {
            let seq = bessel_jn_sequence(40, x).unwrap();
            assert_eq!(seq.len(), 41);
            for (n, v) in seq.iter().enumerate() {
                let single = bessel_jn(n as u32, x).unwrap();
                assert!((v - single).abs() < 1e-15, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn parity_identities() {
        let x = 3.7;
        let j3 = bessel_jn(3, x).unwrap();
        assert_eq!(bessel_jn_signed(-3, x).unwrap(), -j3);
        assert_eq!(bessel_jn_signed(3, -x).unwrap(), -j3);
        assert_eq!(bessel_jn_signed(-3, -x).unwrap(), j3);
        assert_eq!(bessel_jn_signed(-4, -x).unwrap(), bessel_jn(4, x).unwrap());
    }

    #[test]
    fn range_errors() {
        assert!(matches!(bessel_jn(0, -1.0), Err(Error::Range(_))));
        assert!(matches!(bessel_jn(0, f64::NAN), Err(Error::Range(_))));
        assert!(matches!(bessel_jn(0, 2e5), Err(Error::Range(_))));
        assert!(matches!(bessel_jn(200_000, 1.0), Err(Error::Range(_))));
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(truncation_order(0.0), 20);
        assert_eq!(truncation_order(1000.0), 1120);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_integral_oracle(n in 0u32..=200, x in 0.0f64..400.0) {
            let got = bessel_jn(n, x).unwrap();
            let want = integral_oracle(n, x);
            prop_assert!((got - want).abs() <= 1e-8, "J_{}({}) = {} vs {}", n, x, got, want);
        }

        #[test]
        fn recurrence_residual(n in 1u32..=500, x in 1.0f64..1000.0) {
            let s = bessel_jn_sequence(n + 1, x).unwrap();
            let n_us = n as usize;
            let r = s[n_us - 1] + s[n_us + 1] - 2.0 * f64::from(n) / x * s[n_us];
            prop_assert!(r.abs() <= 1e-9, "residual {}", r);
        }

        #[test]
        fn normalization_identity(x in 0.0f64..2000.0) {
            let m = truncation_order(x);
            let s = bessel_jn_sequence(m, x).unwrap();
            let total = s[0] + 2.0 * s.iter().skip(2).step_by(2).sum::<f64>();
            prop_assert!((total - 1.0).abs() <= 1e-9, "sum {}", total);
        }
    }
}
