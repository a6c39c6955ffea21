//! Scalar special-function kernels: the standard normal law, the scaled
//! modified Bessel function of order one and the inverse Gaussian
//! distribution function.
//!
//! Everything here is pure and allocation-free.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || !(0.0..=1.0).contains(&value) {
            return Err(Error::domain(format!("probability must lie in [0, 1], got {value}")));
        }
        Ok(Probability(value))
    }

    /// Clamp a raw value into `[0, 1]`. NaN is rejected.
    pub fn clamped(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::domain("probability is NaN"));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The upper-tail quantile `z` with `Phi(z) = 1 - p`.
    pub fn upper_quantile(self) -> Result<f64> {
        std_normal_quantile(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Probability::new(v)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Standard normal distribution function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// `ln Phi(x)`, accurate in the far lower tail where `Phi` underflows.
pub fn log_std_normal_cdf(x: f64) -> f64 {
    if x > 0.0 {
        return (-std_normal_cdf(-x)).ln_1p();
    }
    if x > -35.0 {
        return std_normal_cdf(x).ln();
    }
    // Mills-ratio asymptotic series; the truncation error is below 1e-12 here.
    let a = -x;
    let a2 = a * a;
    let mut term = 1.0;
    let mut series = 1.0;
    for k in 1..6 {
        term *= -((2 * k - 1) as f64) / a2;
        series += term;
    }
    -0.5 * a2 - a.ln() - LN_SQRT_2PI + series.ln()
}

/// Standard normal quantile `Phi^{-1}(p)` for `0 < p < 1`.
///
/// Acklam's rational approximation followed by Newton polishing.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 || p >= 1.0 {
        return Err(Error::domain(format!("normal quantile needs 0 < p < 1, got {p}")));
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        let q = (-2.0 * q.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let mut x = if p < P_LOW {
        tail(p)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(1.0 - p)
    };
    for _ in 0..2 {
        let density = FRAC_1_SQRT_2PI * (-0.5 * x * x).exp();
        if density <= 0.0 {
            break;
        }
        let step = (std_normal_cdf(x) - p) / density;
        x -= step;
        if step.abs() < 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}

/// Gaussian density with the given mean and variance.
pub fn normal_pdf(x: f64, mean: f64, variance: f64) -> Result<f64> {
    if variance.is_nan() || variance <= 0.0 {
        return Err(Error::domain(format!("normal variance must be positive, got {variance}")));
    }
    let z = x - mean;
    Ok((-0.5 * z * z / variance).exp() / (2.0 * PI * variance).sqrt())
}

/// Gaussian distribution function with the given mean and variance.
pub fn normal_cdf(x: f64, mean: f64, variance: f64) -> Result<f64> {
    if variance.is_nan() || variance <= 0.0 {
        return Err(Error::domain(format!("normal variance must be positive, got {variance}")));
    }
    Ok(std_normal_cdf((x - mean) / variance.sqrt()))
}

const BESSEL_SERIES_LIMIT: f64 = 12.0;

/// `exp(-x) * I_1(x)` for `x >= 0`.
///
/// Power series up to `x = 12`, optimally truncated Hankel asymptotic
/// expansion beyond.
pub fn bessel_i1_scaled(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("bessel_i1_scaled needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= BESSEL_SERIES_LIMIT {
        let half = 0.5 * x;
        let q = half * half;
        let mut term = half;
        let mut sum = term;
        let mut m = 0.0;
        loop {
            m += 1.0;
            term *= q / (m * (m + 1.0));
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        return Ok(sum * (-x).exp());
    }
    // sum_k (-1)^k prod_{j=1..k} (4 - (2j-1)^2) / (k! (8x)^k)
    let mut term = 1.0;
    let mut sum: f64 = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let odd = 2.0 * k - 1.0;
        let next = -term * (4.0 - odd * odd) / (k * 8.0 * x);
        if next.abs() >= term.abs() || next.abs() < 1e-17 * sum.abs() {
            if next.abs() < term.abs() {
                sum += next;
            }
            break;
        }
        term = next;
        sum += term;
    }
    Ok(sum / (2.0 * PI * x).sqrt())
}

fn check_ig(x: f64, mu: f64, lambda: f64) -> Result<()> {
    if !(x > 0.0) || !(mu > 0.0) || !(lambda > 0.0) {
        return Err(Error::domain(format!(
            "inverse Gaussian needs x, mu, lambda > 0, got ({x}, {mu}, {lambda})"
        )));
    }
    Ok(())
}

/// Inverse Gaussian distribution function `F(x; mu, lambda)`.
///
/// The term `exp(2 lambda / mu) * Phi(-b)` is combined in log space so that
/// large `lambda / mu` does not overflow.
pub fn inverse_gaussian_cdf(x: f64, mu: f64, lambda: f64) -> Result<f64> {
    check_ig(x, mu, lambda)?;
    let a = (lambda / x).sqrt();
    let first = std_normal_cdf(a * (x / mu - 1.0));
    let second = (2.0 * lambda / mu + log_std_normal_cdf(-a * (x / mu + 1.0))).exp();
    Ok((first + second).clamp(0.0, 1.0))
}

/// `exp(-2 lambda / mu) * F(x; mu, lambda)`, evaluated without forming the
/// (possibly overflowing) unscaled terms.
pub fn inverse_gaussian_cdf_scaled(x: f64, mu: f64, lambda: f64) -> Result<f64> {
    check_ig(x, mu, lambda)?;
    let a = (lambda / x).sqrt();
    let first = (-2.0 * lambda / mu + log_std_normal_cdf(a * (x / mu - 1.0))).exp();
    let second = std_normal_cdf(-a * (x / mu + 1.0));
    Ok(first + second)
}

/// Inverse Gaussian density, used by tests and diagnostics.
pub fn inverse_gaussian_pdf(x: f64, mu: f64, lambda: f64) -> Result<f64> {
    check_ig(x, mu, lambda)?;
    let z = x - mu;
    Ok((lambda / (2.0 * PI * x * x * x)).sqrt() * (-lambda * z * z / (2.0 * mu * mu * x)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};
    use proptest::prelude::*;

    #[test]
    fn normal_cdf_reference_points() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!(std_normal_cdf(8.0) >= 1.0 - 1e-15);
        assert!((std_normal_cdf(1.645) - 0.95).abs() < 1e-4);
    }

    #[test]
    fn normal_quantile_reference_points() {
        assert!(std_normal_quantile(0.5).unwrap().abs() < 1e-15);
        assert!((std_normal_quantile(0.95).unwrap() - 1.645).abs() < 5e-4);
        assert!((std_normal_quantile(0.975).unwrap() - 1.960).abs() < 5e-4);
        for p in [1e-12, 1e-6, 0.01, 0.3, 0.77, 0.999, 1.0 - 1e-9] {
            let x = std_normal_quantile(p).unwrap();
            assert!((std_normal_cdf(x) - p).abs() < 1e-10, "p = {p}");
        }
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn log_cdf_matches_direct_and_asymptotic_regimes() {
        for x in [-30.0, -10.0, -1.0, 0.0, 2.0, 9.0] {
            assert!((log_std_normal_cdf(x) - std_normal_cdf(x).ln()).abs() < 1e-12 * (1.0 + x * x));
        }
        // both sides of the switch to the asymptotic series, against 30-digit references
        let l = log_std_normal_cdf(-35.0 + 1e-9);
        let r = log_std_normal_cdf(-35.0 - 1e-9);
        assert!((l + 616.975_101_226_894_1).abs() < 1e-12 * 617.0);
        assert!((r + 616.975_101_296_950_9).abs() < 1e-12 * 617.0);
        assert!(log_std_normal_cdf(-200.0).is_finite());
    }

    #[test]
    fn normal_pdf_values() {
        assert!((normal_pdf(0.0, 0.0, 1.0).unwrap() - 0.398_942).abs() < 1e-6);
        assert!((normal_pdf(3.0, 3.0, 4.0).unwrap() - 0.199_471).abs() < 1e-6);
        assert!((normal_pdf(1.0, 0.0, 1.0).unwrap() - 0.241_971).abs() < 1e-6);
        assert!(normal_pdf(0.0, 0.0, 0.0).is_err());
        let mass = integrate(|x| normal_pdf(x, 1.5, 2.5).unwrap(), -30.0, 30.0, &[1.5], QuadOptions::default())
            .unwrap()
            .value;
        assert!((mass - 1.0).abs() < 1e-10);
    }

    fn i1_series_oracle(x: f64) -> f64 {
        // direct power series, summed with no scaling
        let q = 0.25 * x * x;
        let mut term = 0.5 * x;
        let mut sum = term;
        for m in 1..400 {
            term *= q / (m as f64 * (m + 1) as f64);
            sum += term;
        }
        sum
    }

    fn i1_asymptotic_oracle(x: f64) -> f64 {
        // five terms of the Hankel expansion, relative error ~ 1e-14 at x = 700
        let mu = 4.0;
        let t1 = (mu - 1.0) / (8.0 * x);
        let t2 = (mu - 1.0) * (mu - 9.0) / (2.0 * (8.0 * x).powi(2));
        let t3 = (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * (8.0 * x).powi(3));
        let t4 = (mu - 1.0) * (mu - 9.0) * (mu - 25.0) * (mu - 49.0) / (24.0 * (8.0 * x).powi(4));
        (1.0 - t1 + t2 - t3 + t4) / (2.0 * PI * x).sqrt()
    }

    #[test]
    fn bessel_i1_scaled_reference_values() {
        assert_eq!(bessel_i1_scaled(0.0).unwrap(), 0.0);
        let v2 = bessel_i1_scaled(2.0).unwrap();
        assert!((v2 - 0.215_269).abs() < 1e-6);
        assert!((v2 - i1_series_oracle(2.0) * (-2.0f64).exp()).abs() < 1e-15);
        let v700 = bessel_i1_scaled(700.0).unwrap();
        assert!(v700.is_finite() && v700 > 0.0);
        assert!(((v700 - i1_asymptotic_oracle(700.0)) / v700).abs() < 1e-8);
        assert!(bessel_i1_scaled(-1.0).is_err());
    }

    #[test]
    fn bessel_i1_scaled_is_continuous_at_the_switch() {
        let below = bessel_i1_scaled(BESSEL_SERIES_LIMIT).unwrap();
        let above = bessel_i1_scaled(BESSEL_SERIES_LIMIT + 1e-12).unwrap();
        assert!(((below - above) / below).abs() < 1e-9);
        for x in [12.5, 15.0, 20.0, 25.0] {
            let oracle = i1_series_oracle(x) * (-x).exp();
            assert!(((bessel_i1_scaled(x).unwrap() - oracle) / oracle).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn bessel_i1_monotone_on_small_arguments() {
        // I_1 itself increases; the scaled function peaks near x = 1.6 and stays below 1
        let mut prev = 0.0;
        for i in 1..=500 {
            let x = i as f64 * 0.01;
            let v = bessel_i1_scaled(x).unwrap();
            assert!(v < 1.0);
            assert!((v - i1_series_oracle(x) * (-x).exp()).abs() < 1e-14);
            let unscaled = v * x.exp();
            assert!(unscaled > prev);
            prev = unscaled;
        }
    }

    #[test]
    fn inverse_gaussian_cdf_reference_values() {
        assert!((inverse_gaussian_cdf(1e9, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((inverse_gaussian_cdf(1.0, 1.0, 1.0).unwrap() - 0.668_102).abs() < 1e-5);
        let oracle = integrate(|x| inverse_gaussian_pdf(x, 1.0, 1.0).unwrap(), 0.0, 1.0, &[], QuadOptions::default())
            .unwrap()
            .value;
        assert!((inverse_gaussian_cdf(1.0, 1.0, 1.0).unwrap() - oracle).abs() < 1e-9);
        assert!(inverse_gaussian_cdf(1e-8, 1.0, 1.0).unwrap() < 1e-12);
        assert!(inverse_gaussian_cdf(1.0, 0.0, 1.0).is_err());
        assert!(inverse_gaussian_cdf(-1.0, 1.0, 1.0).is_err());
        // overflow-prone regime: lambda / mu = 2000
        let v = inverse_gaussian_cdf(3.0, 1.0, 2000.0).unwrap();
        assert!(v.is_finite() && v > 0.999_999);
    }

    /// Moments from the distribution function: E X = int (1 - F), E X^2 = int 2x (1 - F).
    fn moments_from_cdf(mu: f64, lambda: f64) -> (f64, f64) {
        let hi = mu * 200.0 + 200.0 * mu.powi(3) / lambda;
        let opts = QuadOptions { abs_tol: 1e-11, rel_tol: 1e-12, max_segments: 20_000 };
        let pts = [mu * 0.5, mu, mu * 2.0, mu * 5.0, mu * 20.0];
        let m1 = integrate(|x| 1.0 - inverse_gaussian_cdf(x.max(1e-300), mu, lambda).unwrap(), 0.0, hi, &pts, opts)
            .unwrap()
            .value;
        let m2 = integrate(
            |x| 2.0 * x * (1.0 - inverse_gaussian_cdf(x.max(1e-300), mu, lambda).unwrap()),
            0.0,
            hi,
            &pts,
            opts,
        )
        .unwrap()
        .value;
        (m1, m2)
    }

    #[test]
    fn inverse_gaussian_mean_and_variance() {
        let (m1, m2) = moments_from_cdf(2.0, 5.0);
        assert!((m1 - 2.0).abs() < 1e-6);
        assert!((m2 - (8.0 / 5.0 + 4.0)).abs() < 1e-5);
    }

    #[test]
    fn inverse_gaussian_cdf_matches_density_quadrature() {
        let vals = [0.5, 1.0, 5.0];
        for &mu in &vals {
            for &lambda in &vals {
                let mut lo = 0.0;
                let mut acc = 0.0;
                for k in 0..30 {
                    let x = 1e-3 * 1.5f64.powi(k);
                    acc += integrate(
                        |s| inverse_gaussian_pdf(s, mu, lambda).unwrap_or(0.0),
                        lo,
                        x,
                        &[],
                        QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_segments: 4000 },
                    )
                    .unwrap()
                    .value;
                    lo = x;
                    let f = inverse_gaussian_cdf(x, mu, lambda).unwrap();
                    assert!((f - acc).abs() < 1e-7, "mu={mu} lambda={lambda} x={x}: {f} vs {acc}");
                }
            }
        }
    }

    #[test]
    fn probability_newtype_validates() {
        assert!(Probability::new(0.05).is_ok());
        assert!(Probability::new(1.5).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::clamped(1.0 + 1e-9).unwrap().value(), 1.0);
        let z = Probability::new(0.05).unwrap().upper_quantile().unwrap();
        assert!(z > 0.0 && z < Probability::new(0.025).unwrap().upper_quantile().unwrap());
    }

    proptest! {
        #[test]
        fn quantile_inverts_cdf(x in -6.0f64..6.0) {
            let back = std_normal_quantile(std_normal_cdf(x)).unwrap();
            prop_assert!((back - x).abs() <= 1e-8);
        }

        #[test]
        fn cdf_symmetry(x in -37.0f64..37.0) {
            prop_assert!((std_normal_cdf(x) + std_normal_cdf(-x) - 1.0).abs() <= 1e-14);
        }

        #[test]
        fn cdf_monotone(x in -10.0f64..10.0, dx in 0.0f64..1.0) {
            prop_assert!(std_normal_cdf(x + dx) >= std_normal_cdf(x));
        }

        #[test]
        fn ig_cdf_monotone(x in 0.01f64..50.0, dx in 0.0f64..5.0, mu in 0.1f64..10.0, lambda in 0.1f64..100.0) {
            let a = inverse_gaussian_cdf(x, mu, lambda).unwrap();
            let b = inverse_gaussian_cdf(x + dx, mu, lambda).unwrap();
            prop_assert!(b >= a - 1e-15);
        }
    }
}
