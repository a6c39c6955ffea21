//! Parametric laws for inter-claim times and claim sizes.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};

/// A positive law, tagged by family.
///
/// The Pareto law is the Lomax form with density `a b / (x b + 1)^(a + 1)`.
/// The Kummer law is supported for moments only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Distribution {
    Exponential { rate: f64 },
    Erlang { rate: f64, shape: u32 },
    #[serde(rename = "mixture2")]
    MixtureExp2 { rate1: f64, rate2: f64, weight: f64 },
    Pareto { a: f64, b: f64 },
    Kummer { k: f64, l: f64 },
}

/// Mean, variance and (when finite) third raw moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean: f64,
    pub variance: f64,
    pub third_moment: Option<f64>,
}

/// Value of a moment generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mgf {
    Finite(f64),
    Divergent,
}

impl Mgf {
    pub fn finite(self) -> Option<f64> {
        match self {
            Mgf::Finite(v) => Some(v),
            Mgf::Divergent => None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Distribution::Exponential { rate } => write!(f, "exponential(rate={rate})"),
            Distribution::Erlang { rate, shape } => write!(f, "erlang(rate={rate}, shape={shape})"),
            Distribution::MixtureExp2 { rate1, rate2, weight } => {
                write!(f, "mixture2(rate1={rate1}, rate2={rate2}, weight={weight})")
            }
            Distribution::Pareto { a, b } => write!(f, "pareto(a={a}, b={b})"),
            Distribution::Kummer { k, l } => write!(f, "kummer(k={k}, l={l})"),
        }
    }
}

impl Distribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        Distribution::Exponential { rate }.validated()
    }

    pub fn erlang(rate: f64, shape: u32) -> Result<Self> {
        Distribution::Erlang { rate, shape }.validated()
    }

    pub fn mixture2(rate1: f64, rate2: f64, weight: f64) -> Result<Self> {
        Distribution::MixtureExp2 { rate1, rate2, weight }.validated()
    }

    pub fn pareto(a: f64, b: f64) -> Result<Self> {
        Distribution::Pareto { a, b }.validated()
    }

    pub fn kummer(k: f64, l: f64) -> Result<Self> {
        Distribution::Kummer { k, l }.validated()
    }

    /// Check parameter constraints and return `self`.
    pub fn validated(self) -> Result<Self> {
        match self {
            Distribution::Exponential { rate } => positive("exponential rate", rate)?,
            Distribution::Erlang { rate, shape } => {
                positive("erlang rate", rate)?;
                if shape == 0 {
                    return Err(Error::domain("erlang shape must be a positive integer"));
                }
            }
            Distribution::MixtureExp2 { rate1, rate2, weight } => {
                positive("mixture rate1", rate1)?;
                positive("mixture rate2", rate2)?;
                if !(weight > 0.0 && weight < 1.0) {
                    return Err(Error::domain(format!("mixture weight must lie in (0, 1), got {weight}")));
                }
            }
            Distribution::Pareto { a, b } => {
                positive("pareto a", a)?;
                positive("pareto b", b)?;
            }
            Distribution::Kummer { k, l } => {
                positive("kummer k", k)?;
                positive("kummer l", l)?;
            }
        }
        Ok(self)
    }

    pub fn family(&self) -> &'static str {
        match self {
            Distribution::Exponential { .. } => "exponential",
            Distribution::Erlang { .. } => "erlang",
            Distribution::MixtureExp2 { .. } => "mixture2",
            Distribution::Pareto { .. } => "pareto",
            Distribution::Kummer { .. } => "kummer",
        }
    }

    pub fn is_light_tailed(&self) -> bool {
        self.mgf_abscissa() > 0.0
    }

    /// Supremum of `r` for which `E exp(r X)` is finite.
    pub fn mgf_abscissa(&self) -> f64 {
        match *self {
            Distribution::Exponential { rate } | Distribution::Erlang { rate, .. } => rate,
            Distribution::MixtureExp2 { rate1, rate2, .. } => rate1.min(rate2),
            Distribution::Pareto { .. } | Distribution::Kummer { .. } => 0.0,
        }
    }

    /// Raw moment `E X^j`.
    pub fn raw_moment(&self, j: u32) -> Result<f64> {
        if j == 0 {
            return Ok(1.0);
        }
        let jf = j as f64;
        let factorial = ln_gamma(jf + 1.0).exp();
        match *self {
            Distribution::Exponential { rate } => Ok(factorial / rate.powi(j as i32)),
            Distribution::Erlang { rate, shape } => {
                let k = shape as f64;
                Ok((ln_gamma(k + jf) - ln_gamma(k)).exp() / rate.powi(j as i32))
            }
            Distribution::MixtureExp2 { rate1, rate2, weight } => Ok(factorial
                * (weight / rate1.powi(j as i32) + (1.0 - weight) / rate2.powi(j as i32))),
            Distribution::Pareto { a, b } => {
                if a <= jf {
                    return Err(Error::MomentUndefined(format!(
                        "pareto moment of order {j} requires a > {j}, got a = {a}"
                    )));
                }
                let prod: f64 = (1..=j).map(|i| a - i as f64).product();
                Ok(factorial / (b.powi(j as i32) * prod))
            }
            Distribution::Kummer { k, l } => {
                if 2.0 * jf >= l {
                    return Err(Error::MomentUndefined(format!(
                        "kummer moment of order {j} requires l > {}, got l = {l}",
                        2 * j
                    )));
                }
                let ratio = ln_gamma(0.5 * k + jf) + ln_gamma(0.5 * l - jf) - ln_gamma(0.5 * k) - ln_gamma(0.5 * l);
                Ok(factorial * ratio.exp() * (l / k).powf(jf))
            }
        }
    }

    /// Mean, variance and third raw moment from the closed forms.
    pub fn moments(&self) -> Result<MomentSet> {
        let (mean, variance) = match *self {
            Distribution::Exponential { rate } => (1.0 / rate, 1.0 / (rate * rate)),
            Distribution::Erlang { rate, shape } => {
                let k = shape as f64;
                (k / rate, k / (rate * rate))
            }
            Distribution::MixtureExp2 { .. } => {
                let m1 = self.raw_moment(1)?;
                (m1, self.raw_moment(2)? - m1 * m1)
            }
            Distribution::Pareto { a, b } => {
                if a <= 1.0 {
                    return Err(Error::MomentUndefined(format!("pareto mean requires a > 1, got a = {a}")));
                }
                if a <= 2.0 {
                    return Err(Error::MomentUndefined(format!("pareto variance requires a > 2, got a = {a}")));
                }
                (1.0 / ((a - 1.0) * b), a / ((a - 1.0).powi(2) * (a - 2.0) * b * b))
            }
            Distribution::Kummer { k, l } => {
                if l <= 2.0 {
                    return Err(Error::MomentUndefined(format!("kummer mean requires l > 2, got l = {l}")));
                }
                if l <= 4.0 {
                    return Err(Error::MomentUndefined(format!("kummer variance requires l > 4, got l = {l}")));
                }
                (
                    l / (l - 2.0),
                    l * l * (4.0 * (l - 2.0) + k * l) / (k * (l - 2.0).powi(2) * (l - 4.0)),
                )
            }
        };
        let third_moment = self.raw_moment(3).ok();
        Ok(MomentSet { mean, variance, third_moment })
    }

    /// Whether the density is bounded on `(0, inf)`.
    ///
    /// The Kummer density behaves like `x^(k/2 - 1)` near zero.
    pub fn has_bounded_density(&self) -> bool {
        match *self {
            Distribution::Kummer { k, .. } => k > 2.0,
            _ => true,
        }
    }

    /// Density at `x`; zero for `x < 0`, the right limit at `x = 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("pdf argument is NaN"));
        }
        if x < 0.0 {
            return Ok(0.0);
        }
        Ok(match *self {
            Distribution::Exponential { rate } => rate * (-rate * x).exp(),
            Distribution::Erlang { rate, shape } => {
                if shape == 1 {
                    rate * (-rate * x).exp()
                } else if x == 0.0 {
                    0.0
                } else {
                    let k = shape as f64;
                    (k * rate.ln() + (k - 1.0) * x.ln() - rate * x - ln_gamma(k)).exp()
                }
            }
            Distribution::MixtureExp2 { rate1, rate2, weight } => {
                weight * rate1 * (-rate1 * x).exp() + (1.0 - weight) * rate2 * (-rate2 * x).exp()
            }
            Distribution::Pareto { a, b } => a * b / (x * b + 1.0).powf(a + 1.0),
            Distribution::Kummer { .. } => return Err(Error::Unsupported { what: "density", family: "kummer" }),
        })
    }

    /// Distribution function.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.sf(x)?)
    }

    /// Survival function `P(X > x)`.
    pub fn sf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("sf argument is NaN"));
        }
        if x <= 0.0 {
            return match self {
                Distribution::Kummer { .. } => Err(Error::Unsupported { what: "distribution function", family: "kummer" }),
                _ => Ok(1.0),
            };
        }
        Ok(match *self {
            Distribution::Exponential { rate } => (-rate * x).exp(),
            Distribution::Erlang { rate, shape } => gamma_ur(shape as f64, rate * x),
            Distribution::MixtureExp2 { rate1, rate2, weight } => {
                weight * (-rate1 * x).exp() + (1.0 - weight) * (-rate2 * x).exp()
            }
            Distribution::Pareto { a, b } => (x * b + 1.0).powf(-a),
            Distribution::Kummer { .. } => {
                return Err(Error::Unsupported { what: "distribution function", family: "kummer" })
            }
        })
    }

    /// Lower distribution function through the regularized gamma (Erlang only
    /// differs from `cdf` in which tail is computed directly).
    pub fn cdf_lower(&self, x: f64) -> Result<f64> {
        match *self {
            Distribution::Erlang { rate, shape } if x > 0.0 => Ok(gamma_lr(shape as f64, rate * x)),
            _ => self.cdf(x),
        }
    }

    /// A validated sampler; fails for the Kummer law.
    pub fn sampler(&self) -> Result<Sampler> {
        self.validated()?;
        match *self {
            Distribution::Kummer { .. } => Err(Error::Unsupported { what: "sampling", family: "kummer" }),
            d => Ok(Sampler(d)),
        }
    }

    /// One draw from the law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(self.sampler()?.sample(rng))
    }

    /// Moment generating function `E exp(r X)`.
    ///
    /// Heavy-tailed laws are divergent for every `r > 0`. For `r < 0` the
    /// Pareto transform is integrated numerically; the Kummer transform needs
    /// the density and is unsupported.
    pub fn mgf(&self, r: f64) -> Result<Mgf> {
        if !r.is_finite() {
            return Err(Error::domain(format!("mgf argument must be finite, got {r}")));
        }
        if r == 0.0 {
            return Ok(Mgf::Finite(1.0));
        }
        Ok(match *self {
            Distribution::Exponential { rate } => {
                if r < rate {
                    Mgf::Finite(rate / (rate - r))
                } else {
                    Mgf::Divergent
                }
            }
            Distribution::Erlang { rate, shape } => {
                if r < rate {
                    Mgf::Finite((rate / (rate - r)).powi(shape as i32))
                } else {
                    Mgf::Divergent
                }
            }
            Distribution::MixtureExp2 { rate1, rate2, weight } => {
                if r < rate1.min(rate2) {
                    Mgf::Finite(weight * rate1 / (rate1 - r) + (1.0 - weight) * rate2 / (rate2 - r))
                } else {
                    Mgf::Divergent
                }
            }
            Distribution::Pareto { a, b } => {
                if r > 0.0 {
                    Mgf::Divergent
                } else {
                    let cut = 60.0 / -r;
                    let mut pts = Vec::new();
                    let mut x = 1.0 / (-r);
                    while x > 1e-3 / b {
                        pts.push(x);
                        x /= 4.0;
                    }
                    let v = integrate(
                        |x| (r * x).exp() * a * b / (x * b + 1.0).powf(a + 1.0),
                        0.0,
                        cut,
                        &pts,
                        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_segments: 4000 },
                    )?;
                    Mgf::Finite(v.value)
                }
            }
            Distribution::Kummer { .. } => {
                if r > 0.0 {
                    Mgf::Divergent
                } else {
                    return Err(Error::Unsupported { what: "moment generating function", family: "kummer" });
                }
            }
        })
    }

    /// Exponentially tilted upper tail `int_x^inf exp(r y) dF(y)` for light-tailed
    /// laws and `0 <= r <` abscissa.
    pub fn tilted_tail(&self, r: f64, x: f64) -> Result<f64> {
        let x = x.max(0.0);
        match *self {
            Distribution::Exponential { rate } if r < rate => Ok(rate * ((r - rate) * x).exp() / (rate - r)),
            Distribution::Erlang { rate, shape } if r < rate => {
                let k = shape as f64;
                let q = if x == 0.0 { 1.0 } else { gamma_ur(k, (rate - r) * x) };
                Ok((rate / (rate - r)).powi(shape as i32) * q)
            }
            Distribution::MixtureExp2 { rate1, rate2, weight } if r < rate1.min(rate2) => Ok(weight
                * rate1
                * ((r - rate1) * x).exp()
                / (rate1 - r)
                + (1.0 - weight) * rate2 * ((r - rate2) * x).exp() / (rate2 - r)),
            _ => Err(Error::NoAdjustmentCoefficient(format!(
                "tilted tail of {self} diverges at r = {r}"
            ))),
        }
    }

    /// Upper quantile used to truncate numerical work: `x` with `P(X > x) <= eps`.
    pub fn tail_cutoff(&self, eps: f64) -> Result<f64> {
        match *self {
            Distribution::Exponential { rate } => Ok(-eps.ln() / rate),
            Distribution::Pareto { a, b } => Ok((eps.powf(-1.0 / a) - 1.0) / b),
            Distribution::Kummer { .. } => Err(Error::Unsupported { what: "distribution function", family: "kummer" }),
            _ => {
                let mut hi = self.moments()?.mean.max(1e-12);
                while self.sf(hi)? > eps {
                    hi *= 2.0;
                }
                Ok(hi)
            }
        }
    }
}

/// Infallible sampler for a law known to support sampling.
#[derive(Debug, Clone, Copy)]
pub struct Sampler(Distribution);

#[inline]
fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p()
}

impl Sampler {
    pub fn distribution(&self) -> Distribution {
        self.0
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.0 {
            Distribution::Exponential { rate } => unit_exponential(rng) / rate,
            Distribution::Erlang { rate, shape } => {
                let mut s = 0.0;
                for _ in 0..shape {
                    s += unit_exponential(rng);
                }
                s / rate
            }
            Distribution::MixtureExp2 { rate1, rate2, weight } => {
                let branch: f64 = rng.random();
                let e = unit_exponential(rng);
                if branch < weight {
                    e / rate1
                } else {
                    e / rate2
                }
            }
            Distribution::Pareto { a, b } => {
                let u: f64 = rng.random();
                ((1.0 - u).powf(-1.0 / a) - 1.0) / b
            }
            Distribution::Kummer { .. } => unreachable!("sampler construction rejects kummer"),
        }
    }
}

/// Inverse-transform map for the unit exponential, exposed for tests.
pub fn exponential_inverse(u: f64) -> f64 {
    -(-u).ln_1p()
}

/// Inverse-transform map for the Lomax-form Pareto law.
pub fn pareto_inverse(u: f64, a: f64, b: f64) -> f64 {
    ((1.0 - u).powf(-1.0 / a) - 1.0) / b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_sampleable() -> Vec<Distribution> {
        vec![
            Distribution::exponential(1.0).unwrap(),
            Distribution::exponential(0.6).unwrap(),
            Distribution::erlang(6.0, 4).unwrap(),
            Distribution::erlang(1.6, 2).unwrap(),
            Distribution::mixture2(1.0, 2.0, 2.0 / 3.0).unwrap(),
            Distribution::pareto(4.0, 0.4).unwrap(),
            Distribution::pareto(10.0, 0.05).unwrap(),
            Distribution::pareto(4.0, 0.35).unwrap(),
        ]
    }

    #[test]
    fn moment_examples() {
        let m = Distribution::exponential(1.0).unwrap().moments().unwrap();
        assert_eq!((m.mean, m.variance), (1.0, 1.0));
        let m = Distribution::pareto(10.0, 0.05).unwrap().moments().unwrap();
        assert!((m.mean - 2.222_222_222_222).abs() < 1e-9);
        assert!((m.variance - 6.172_839_506_17).abs() < 1e-9);
        let m = Distribution::kummer(5.0, 5.0).unwrap().moments().unwrap();
        assert!((m.mean - 5.0 / 3.0).abs() < 1e-12);
        assert!((m.variance - 925.0 / 45.0).abs() < 1e-12);
        assert!(m.third_moment.is_none());
    }

    #[test]
    fn kummer_variance_matches_raw_moments() {
        // second raw moment from the gamma-ratio moment formula
        for (k, l) in [(5.0, 5.0), (200.0, 200.0), (3.0, 9.0)] {
            let d = Distribution::kummer(k, l).unwrap();
            let m = d.moments().unwrap();
            let m2 = d.raw_moment(2).unwrap();
            assert!(((m2 - m.mean * m.mean) - m.variance).abs() < 1e-9 * m.variance);
            assert!((d.raw_moment(1).unwrap() - m.mean).abs() < 1e-12);
        }
    }

    #[test]
    fn undefined_moments_name_the_constraint() {
        let e = Distribution::pareto(2.0, 1.0).unwrap().moments().unwrap_err();
        assert!(matches!(e, Error::MomentUndefined(ref s) if s.contains("a > 2")));
        let e = Distribution::kummer(5.0, 3.0).unwrap().moments().unwrap_err();
        assert!(matches!(e, Error::MomentUndefined(ref s) if s.contains("l > 4")));
        let m = Distribution::pareto(3.0, 0.3).unwrap().moments().unwrap();
        assert!(m.third_moment.is_none());
        assert!(Distribution::pareto(3.5, 0.3).unwrap().moments().unwrap().third_moment.is_some());
    }

    #[test]
    fn parameter_validation() {
        assert!(Distribution::exponential(0.0).is_err());
        assert!(Distribution::erlang(1.0, 0).is_err());
        assert!(Distribution::mixture2(1.0, 2.0, 1.0).is_err());
        assert!(Distribution::pareto(-1.0, 1.0).is_err());
        assert!(Distribution::kummer(1.0, f64::NAN).is_err());
    }

    #[test]
    fn density_examples() {
        assert_eq!(Distribution::exponential(1.0).unwrap().pdf(0.0).unwrap(), 1.0);
        assert!((Distribution::pareto(4.0, 0.4).unwrap().pdf(0.0).unwrap() - 1.6).abs() < 1e-15);
        let v = Distribution::erlang(6.0, 4).unwrap().pdf(1.0).unwrap();
        assert!((v - 216.0 * (-6.0f64).exp()).abs() < 1e-12);
        assert!((v - 0.535_410).abs() < 1e-5);
        assert!(matches!(
            Distribution::kummer(5.0, 5.0).unwrap().pdf(1.0),
            Err(Error::Unsupported { what: "density", .. })
        ));
    }

    #[test]
    fn densities_integrate_to_one_and_reproduce_moments() {
        for d in all_sampleable() {
            let hi = d.tail_cutoff(1e-16).unwrap();
            let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_segments: 10_000 };
            let m = d.moments().unwrap();
            let pts: Vec<f64> = (0..12).map(|i| m.mean * 2f64.powi(i - 4)).collect();
            let mass = integrate(|x| d.pdf(x).unwrap(), 0.0, hi, &pts, opts).unwrap().value;
            let mean = integrate(|x| x * d.pdf(x).unwrap(), 0.0, hi, &pts, opts).unwrap().value;
            let m2 = integrate(|x| x * x * d.pdf(x).unwrap(), 0.0, hi, &pts, opts).unwrap().value;
            // the pareto tail beyond the cutoff carries relatively more of the moments
            let tol = if matches!(d, Distribution::Pareto { .. }) { 1e-3 } else { 1e-6 };
            assert!((mass - 1.0).abs() < 1e-6, "{d}: mass {mass}");
            assert!(((mean - m.mean) / m.mean).abs() < tol, "{d}: mean {mean} vs {}", m.mean);
            assert!(((m2 - m.variance - m.mean * m.mean) / m2).abs() < tol, "{d}: m2 {m2}");
        }
    }

    #[test]
    fn pareto_moments_by_exact_substitution() {
        // With 1 - F(x) = s^8 the Lomax moments become smooth integrals on (0, 1).
        for (a, b) in [(10.0, 0.05), (4.0, 0.4), (4.0, 0.35), (3.5, 0.3)] {
            let d = Distribution::pareto(a, b).unwrap();
            let m = d.moments().unwrap();
            let x = |s: f64| (s.powf(-8.0 / a) - 1.0) / b;
            let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_segments: 10_000 };
            let mean = integrate(|s| x(s) * 8.0 * s.powi(7), 0.0, 1.0, &[0.5], opts).unwrap().value;
            let m2 = integrate(|s| x(s).powi(2) * 8.0 * s.powi(7), 0.0, 1.0, &[0.5], opts).unwrap().value;
            assert!(((mean - m.mean) / m.mean).abs() < 1e-9, "{d}");
            assert!(((m2 - m.mean * m.mean - m.variance) / m.variance).abs() < 1e-9, "{d}");
        }
    }

    #[test]
    fn inversion_maps() {
        assert!((exponential_inverse(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(pareto_inverse(0.0, 4.0, 0.4), 0.0);
    }

    #[test]
    fn sampling_means_converge() {
        let n = 100_000;
        for d in all_sampleable() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let s = d.sampler().unwrap();
            let mean: f64 = (0..n).map(|_| s.sample(&mut rng)).sum::<f64>() / n as f64;
            let m = d.moments().unwrap();
            let se = (m.variance / n as f64).sqrt();
            assert!((mean - m.mean).abs() < 4.0 * se, "{d}: {mean} vs {}", m.mean);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mix = Distribution::mixture2(1.0, 2.0, 2.0 / 3.0).unwrap();
        let mean: f64 = (0..n).map(|_| mix.sample(&mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!((mean - 0.8333).abs() < 0.01);
        assert!(Distribution::kummer(5.0, 5.0).unwrap().sample(&mut rng).is_err());
    }

    #[test]
    fn kolmogorov_smirnov_distance_is_small() {
        let n = 100_000;
        for d in all_sampleable() {
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            let s = d.sampler().unwrap();
            let mut xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            let mut ks: f64 = 0.0;
            for (i, &x) in xs.iter().enumerate() {
                let f = d.cdf_lower(x).unwrap();
                ks = ks.max((f - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - f).abs());
            }
            assert!(ks <= 0.01, "{d}: KS distance {ks}");
        }
    }

    #[test]
    fn mgf_examples() {
        let e = Distribution::exponential(1.0).unwrap();
        assert_eq!(e.mgf(0.0).unwrap(), Mgf::Finite(1.0));
        assert_eq!(e.mgf(0.5).unwrap(), Mgf::Finite(2.0));
        assert_eq!(e.mgf(1.0).unwrap(), Mgf::Divergent);
        let p = Distribution::pareto(4.0, 0.4).unwrap();
        assert_eq!(p.mgf(0.1).unwrap(), Mgf::Divergent);
        // E exp(-X) by direct integration of the density against a finer rule
        let direct = integrate(
            |x| (-x).exp() * p.pdf(x).unwrap(),
            0.0,
            80.0,
            &[1.0, 5.0, 20.0],
            QuadOptions { abs_tol: 1e-14, rel_tol: 1e-14, max_segments: 10_000 },
        )
        .unwrap()
        .value;
        assert!((p.mgf(-1.0).unwrap().finite().unwrap() - direct).abs() < 1e-11);
        assert!(Distribution::kummer(5.0, 5.0).unwrap().mgf(-0.1).is_err());
        assert_eq!(Distribution::kummer(5.0, 5.0).unwrap().mgf(0.1).unwrap(), Mgf::Divergent);
    }

    #[test]
    fn mgf_is_monotone_and_convex_on_its_domain() {
        for d in all_sampleable() {
            let hi = if d.is_light_tailed() { 0.95 * d.mgf_abscissa() } else { 0.0 };
            let lo = -2.0;
            let n = 60;
            let h = (hi - lo) / n as f64;
            let vals: Vec<f64> = (0..=n).map(|i| d.mgf(lo + h * i as f64).unwrap().finite().unwrap()).collect();
            for w in vals.windows(3) {
                assert!(w[1] >= w[0] - 1e-12, "{d}: not monotone");
                assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-9, "{d}: not convex");
            }
        }
    }

    #[test]
    fn tilted_tail_matches_quadrature() {
        for d in [
            Distribution::exponential(0.6).unwrap(),
            Distribution::erlang(1.0, 2).unwrap(),
            Distribution::mixture2(1.0, 2.0, 0.3).unwrap(),
        ] {
            let r = 0.4 * d.mgf_abscissa();
            for x in [0.0, 0.5, 3.0] {
                let hi = x + 200.0 / (d.mgf_abscissa() - r);
                let q = integrate(
                    |y| (r * y).exp() * d.pdf(y).unwrap(),
                    x,
                    hi,
                    &[x + 1.0, x + 10.0],
                    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_segments: 10_000 },
                )
                .unwrap()
                .value;
                assert!((d.tilted_tail(r, x).unwrap() - q).abs() < 1e-9, "{d} x={x}");
            }
            assert!((d.tilted_tail(r, 0.0).unwrap() - d.mgf(r).unwrap().finite().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn serde_family_tags() {
        let d: Distribution = toml::from_str("family = \"mixture2\"\nrate1 = 1.0\nrate2 = 2.0\nweight = 0.5").unwrap();
        assert_eq!(d, Distribution::MixtureExp2 { rate1: 1.0, rate2: 2.0, weight: 0.5 });
        let d: Distribution = serde_json::from_str(r#"{"family":"erlang","rate":6.0,"shape":4}"#).unwrap();
        assert_eq!(d, Distribution::Erlang { rate: 6.0, shape: 4 });
    }
}
