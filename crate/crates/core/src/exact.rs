//! Closed forms for exponential inter-claim times (rate `delta`) and
//! exponential claims (rate `rho`).
//!
//! The finite-horizon ruin probability is a contour integral over the unit
//! circle. For premiums below `c*` the unit-circle integrand grows like
//! `exp(u rho (sqrt(delta / (c rho)) - 1))` and the integral is a small
//! difference of huge numbers, so [`ruin_finite_exp`] moves the contour to
//! the saddle-point radius and accounts for the pole it crosses. The
//! unit-circle form is kept as [`ruin_finite_exp_unit_circle`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, GaussLegendre, QuadOptions};
use crate::special::bessel_i1_scaled;

/// Exponential rates: `delta` for inter-claim times, `rho` for claim sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpPair {
    pub delta: f64,
    pub rho: f64,
}

impl ExpPair {
    pub fn new(delta: f64, rho: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0 && rho.is_finite() && rho > 0.0) {
            return Err(Error::domain(format!("exponential rates must be positive, got delta={delta}, rho={rho}")));
        }
        Ok(ExpPair { delta, rho })
    }

    /// Equilibrium premium rate `delta / rho`.
    pub fn c_star(&self) -> f64 {
        self.delta / self.rho
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and nonnegative, got {v}")))
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and positive, got {v}")))
    }
}

/// Clamp a probability produced by quadrature, logging overshoots above 1e-7.
pub(crate) fn clamp_probability(raw: f64, what: &str) -> Result<f64> {
    if raw.is_nan() {
        return Err(Error::IntegrationFailure { achieved: f64::NAN, requested: 0.0 });
    }
    if !(-1e-7..=1.0 + 1e-7).contains(&raw) {
        log::warn!("{what}: raw value {raw:e} outside [0, 1] before clamping");
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Integrand of the aggregate-claims law after the substitution `z = w^2`.
/// Its exponent vanishes at the peak `w = sqrt(delta t / rho)`.
fn aggregate_integrand(p: &ExpPair, t: f64, w: f64) -> f64 {
    let a = (p.delta * p.rho * t).sqrt();
    let arg = 2.0 * a * w;
    let i1s = bessel_i1_scaled(arg).unwrap_or(0.0);
    2.0 * a * i1s * (arg - p.rho * w * w - t * p.delta).exp()
}

/// Tail mass `int_{sqrt(x)}^inf` (when `upper`) or `int_0^{sqrt(x)}` of the
/// continuous part of the law of `V_t`.
fn aggregate_part(p: &ExpPair, t: f64, x: f64, upper: bool) -> Result<f64> {
    let w_peak = (p.delta * t / p.rho).sqrt();
    let width = 1.0 / p.rho.sqrt();
    let w = x.sqrt();
    let mut pts = vec![w_peak];
    for k in [1.0, 2.0, 4.0, 8.0] {
        pts.push(w_peak - k * width);
        pts.push(w_peak + k * width);
    }
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-11, max_segments: 4000 };
    let f = |v: f64| aggregate_integrand(p, t, v);
    let r = if upper {
        let hi = w.max(w_peak) + (90.0 / p.rho).sqrt() + 4.0 * width;
        integrate(f, w, hi, &pts, opts)?
    } else {
        integrate(f, 0.0, w, &pts, opts)?
    };
    Ok(r.value)
}

/// `P{V_t <= x}` for the compound Poisson sum of exponential claims.
///
/// The law has an atom `exp(-delta t)` at zero; the function is zero for
/// `x < 0` and right-continuous at `0`.
pub fn aggregate_cdf_exp(p: &ExpPair, t: f64, x: f64) -> Result<f64> {
    check_pos("t", t)?;
    if x.is_nan() {
        return Err(Error::domain("x is NaN"));
    }
    if x < 0.0 {
        return Ok(0.0);
    }
    let atom = (-p.delta * t).exp();
    if x == 0.0 {
        return Ok(atom);
    }
    if x.sqrt() <= (p.delta * t / p.rho).sqrt() {
        clamp_probability(atom + aggregate_part(p, t, x, false)?, "aggregate cdf")
    } else {
        clamp_probability(1.0 - aggregate_part(p, t, x, true)?, "aggregate cdf")
    }
}

/// `P{V_t > x}`, computed directly in the upper tail.
pub fn aggregate_sf_exp(p: &ExpPair, t: f64, x: f64) -> Result<f64> {
    check_pos("t", t)?;
    if x.is_nan() {
        return Err(Error::domain("x is NaN"));
    }
    if x < 0.0 {
        return Ok(1.0);
    }
    if x.sqrt() <= (p.delta * t / p.rho).sqrt() {
        Ok(1.0 - aggregate_cdf_exp(p, t, x)?)
    } else {
        clamp_probability(aggregate_part(p, t, x, true)?, "aggregate sf")
    }
}

/// Ultimate ruin probability `P{tau(u, c) < inf}`.
pub fn ruin_ultimate_exp(p: &ExpPair, u: f64, c: f64) -> Result<f64> {
    check_nonneg("u", u)?;
    check_nonneg("c", c)?;
    if c == 0.0 {
        return Ok(1.0);
    }
    let q = p.delta / (c * p.rho);
    if q >= 1.0 {
        Ok(1.0)
    } else {
        Ok(q * (-u * (c * p.rho - p.delta) / c).exp())
    }
}

/// Ingredients of the ruin-time generating integrand
/// `H(z) = q exp(log_k + a z + b (z + 1/z) / 2) (1 - z^2) / ((1 - s z)(1 - s / z))`.
struct RuinContour {
    q: f64,
    s: f64,
    a: f64,
    b: f64,
    log_k: f64,
}

impl RuinContour {
    fn new(p: &ExpPair, u: f64, c: f64, t: f64) -> Self {
        let q = p.delta / (c * p.rho);
        let s = q.sqrt();
        RuinContour {
            q,
            s,
            a: u * p.rho * s,
            b: 2.0 * t * (c * p.rho * p.delta).sqrt(),
            log_k: -u * p.rho - t * (c * p.rho + p.delta),
        }
    }

    /// Growth rate of `|H|` along the circle of radius `r`: `|H| ~ exp(phi cos x)`.
    fn phi(&self, r: f64) -> f64 {
        self.a * r + 0.5 * self.b * (r + 1.0 / r)
    }

    fn h(&self, z: Complex64) -> Complex64 {
        let expo = self.log_k + self.a * z + 0.5 * self.b * (z + z.inv());
        let rational = (1.0 - z * z) / ((1.0 - self.s * z) * (1.0 - self.s / z));
        self.q * expo.exp() * rational
    }

    /// Integration radius: the saddle point of `phi`, kept away from the
    /// poles at `s` and `1 / s`.
    fn radius(&self) -> f64 {
        let saddle = (self.b / (self.b + 2.0 * self.a)).sqrt();
        let m = self.s.min(1.0 / self.s);
        let eta = m * 0.05f64.min(1.0 / self.b.max(1.0).sqrt());
        let (lo, hi) = (m + eta, 1.0 / m - eta);
        if saddle >= lo && saddle <= hi {
            saddle
        } else if saddle > m && lo < hi {
            saddle.clamp(lo, hi)
        } else {
            saddle.min(m - eta)
        }
    }
}

/// Finite-horizon ruin probability `P{tau(u, c) <= t}`.
///
/// For `c = 0` the reserve only decreases, so ruin by `t` is `V_t > u`.
pub fn ruin_finite_exp(p: &ExpPair, u: f64, c: f64, t: f64) -> Result<f64> {
    check_nonneg("u", u)?;
    check_nonneg("c", c)?;
    check_pos("t", t)?;
    if c == 0.0 {
        return aggregate_sf_exp(p, t, u);
    }
    let h = RuinContour::new(p, u, c, t);
    let r = h.radius();
    let m = h.s.min(1.0 / h.s);
    let phi = h.phi(r);
    let z0 = Complex64::new(r, 0.0);
    let peak = h.h(z0).norm();

    // angular scales: the Gaussian bump exp(phi (cos x - 1)) and the nearest pole
    let pole = (1.0 - h.s * r).abs().min((1.0 - h.s / r).abs());
    let mut scale = (1.0 / phi.max(1e-300).sqrt()).min(pole).min(1.0);
    let mut pts = Vec::new();
    while scale < PI {
        pts.push(scale);
        scale *= 2.0;
    }
    let mut finest = pts.first().copied().unwrap_or(1.0);
    for _ in 0..6 {
        finest *= 0.25;
        pts.push(finest);
    }

    let opts = QuadOptions { abs_tol: 1e-13 * peak.max(1.0), rel_tol: 1e-11, max_segments: 4000 };
    let j = integrate(|x| h.h(Complex64::from_polar(r, x)).re, 0.0, PI, &pts, opts)?.value / PI;
    let ultimate = ruin_ultimate_exp(p, u, c)?;
    let residue = if r > m { ultimate } else { 0.0 };
    // ruin by t implies ruin ever; the cap removes quadrature noise above the limit
    Ok(clamp_probability(residue - j, "finite-horizon ruin probability")?.min(ultimate))
}

/// The unit-circle form of the finite-horizon ruin probability, with the
/// trigonometric integrand written out and evaluated by composite
/// Gauss–Legendre panels scaled to the oscillation frequency.
///
/// Accurate for `c >= c*`; below `c*` it cancels catastrophically for
/// moderate `u` and serves only as a reference.
pub fn ruin_finite_exp_unit_circle(p: &ExpPair, u: f64, c: f64, t: f64) -> Result<f64> {
    check_nonneg("u", u)?;
    check_pos("c", c)?;
    check_pos("t", t)?;
    let q = p.delta / (c * p.rho);
    let s = q.sqrt();
    let freq = u * p.rho * s;
    let f = |x: f64| {
        let (sin, cos) = x.sin_cos();
        let d = 1.0 + q - 2.0 * s * cos;
        let expo = u * p.rho * (s * cos - 1.0) - t * p.delta * (c * p.rho / p.delta) * d;
        let osc = (freq * sin).cos() - (freq * sin + 2.0 * x).cos();
        q / d * expo.exp() * osc
    };
    let panels = ((1.0 + freq).ceil() as usize).max(64);
    let j = GaussLegendre::new(16).composite(f, 0.0, PI, panels) / PI;
    clamp_probability(ruin_ultimate_exp(p, u, c)? - j, "finite-horizon ruin probability")
}
