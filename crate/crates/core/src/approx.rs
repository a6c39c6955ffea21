//! Approximations: the normal Value-at-Risk, the inverse Gaussian ruin
//! approximation, the exponential-case Cramér approximation and the
//! asymptotic capital formulas at `c = 0` and `c = c*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExpPair;
use crate::model::{DerivedConstants, RiskModel};
use crate::quad::{integrate, QuadOptions};
use crate::special::{inverse_gaussian_cdf, inverse_gaussian_cdf_scaled, normal_cdf, normal_pdf, Probability};

/// Half-width of the window around `c M = 1` where the closed form is
/// replaced by the integral form.
pub const IG_BOUNDARY_WINDOW: f64 = 1e-6;

fn tail_alpha(alpha: Probability) -> Result<f64> {
    let a = alpha.value();
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::domain(format!("alpha must lie in (0, 1/2), got {a}")));
    }
    Ok(a)
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and positive, got {v}")))
    }
}

/// Normal-approximation Value-at-Risk `max{0, (M_V - c) t + z_alpha D_V sqrt(t)}`.
pub fn var_clt(m: &RiskModel, alpha: Probability, t: f64, c: f64) -> Result<f64> {
    var_clt_with(&m.derived_constants()?, alpha, t, c)
}

pub fn var_clt_with(k: &DerivedConstants, alpha: Probability, t: f64, c: f64) -> Result<f64> {
    tail_alpha(alpha)?;
    check_pos("t", t)?;
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::domain(format!("c must be nonnegative, got {c}")));
    }
    let z = alpha.upper_quantile()?;
    Ok(((k.m_v - c) * t + z * k.d2_v.sqrt() * t.sqrt()).max(0.0))
}

/// Which representation of the inverse Gaussian approximation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IgForm {
    Integral,
    Closed,
}

/// Parameters of the closed form; `mu` is `1/(1 - cM)` below `c*` and
/// `1/(cM - 1)` above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgParams {
    pub mu: f64,
    pub lambda: f64,
    pub supercritical: bool,
}

/// Closed-form parameters, or `None` inside the boundary window around `cM = 1`.
pub fn ig_params(k: &DerivedConstants, u: f64, c: f64) -> Option<IgParams> {
    let cm = c * k.m_big;
    let lambda = u / (c * c * k.d2_big);
    if cm < 1.0 - IG_BOUNDARY_WINDOW {
        Some(IgParams { mu: 1.0 / (1.0 - cm), lambda, supercritical: false })
    } else if cm > 1.0 + IG_BOUNDARY_WINDOW {
        Some(IgParams { mu: 1.0 / (cm - 1.0), lambda, supercritical: true })
    } else {
        None
    }
}

/// Inverse Gaussian approximation of `P{tau(u, c) <= t}`.
pub fn ig_ruin_probability(m: &RiskModel, u: f64, c: f64, t: f64, form: IgForm) -> Result<f64> {
    ig_ruin_probability_with(&m.derived_constants()?, u, c, t, form)
}

pub fn ig_ruin_probability_with(k: &DerivedConstants, u: f64, c: f64, t: f64, form: IgForm) -> Result<f64> {
    if c == 0.0 {
        return Err(Error::NotApplicable(
            "inverse Gaussian approximation needs c > 0; at c = 0 use the aggregate-claims law".into(),
        ));
    }
    check_pos("u", u)?;
    check_pos("c", c)?;
    check_pos("t", t)?;
    let params = ig_params(k, u, c);
    let raw = match (form, params) {
        (IgForm::Closed, Some(p)) => {
            let x = c * t / u + 1.0;
            if p.supercritical {
                inverse_gaussian_cdf_scaled(x, p.mu, p.lambda)? - inverse_gaussian_cdf_scaled(1.0, p.mu, p.lambda)?
            } else {
                inverse_gaussian_cdf(x, p.mu, p.lambda)? - inverse_gaussian_cdf(1.0, p.mu, p.lambda)?
            }
        }
        _ => ig_integral(k, u, c, t)?,
    };
    Ok(raw.clamp(0.0, 1.0))
}

fn ig_integral(k: &DerivedConstants, u: f64, c: f64, t: f64) -> Result<f64> {
    let cm = c * k.m_big;
    let var_scale = c * c * k.d2_big / u;
    let upper = c * t / u;
    let f = |x: f64| {
        let y = x + 1.0;
        normal_pdf(x, cm * y, var_scale * y).map(|d| d / y).unwrap_or(0.0)
    };
    // the Gaussian factor peaks where x = cM (x + 1)
    let center = if cm < 1.0 { cm / (1.0 - cm) } else { 0.0 };
    let sd = (var_scale * (center + 1.0)).sqrt() / (1.0 - cm).abs().max(1e-3);
    let mut pts = vec![center];
    for j in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        pts.push(center - j * sd);
        pts.push(center + j * sd);
    }
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_segments: 4000 };
    Ok(integrate(f, 0.0, upper, &pts, opts)?.value)
}

/// Constants of the Cramér-type approximation for exponential `T` and `Y`,
/// evaluated as printed with `q = delta / (c rho)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CramerConstants {
    pub c_const: f64,
    pub kappa: f64,
    pub m_down: f64,
    pub d2_down: f64,
    pub m_up: f64,
    pub d2_up: f64,
    pub supercritical: bool,
}

pub fn cramer_constants_exp(p: &ExpPair, c: f64) -> Result<CramerConstants> {
    check_pos("c", c)?;
    let q = p.delta / (c * p.rho);
    if (q - 1.0).abs() <= 1e-12 {
        return Err(Error::NotApplicable("Cramér approximation excluded at c = c*".into()));
    }
    let one_q = 1.0 - q;
    let k = CramerConstants {
        c_const: q,
        kappa: p.rho * one_q,
        m_down: -1.0 / (c * one_q),
        d2_down: -2.0 * q / (c * c * p.rho * one_q.powi(3)),
        m_up: q / (c * one_q),
        d2_up: 2.0 * q / (c * c * p.rho * one_q.powi(3)),
        supercritical: q < 1.0,
    };
    if k.supercritical {
        debug_assert!(k.m_up > 0.0 && k.d2_up > 0.0);
    } else {
        debug_assert!(k.m_down > 0.0 && k.d2_down > 0.0);
    }
    Ok(k)
}

/// Cramér-type approximation of `P{tau(u, c) <= t}`.
pub fn cramer_ruin_exp(p: &ExpPair, u: f64, c: f64, t: f64) -> Result<f64> {
    check_pos("u", u)?;
    check_pos("t", t)?;
    let k = cramer_constants_exp(p, c)?;
    let v = if k.supercritical {
        k.c_const * (-k.kappa * u).exp() * normal_cdf(t, k.m_up * u, k.d2_up * u)?
    } else {
        normal_cdf(t, k.m_down * u, k.d2_down * u)?
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Asymptotic non-ruin capital at `c = 0` and at `c = c*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEndpoints {
    pub u_at_zero: f64,
    pub u_at_cstar: f64,
    /// Failed moment hypotheses; the values are still returned.
    pub warnings: Vec<String>,
}

pub fn capital_asymptotic_endpoints(m: &RiskModel, alpha: Probability, t: f64) -> Result<AsymptoticEndpoints> {
    let a = tail_alpha(alpha)?;
    check_pos("t", t)?;
    let k = m.derived_constants()?;
    let pre = m.preconditions();
    let warnings = if pre.asymptotic_capital() { Vec::new() } else { pre.warnings() };
    for w in &warnings {
        log::warn!("asymptotic capital for {m}: {w}");
    }
    let z = alpha.upper_quantile()?;
    let z2 = Probability::new(0.5 * a)?.upper_quantile()?;
    let scale = k.sqrt_scale() * t.sqrt();
    Ok(AsymptoticEndpoints { u_at_zero: t / k.m_big + scale * z, u_at_cstar: scale * z2, warnings })
}

/// Two-sided asymptotic band for the non-ruin capital on `0 <= c <= c*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticBand {
    pub lower: f64,
    pub upper: f64,
}

pub fn capital_asymptotic_bounds(m: &RiskModel, alpha: Probability, t: f64, c: f64) -> Result<AsymptoticBand> {
    capital_asymptotic_bounds_with(&m.derived_constants()?, alpha, t, c)
}

pub fn capital_asymptotic_bounds_with(
    k: &DerivedConstants,
    alpha: Probability,
    t: f64,
    c: f64,
) -> Result<AsymptoticBand> {
    let a = tail_alpha(alpha)?;
    check_pos("t", t)?;
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::domain(format!("c must be nonnegative, got {c}")));
    }
    if c > k.c_star * (1.0 + 1e-12) {
        return Err(Error::NotApplicable(format!(
            "asymptotic band holds for c <= c* = {}; use the Lundberg bounds above c*",
            k.c_star
        )));
    }
    let drift = (k.c_star - c).max(0.0) * t;
    let scale = k.sqrt_scale() * t.sqrt();
    let z = alpha.upper_quantile()?;
    let z2 = Probability::new(0.5 * a)?.upper_quantile()?;
    Ok(AsymptoticBand { lower: drift + scale * z, upper: drift + scale * z2 })
}
