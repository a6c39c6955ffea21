//! Adjustment coefficient and bounds on the ultimate non-ruin capital.

use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, Mgf};
use crate::error::{Error, Result};
use crate::exact::ExpPair;
use crate::model::RiskModel;
use crate::quad::{integrate, QuadOptions};
use crate::roots::{brent, RootOptions};
use crate::special::Probability;

/// How `kappa` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaMethod {
    ClosedForm,
    RootFind,
}

/// Positive root `kappa` of `E exp(kappa Y) E exp(-kappa c T) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentCoefficient {
    pub kappa: f64,
    pub method: KappaMethod,
    pub bracket: (f64, f64),
}

fn finite_mgf(d: &Distribution, r: f64) -> Result<Option<f64>> {
    Ok(match d.mgf(r)? {
        Mgf::Finite(v) => Some(v),
        Mgf::Divergent => None,
    })
}

/// `ln E exp(r Y) + ln E exp(-r c T)`; convex in `r`, zero at `r = 0`.
fn lundberg_function(m: &RiskModel, c: f64, r: f64) -> Result<f64> {
    let my = finite_mgf(&m.y_law, r)?.ok_or_else(|| Error::NoAdjustmentCoefficient(format!("E exp({r} Y) diverges")))?;
    let mt = finite_mgf(&m.t_law, -c * r)?.expect("mgf of a positive law is finite at negative arguments");
    Ok(my.ln() + mt.ln())
}

/// Residual `E exp(kappa Y) E exp(-kappa c T) - 1`.
pub fn lundberg_residual(m: &RiskModel, c: f64, kappa: f64) -> Result<f64> {
    Ok(lundberg_function(m, c, kappa)?.exp_m1())
}

pub fn adjustment_coefficient(m: &RiskModel, c: f64) -> Result<AdjustmentCoefficient> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    if !m.y_law.is_light_tailed() {
        return Err(Error::NoAdjustmentCoefficient(format!("claim law {} is heavy-tailed", m.y_law)));
    }
    let c_star = m.c_star()?;
    if c <= c_star {
        return Err(Error::NoAdjustmentCoefficient(format!("no positive root for c = {c} <= c* = {c_star}")));
    }
    let abscissa = m.y_law.mgf_abscissa();
    if let Some(p) = m.exp_pair() {
        let kappa = p.rho - p.delta / c;
        return Ok(AdjustmentCoefficient { kappa, method: KappaMethod::ClosedForm, bracket: (kappa, kappa) });
    }

    let mut hi = 0.999_999 * abscissa;
    while lundberg_function(m, c, hi)? <= 0.0 {
        hi = abscissa - 0.1 * (abscissa - hi);
        if abscissa - hi < 1e-14 * abscissa {
            return Err(Error::RootFinding(format!("Lundberg function stays negative below {abscissa}")));
        }
    }
    let mut lo = 0.5 * hi;
    let mut guard = 0;
    while lundberg_function(m, c, lo)? >= 0.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 200 {
            return Err(Error::RootFinding("no negative value of the Lundberg function near 0".into()));
        }
    }
    let opts = RootOptions { x_tol: 1e-15 * abscissa, f_tol: 0.0, max_iter: 200 };
    let kappa = brent(|r| lundberg_function(m, c, r), lo, hi, opts)?;
    Ok(AdjustmentCoefficient { kappa, method: KappaMethod::RootFind, bracket: (lo, hi) })
}

fn check_alpha(alpha: Probability) -> Result<f64> {
    let a = alpha.value();
    if a <= 0.0 {
        return Err(Error::domain("alpha must be positive"));
    }
    Ok(a)
}

/// `max{0, -ln(alpha c rho / delta) / (rho - delta / c)}`, valid for `c > c*`.
pub fn capital_upper_bound_exp(p: &ExpPair, alpha: Probability, c: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    if !(c > p.c_star()) {
        return Err(Error::NotApplicable(format!("bound requires c > c* = {}", p.c_star())));
    }
    Ok((-(a * c * p.rho / p.delta).ln() / (p.rho - p.delta / c)).max(0.0))
}

/// Lundberg bound `-ln(alpha) / kappa`.
pub fn capital_upper_bound_lundberg(m: &RiskModel, alpha: Probability, c: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    let k = adjustment_coefficient(m, c)?;
    Ok((-a.ln() / k.kappa).max(0.0))
}

/// Exact ultimate capital in the exponential model.
pub fn ultimate_capital_exp(p: &ExpPair, alpha: Probability, c: f64) -> Result<f64> {
    let a = check_alpha(alpha)?;
    if !(c > p.c_star()) {
        return Err(Error::Infinite(format!("u_alpha(c) is infinite for c <= c* = {}", p.c_star())));
    }
    Ok((-(a * c * p.rho / p.delta).ln() * c / (c * p.rho - p.delta)).max(0.0))
}

/// Which law the ratio `exp(kappa x) P(Z > x) / int_x^inf exp(kappa y) dF_Z(y)` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioVariant {
    /// `Z = Y - c T`; needs a convolution over `T`.
    XBased,
    /// `Z = Y`; closed forms, wider bounds.
    YBased,
}

/// Constants with `b_minus exp(-kappa u) <= P{ruin} <= b_plus exp(-kappa u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub b_minus: f64,
    pub b_plus: f64,
    pub kappa: f64,
}

impl RatioBounds {
    /// Interval `[-ln(alpha / b_minus) / kappa, -ln(alpha / b_plus) / kappa]`, clamped at 0.
    pub fn capital_interval(&self, alpha: Probability) -> Result<(f64, f64)> {
        let a = check_alpha(alpha)?;
        let inv = |b: f64| if b > 0.0 { (-(a / b).ln() / self.kappa).max(0.0) } else { 0.0 };
        Ok((inv(self.b_minus), inv(self.b_plus)))
    }
}

struct RatioFn<'a> {
    m: &'a RiskModel,
    c: f64,
    kappa: f64,
    variant: RatioVariant,
    t_cut: f64,
}

impl RatioFn<'_> {
    fn eval(&self, x: f64) -> Result<f64> {
        let y = &self.m.y_law;
        let (num, den) = match self.variant {
            RatioVariant::YBased => ((self.kappa * x).exp() * y.sf(x)?, y.tilted_tail(self.kappa, x)?),
            RatioVariant::XBased => {
                let t = &self.m.t_law;
                let (c, k) = (self.c, self.kappa);
                let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-11, max_segments: 2000 };
                let mean = t.moments()?.mean;
                let pts = [0.1 * mean, mean, 4.0 * mean];
                let mut err = None;
                let sf = integrate(
                    |s| match (t.pdf(s), y.sf(x + c * s)) {
                        (Ok(f), Ok(g)) => f * g,
                        (Err(e), _) | (_, Err(e)) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    },
                    0.0,
                    self.t_cut,
                    &pts,
                    opts,
                )?
                .value;
                let tilted = integrate(
                    |s| match (t.pdf(s), y.tilted_tail(k, x + c * s)) {
                        (Ok(f), Ok(g)) => f * (-k * c * s).exp() * g,
                        (Err(e), _) | (_, Err(e)) => {
                            err.get_or_insert(e);
                            0.0
                        }
                    },
                    0.0,
                    self.t_cut,
                    &pts,
                    opts,
                )?
                .value;
                if let Some(e) = err {
                    return Err(e);
                }
                ((k * x).exp() * sf, tilted)
            }
        };
        if den <= 0.0 {
            return Err(Error::NotApplicable(format!("tilted tail vanishes at x = {x}")));
        }
        Ok((num / den).clamp(0.0, 1.0))
    }
}

fn golden_extremum<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, maximize: bool) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let sign = if maximize { -1.0 } else { 1.0 };
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = sign * f(x1)?;
    let mut f2 = sign * f(x2)?;
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = sign * f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = sign * f(x2)?;
        }
        if (b - a).abs() < 1e-10 * (1.0 + a.abs()) {
            break;
        }
    }
    Ok(sign * f1.min(f2))
}

/// Infimum and supremum of the tilted tail ratio over `x >= 0`, on a
/// log-spaced grid refined by golden-section search around the extremizers,
/// together with the limit of the ratio at infinity.
pub fn lundberg_ratio_bounds(m: &RiskModel, c: f64, variant: RatioVariant) -> Result<RatioBounds> {
    lundberg_ratio_bounds_with_grid(m, c, variant, 200)
}

pub fn lundberg_ratio_bounds_with_grid(
    m: &RiskModel,
    c: f64,
    variant: RatioVariant,
    grid_points: usize,
) -> Result<RatioBounds> {
    let kappa = adjustment_coefficient(m, c)?.kappa;
    let t_cut = if variant == RatioVariant::XBased { m.t_law.tail_cutoff(1e-16)? } else { 0.0 };
    let rf = RatioFn { m, c, kappa, variant, t_cut };

    let y_mean = m.y_law.moments()?.mean;
    let x_max = m.y_law.tail_cutoff(1e-10)?;
    let x_min = 1e-4 * y_mean;
    let n = grid_points.max(8);
    let mut xs = vec![0.0];
    for i in 0..n {
        xs.push(x_min * (x_max / x_min).powf(i as f64 / (n - 1) as f64));
    }
    let vals: Vec<f64> = xs.iter().map(|&x| rf.eval(x)).collect::<Result<_>>()?;

    let refine = |idx: usize, maximize: bool| -> Result<f64> {
        let lo = xs[idx.saturating_sub(1)];
        let hi = xs[(idx + 1).min(xs.len() - 1)];
        let v = golden_extremum(|x| rf.eval(x), lo, hi, maximize)?;
        Ok(if maximize { v.max(vals[idx]) } else { v.min(vals[idx]) })
    };
    let (imin, _) = vals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("grid is nonempty");
    let (imax, _) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("grid is nonempty");
    // as x grows both ratios tend to 1 - kappa / abscissa, beyond any finite grid
    let limit = 1.0 - kappa / m.y_law.mgf_abscissa();
    let b_minus = refine(imin, false)?.min(limit);
    let b_plus = refine(imax, true)?.max(limit);
    debug_assert!(0.0 <= b_minus && b_minus <= b_plus && b_plus <= 1.0);
    Ok(RatioBounds { b_minus, b_plus, kappa })
}
