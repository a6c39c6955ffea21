//! The compound renewal risk model and its derived constants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::exact::ExpPair;

/// Inter-claim time law `T` and claim size law `Y`, independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskModel {
    pub t_law: Distribution,
    pub y_law: Distribution,
}

/// Scalar constants shared by the approximations.
///
/// `(m_big, d2_big)` is the level-crossing normalization, `(m_v, d2_v)` the
/// aggregate-claims normalization and `(m_n, d2_n)` the claim-count one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub c_star: f64,
    pub m_big: f64,
    pub d2_big: f64,
    pub m_v: f64,
    pub d2_v: f64,
    pub m_n: f64,
    pub d2_n: f64,
}

impl DerivedConstants {
    /// `D / M^{3/2}`, the scale of the square-root term in the asymptotic capitals.
    pub fn sqrt_scale(&self) -> f64 {
        self.d2_big.sqrt() / self.m_big.powf(1.5)
    }
}

/// Which capital a point refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapitalKind {
    Var,
    Nonruin,
    Ultimate,
}

/// How a capital or probability was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactExp,
    Clt,
    InverseGaussian,
    Cramer,
    MonteCarlo,
    BoundUpper,
    BoundLower,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactExp => "exact_exp",
            Method::Clt => "clt",
            Method::InverseGaussian => "inverse_gaussian",
            Method::Cramer => "cramer",
            Method::MonteCarlo => "monte_carlo",
            Method::BoundUpper => "bound_upper",
            Method::BoundLower => "bound_lower",
        }
    }
}

/// One solved point of a capital curve. `u` is never negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapitalPoint {
    pub c: f64,
    pub u: f64,
    pub kind: CapitalKind,
    pub method: Method,
    /// The defining equation had no positive root and `u` was set to zero.
    pub clamped: bool,
    /// Enclosing interval when the backend only brackets the capital.
    pub interval: Option<(f64, f64)>,
}

/// Which hypotheses of the approximation results a model satisfies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preconditions {
    pub bounded_density_t: bool,
    pub bounded_density_y: bool,
    pub d2_positive: bool,
    pub third_moment_t: bool,
    pub third_moment_y: bool,
    pub adjustment_coefficient: bool,
}

impl Preconditions {
    /// Hypotheses of the uniform inverse Gaussian approximation.
    pub fn inverse_gaussian(&self) -> bool {
        self.bounded_density_t && self.bounded_density_y && self.d2_positive && self.third_moment_t && self.third_moment_y
    }

    /// Hypotheses of the asymptotic capital representations; same moment conditions.
    pub fn asymptotic_capital(&self) -> bool {
        self.inverse_gaussian()
    }

    /// Hypotheses of the Cramér-type approximations.
    pub fn cramer(&self) -> bool {
        self.adjustment_coefficient && self.bounded_density_t && self.bounded_density_y
    }

    /// Human-readable list of failed hypotheses.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.bounded_density_t {
            w.push("density of T is unbounded".to_string());
        }
        if !self.bounded_density_y {
            w.push("density of Y is unbounded".to_string());
        }
        if !self.d2_positive {
            w.push("D^2 is not available or not positive".to_string());
        }
        if !self.third_moment_t {
            w.push("third moment of T is not finite".to_string());
        }
        if !self.third_moment_y {
            w.push("third moment of Y is not finite".to_string());
        }
        if !self.adjustment_coefficient {
            w.push("Lundberg condition fails: Y has no finite exponential moment".to_string());
        }
        w
    }
}

impl fmt::Display for RiskModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T ~ {}, Y ~ {}", self.t_law, self.y_law)
    }
}

impl RiskModel {
    pub fn new(t_law: Distribution, y_law: Distribution) -> Result<Self> {
        Ok(RiskModel { t_law: t_law.validated()?, y_law: y_law.validated()? })
    }

    /// Exponential/exponential model with claim rate `delta` and claim size rate `rho`.
    pub fn exponential(delta: f64, rho: f64) -> Result<Self> {
        RiskModel::new(Distribution::exponential(delta)?, Distribution::exponential(rho)?)
    }

    /// The `(delta, rho)` pair when both laws are exponential.
    pub fn exp_pair(&self) -> Option<ExpPair> {
        match (self.t_law, self.y_law) {
            (Distribution::Exponential { rate: delta }, Distribution::Exponential { rate: rho }) => {
                Some(ExpPair { delta, rho })
            }
            _ => None,
        }
    }

    /// `c* = EY / ET`; needs only the two means.
    pub fn c_star(&self) -> Result<f64> {
        let et = mean_of(&self.t_law, "T")?;
        let ey = mean_of(&self.y_law, "Y")?;
        Ok(ey / et)
    }

    pub fn derived_constants(&self) -> Result<DerivedConstants> {
        let mt = moments_of(&self.t_law, "T")?;
        let my = moments_of(&self.y_law, "Y")?;
        let (et, dt, ey, dy) = (mt.mean, mt.variance, my.mean, my.variance);
        let cross = et * et * dy + ey * ey * dt;
        Ok(DerivedConstants {
            c_star: ey / et,
            m_big: et / ey,
            d2_big: cross / (ey * ey * ey),
            m_v: ey / et,
            d2_v: cross / (et * et * et),
            m_n: 1.0 / et,
            d2_n: dt / (et * et * et),
        })
    }

    pub fn preconditions(&self) -> Preconditions {
        let d2_positive = self.derived_constants().map(|k| k.d2_big > 0.0).unwrap_or(false);
        let third = |d: &Distribution| d.raw_moment(3).is_ok();
        Preconditions {
            bounded_density_t: self.t_law.has_bounded_density(),
            bounded_density_y: self.y_law.has_bounded_density(),
            d2_positive,
            third_moment_t: third(&self.t_law),
            third_moment_y: third(&self.y_law),
            adjustment_coefficient: self.y_law.is_light_tailed(),
        }
    }
}

fn unavailable(law: &Distribution, which: &str, e: Error) -> Error {
    Error::ConstantsUnavailable { law: format!("{which} ~ {law}"), reason: e.to_string() }
}

fn mean_of(d: &Distribution, which: &str) -> Result<f64> {
    d.raw_moment(1).map_err(|e| unavailable(d, which, e))
}

fn moments_of(d: &Distribution, which: &str) -> Result<crate::dist::MomentSet> {
    d.moments().map_err(|e| unavailable(d, which, e))
}
