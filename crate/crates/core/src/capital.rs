//! Capital solvers: invert a probability backend in `u`.
//!
//! The Value-at-Risk solves `P{V_t > u + c t} = alpha` and the non-ruin
//! capital solves `P{tau(u, c) <= t} = alpha`. When the probability at
//! `u = 0` is already below `alpha` the capital is set to zero and flagged.

use serde::{Deserialize, Serialize};

use crate::approx::{capital_asymptotic_bounds_with, ig_ruin_probability_with, var_clt_with, IgForm};
use crate::bounds::{lundberg_ratio_bounds, ultimate_capital_exp, RatioVariant};
use crate::error::{Error, Result};
use crate::exact::{aggregate_sf_exp, ruin_finite_exp, ExpPair};
use crate::model::{CapitalKind, CapitalPoint, DerivedConstants, Method, RiskModel};
use crate::montecarlo::{simulate, SimConfig};
use crate::roots::{brent, RootOptions};
use crate::special::Probability;

/// Default root tolerance on `u` relative to the search bracket.
pub const U_TOL_REL: f64 = 1e-12;

/// Probability backend used to define the capital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ExactExp,
    InverseGaussian,
    MonteCarlo,
    Clt,
}

impl Backend {
    pub fn method(self) -> Method {
        match self {
            Backend::ExactExp => Method::ExactExp,
            Backend::InverseGaussian => Method::InverseGaussian,
            Backend::MonteCarlo => Method::MonteCarlo,
            Backend::Clt => Method::Clt,
        }
    }
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveSpec {
    pub backend: Backend,
    /// Absolute tolerance on `u`; defaults to `U_TOL_REL` times the bracket.
    pub u_tolerance: Option<f64>,
    /// Largest admissible `|P(u) - alpha|` at a returned positive root.
    pub p_tolerance: f64,
    /// Upper end of the search bracket; defaults to the asymptotic upper
    /// band plus `10 D / M^{3/2} sqrt(t)`.
    pub max_bracket: Option<f64>,
    /// Simulation settings for the Monte Carlo backend.
    pub sim: Option<SimConfig>,
}

impl SolveSpec {
    pub fn new(backend: Backend) -> Self {
        SolveSpec { backend, u_tolerance: None, p_tolerance: 1e-6, max_bracket: None, sim: None }
    }

    pub fn monte_carlo(sim: SimConfig) -> Self {
        SolveSpec { sim: Some(sim), ..SolveSpec::new(Backend::MonteCarlo) }
    }
}

fn check_args(alpha: Probability, t: f64, c: f64) -> Result<f64> {
    let a = alpha.value();
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::domain(format!("alpha must lie in (0, 1/2), got {a}")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("t must be positive, got {t}")));
    }
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::domain(format!("c must be nonnegative, got {c}")));
    }
    Ok(a)
}

fn exp_pair(m: &RiskModel) -> Result<ExpPair> {
    m.exp_pair()
        .ok_or_else(|| Error::Incompatible("exact requires exponential pair".into()))
}

fn default_bracket(k: &DerivedConstants, alpha: Probability, t: f64, c: f64) -> Result<f64> {
    let band = capital_asymptotic_bounds_with(k, alpha, t, c.min(k.c_star))?;
    Ok(band.upper + 10.0 * k.sqrt_scale() * t.sqrt())
}

struct Bracket {
    hi: f64,
    x_tol: f64,
}

fn bracket(m: &RiskModel, alpha: Probability, t: f64, c: f64, spec: &SolveSpec) -> Result<Bracket> {
    let hi = match spec.max_bracket {
        Some(b) if b.is_finite() && b > 0.0 => b,
        Some(b) => return Err(Error::domain(format!("max_bracket must be positive, got {b}"))),
        None => default_bracket(&m.derived_constants()?, alpha, t, c)?,
    };
    let x_tol = spec.u_tolerance.unwrap_or(U_TOL_REL * hi.max(1.0));
    Ok(Bracket { hi, x_tol })
}

fn point(c: f64, u: f64, kind: CapitalKind, method: Method, clamped: bool) -> CapitalPoint {
    CapitalPoint { c, u, kind, method, clamped, interval: None }
}

/// Root of a nonincreasing `p(u) = alpha` on `[lo, hi]`, or a clamped zero.
fn solve_nonincreasing<F: FnMut(f64) -> Result<f64>>(
    mut p: F,
    alpha: f64,
    lo: f64,
    hi: f64,
    x_tol: f64,
    p_tol: f64,
) -> Result<(f64, bool)> {
    if lo == 0.0 {
        let p0 = p(0.0)?;
        if p0 < alpha {
            return Ok((0.0, true));
        }
        if p0 == alpha {
            return Ok((0.0, false));
        }
    }
    if p(hi)? > alpha {
        return Err(Error::NoSolution(hi));
    }
    let u = brent(|u| Ok(p(u)? - alpha), lo, hi, RootOptions { x_tol, f_tol: 0.0, max_iter: 300 })?;
    let residual = (p(u)? - alpha).abs();
    if residual > p_tol {
        return Err(Error::RootFinding(format!("residual {residual:e} at u = {u} exceeds {p_tol:e}")));
    }
    Ok((u, false))
}

/// Largest root of `p(u) = alpha` for a probability that first rises and
/// then falls in `u`, found by a geometric scan downward from `hi`.
fn solve_largest_root<F: FnMut(f64) -> Result<f64>>(
    mut p: F,
    alpha: f64,
    hi: f64,
    x_tol: f64,
    p_tol: f64,
) -> Result<(f64, bool)> {
    if p(hi)? >= alpha {
        return Err(Error::NoSolution(hi));
    }
    let mut upper = hi;
    let floor = hi * 1e-10;
    while upper > floor {
        let lower = upper * 0.9;
        if p(lower)? >= alpha {
            let u = brent(|u| Ok(p(u)? - alpha), lower, upper, RootOptions { x_tol, f_tol: 0.0, max_iter: 300 })?;
            let residual = (p(u)? - alpha).abs();
            if residual > p_tol {
                return Err(Error::RootFinding(format!("residual {residual:e} at u = {u} exceeds {p_tol:e}")));
            }
            return Ok((u, false));
        }
        upper = lower;
    }
    Ok((0.0, true))
}

/// Value-at-Risk `u` with `P{V_t > u + c t} = alpha`.
pub fn var_capital(m: &RiskModel, alpha: Probability, t: f64, c: f64, spec: &SolveSpec) -> Result<CapitalPoint> {
    let a = check_args(alpha, t, c)?;
    let method = spec.backend.method();
    match spec.backend {
        Backend::Clt => {
            let u = var_clt_with(&m.derived_constants()?, alpha, t, c)?;
            Ok(point(c, u, CapitalKind::Var, method, u == 0.0))
        }
        Backend::ExactExp => {
            let p = exp_pair(m)?;
            let b = bracket(m, alpha, t, c, spec)?;
            let (u, clamped) =
                solve_nonincreasing(|u| aggregate_sf_exp(&p, t, u + c * t), a, 0.0, b.hi, b.x_tol, spec.p_tolerance)?;
            Ok(point(c, u, CapitalKind::Var, method, clamped))
        }
        Backend::MonteCarlo => {
            let est = monte_carlo_capitals(m, alpha, t, &[c], spec)?.remove(0);
            Ok(est.0)
        }
        Backend::InverseGaussian => Err(Error::Incompatible(
            "the inverse Gaussian approximation describes ruin, not the aggregate claims; use clt".into(),
        )),
    }
}

/// Non-ruin capital `u` with `P{tau(u, c) <= t} = alpha`.
pub fn nonruin_capital(m: &RiskModel, alpha: Probability, t: f64, c: f64, spec: &SolveSpec) -> Result<CapitalPoint> {
    nonruin_capital_from(m, alpha, t, c, spec, None)
}

fn nonruin_capital_from(
    m: &RiskModel,
    alpha: Probability,
    t: f64,
    c: f64,
    spec: &SolveSpec,
    warm: Option<f64>,
) -> Result<CapitalPoint> {
    let a = check_args(alpha, t, c)?;
    let method = spec.backend.method();
    match spec.backend {
        Backend::ExactExp => {
            let p = exp_pair(m)?;
            let b = bracket(m, alpha, t, c, spec)?;
            let f = |u: f64| ruin_finite_exp(&p, u, c, t);
            if let Some(prev) = warm {
                let hi = (prev + 10.0 * b.x_tol).min(b.hi);
                if let Ok((u, clamped)) = solve_nonincreasing(f, a, 0.0, hi, b.x_tol, spec.p_tolerance) {
                    return Ok(point(c, u, CapitalKind::Nonruin, method, clamped));
                }
            }
            let (u, clamped) = solve_nonincreasing(f, a, 0.0, b.hi, b.x_tol, spec.p_tolerance)?;
            Ok(point(c, u, CapitalKind::Nonruin, method, clamped))
        }
        Backend::InverseGaussian => {
            if c == 0.0 {
                let mut pt = var_capital(m, alpha, t, 0.0, &SolveSpec { backend: Backend::Clt, ..*spec })?;
                pt.kind = CapitalKind::Nonruin;
                pt.method = Method::InverseGaussian;
                return Ok(pt);
            }
            let k = m.derived_constants()?;
            let b = bracket(m, alpha, t, c, spec)?;
            let (u, clamped) = solve_largest_root(
                |u| ig_ruin_probability_with(&k, u, c, t, IgForm::Closed),
                a,
                b.hi,
                b.x_tol,
                spec.p_tolerance,
            )?;
            Ok(point(c, u, CapitalKind::Nonruin, method, clamped))
        }
        Backend::MonteCarlo => Ok(monte_carlo_capitals(m, alpha, t, &[c], spec)?.remove(0).1),
        Backend::Clt => Err(Error::Incompatible(
            "the normal approximation describes the aggregate claims only; use exact_exp, inverse_gaussian or monte_carlo"
                .into(),
        )),
    }
}

fn monte_carlo_capitals(
    m: &RiskModel,
    alpha: Probability,
    t: f64,
    cs: &[f64],
    spec: &SolveSpec,
) -> Result<Vec<(CapitalPoint, CapitalPoint)>> {
    let mut cfg = spec.sim.ok_or_else(|| Error::Usage("monte_carlo backend needs simulation settings".into()))?;
    cfg.t = t;
    let set = simulate(m, cs, &cfg)?;
    (0..cs.len())
        .map(|j| {
            let e = set.capitals(j, alpha)?;
            for w in &e.warnings {
                log::warn!("{w}");
            }
            let mk = |est: crate::montecarlo::Estimate, kind| CapitalPoint {
                c: cs[j],
                u: est.point,
                kind,
                method: Method::MonteCarlo,
                clamped: est.point == 0.0,
                interval: Some(est.ci95),
            };
            Ok((mk(e.var_cap, CapitalKind::Var), mk(e.nonruin_cap, CapitalKind::Nonruin)))
        })
        .collect()
}

/// Ultimate capital `u_alpha(c)` inverting the infinite-horizon ruin probability.
///
/// Exact in the exponential model. For other light-tailed claims the
/// capital is only bracketed; the point is the interval midpoint.
pub fn ultimate_capital(m: &RiskModel, alpha: Probability, c: f64, _spec: &SolveSpec) -> Result<CapitalPoint> {
    let c_star = m.c_star()?;
    if !(c > c_star) {
        return Err(Error::Infinite(format!("u_alpha(c) is infinite for c <= c* = {c_star}")));
    }
    if let Some(p) = m.exp_pair() {
        let u = ultimate_capital_exp(&p, alpha, c)?;
        return Ok(point(c, u, CapitalKind::Ultimate, Method::ExactExp, u == 0.0));
    }
    let rb = lundberg_ratio_bounds(m, c, RatioVariant::YBased)?;
    let (lo, hi) = rb.capital_interval(alpha)?;
    let u = 0.5 * (lo + hi);
    Ok(CapitalPoint {
        c,
        u,
        kind: CapitalKind::Ultimate,
        method: Method::BoundUpper,
        clamped: hi == 0.0,
        interval: Some((lo, hi)),
    })
}

/// Solved points along a premium grid; per-point failures are kept.
#[derive(Debug, Clone)]
pub struct CapitalCurve {
    pub c: Vec<f64>,
    pub points: Vec<Result<CapitalPoint>>,
}

fn check_grid(c_grid: &[f64]) -> Result<()> {
    if c_grid.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
        return Err(Error::domain("premium grid must be finite and nonnegative"));
    }
    if c_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("premium grid must be strictly increasing"));
    }
    Ok(())
}

/// Capital of the given kind at every grid point. Deterministic solvers
/// warm-start from the previous solution; Monte Carlo uses one path set
/// for the whole grid.
pub fn capital_curve(
    m: &RiskModel,
    alpha: Probability,
    t: f64,
    c_grid: &[f64],
    kind: CapitalKind,
    spec: &SolveSpec,
) -> Result<CapitalCurve> {
    check_grid(c_grid)?;
    let c = c_grid.to_vec();
    if c_grid.is_empty() {
        return Ok(CapitalCurve { c, points: Vec::new() });
    }
    if spec.backend == Backend::MonteCarlo && kind != CapitalKind::Ultimate {
        let pts = monte_carlo_capitals(m, alpha, t, c_grid, spec)?;
        let points =
            pts.into_iter().map(|(v, n)| Ok(if kind == CapitalKind::Var { v } else { n })).collect();
        return Ok(CapitalCurve { c, points });
    }
    let mut prev: Option<f64> = None;
    let points = c_grid
        .iter()
        .map(|&ci| {
            let r = match kind {
                CapitalKind::Var => var_capital(m, alpha, t, ci, spec),
                CapitalKind::Nonruin => nonruin_capital_from(m, alpha, t, ci, spec, prev),
                CapitalKind::Ultimate => ultimate_capital(m, alpha, ci, spec),
            };
            prev = r.as_ref().ok().map(|p| p.u);
            r
        })
        .collect();
    Ok(CapitalCurve { c, points })
}
