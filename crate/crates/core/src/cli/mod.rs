//! Command-line front end: run configuration, ad-hoc queries and the figure
//! presets. Every command produces a [`CurveTable`] whose metadata carries
//! the command name and the fully resolved configuration, so
//! [`rerun`] regenerates the same bytes.

mod presets;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{capital_asymptotic_bounds_with, cramer_ruin_exp, ig_ruin_probability, IgForm};
use crate::bounds::{capital_upper_bound_exp, capital_upper_bound_lundberg};
use crate::capital::{nonruin_capital, ultimate_capital, var_capital, Backend, SolveSpec};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::exact::{ruin_finite_exp, ruin_ultimate_exp};
use crate::model::RiskModel;
use crate::montecarlo::{simulate, SimConfig};
use crate::special::Probability;
use crate::table::CurveTable;

pub use presets::{reproduce, table1_models, Artifact, Check, CheckStatus, PresetOptions, ReferenceValue, Sidecar, FIGURES};

/// Premium grid `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl CGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        CGrid { start, stop, step }
    }

    fn validate(&self) -> Result<()> {
        let CGrid { start, stop, step } = *self;
        if !(start.is_finite() && start >= 0.0) {
            return Err(Error::Usage(format!("c_grid.start must be finite and nonnegative, got {start}")));
        }
        if !(stop.is_finite() && start <= stop) {
            return Err(Error::Usage(format!("c_grid.stop must be finite and >= start, got {stop}")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Usage(format!("c_grid.step must be positive, got {step}")));
        }
        if (stop - start) / step > 1e6 {
            return Err(Error::Usage("c_grid has more than a million points".into()));
        }
        Ok(())
    }

    /// Grid points, rounded to 12 decimals so that decimal steps land on
    /// their decimal values.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12).collect())
    }
}

/// Backend names accepted by `--method` and the `methods` key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    #[serde(alias = "exact_exp")]
    Exact,
    Clt,
    #[serde(alias = "inverse_gaussian")]
    Ig,
    Cramer,
    #[serde(alias = "monte_carlo")]
    Mc,
    Bounds,
    Ultimate,
    Profile,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Exact => "exact",
            MethodName::Clt => "clt",
            MethodName::Ig => "ig",
            MethodName::Cramer => "cramer",
            MethodName::Mc => "mc",
            MethodName::Bounds => "bounds",
            MethodName::Ultimate => "ultimate",
            MethodName::Profile => "profile",
        }
    }
}

impl FromStr for MethodName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "exact" | "exact_exp" => MethodName::Exact,
            "clt" => MethodName::Clt,
            "ig" | "inverse_gaussian" => MethodName::Ig,
            "cramer" => MethodName::Cramer,
            "mc" | "monte_carlo" => MethodName::Mc,
            "bounds" => MethodName::Bounds,
            "ultimate" => MethodName::Ultimate,
            "profile" => MethodName::Profile,
            other => return Err(Error::Usage(format!("method: unknown backend {other:?}"))),
        })
    }
}

/// Simulation settings; the horizon comes from the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSettings {
    pub n_paths: usize,
    pub seed: u64,
    #[serde(default = "default_streams")]
    pub stream_count: u64,
}

fn default_streams() -> u64 {
    64
}

pub const DEFAULT_PATHS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1729;

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings { n_paths: DEFAULT_PATHS, seed: DEFAULT_SEED, stream_count: default_streams() }
    }
}

impl SimSettings {
    pub fn sim_config(&self, t: f64) -> SimConfig {
        SimConfig { n_paths: self.n_paths, seed: self.seed, t, stream_count: self.stream_count }
    }
}

/// A complete run description; also the TOML config file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub model: RiskModel,
    /// Further models, used by `constants` only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<RiskModel>,
    pub alpha: Probability,
    pub t: f64,
    pub c_grid: CGrid,
    /// Initial capital for `ruinprob`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    pub methods: Vec<MethodName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            label: None,
            model: RiskModel { t_law: Distribution::Exponential { rate: 1.0 }, y_law: Distribution::Exponential { rate: 1.0 } },
            models: Vec::new(),
            alpha: Probability::new(0.05).expect("valid"),
            t: 200.0,
            c_grid: CGrid::new(0.0, 2.5, 0.05),
            u: None,
            methods: vec![MethodName::Exact],
            sim: None,
            output_path: None,
        }
    }
}

fn check_law(field: &str, d: &Distribution) -> Result<()> {
    d.validated().map(|_| ()).map_err(|e| Error::Usage(format!("{field}: {e}")))
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Usage(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("config {}: {e}", path.display())))?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s).map_err(|e| Error::Usage(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn all_models(&self) -> Vec<RiskModel> {
        std::iter::once(self.model).chain(self.models.iter().copied()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        check_law("model.t_law", &self.model.t_law)?;
        check_law("model.y_law", &self.model.y_law)?;
        for (i, m) in self.models.iter().enumerate() {
            check_law(&format!("models[{i}].t_law"), &m.t_law)?;
            check_law(&format!("models[{i}].y_law"), &m.y_law)?;
        }
        let a = self.alpha.value();
        if !(a > 0.0 && a < 0.5) {
            return Err(Error::Usage(format!("alpha must lie in (0, 1/2), got {a}")));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(Error::Usage(format!("t must be positive, got {}", self.t)));
        }
        self.c_grid.validate()?;
        if let Some(u) = self.u {
            if !(u.is_finite() && u >= 0.0) {
                return Err(Error::Usage(format!("u must be finite and nonnegative, got {u}")));
            }
        }
        if self.methods.is_empty() {
            return Err(Error::Usage("methods: at least one backend is required".into()));
        }
        if let Some(s) = self.sim {
            if s.n_paths == 0 || s.stream_count == 0 {
                return Err(Error::Usage("sim: n_paths and stream_count must be positive".into()));
            }
        }
        Ok(())
    }

    /// Fill simulation defaults when a simulating backend is requested.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        if c.sim.is_none() && c.methods.contains(&MethodName::Mc) {
            c.sim = Some(SimSettings::default());
        }
        c
    }
}

/// Flag values that override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Horizon.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub c_start: Option<f64>,
    #[arg(long)]
    pub c_stop: Option<f64>,
    #[arg(long)]
    pub c_step: Option<f64>,
    /// Initial capital (ruinprob).
    #[arg(long)]
    pub u: Option<f64>,
    /// Comma-separated backends: exact, clt, ig, cramer, mc, bounds, ultimate, profile.
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<String>,
    /// Monte Carlo path count.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Monte Carlo seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (directory for `reproduce`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    /// Load the config file (or defaults) and apply the flags.
    pub fn to_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_path(p)?,
            None => RunConfig::default(),
        };
        if let Some(a) = self.alpha {
            cfg.alpha = Probability::new(a).map_err(|e| Error::Usage(format!("alpha: {e}")))?;
        }
        if let Some(t) = self.t {
            cfg.t = t;
        }
        if let Some(v) = self.c_start {
            cfg.c_grid.start = v;
        }
        if let Some(v) = self.c_stop {
            cfg.c_grid.stop = v;
        }
        if let Some(v) = self.c_step {
            cfg.c_grid.step = v;
        }
        if let Some(u) = self.u {
            cfg.u = Some(u);
        }
        if !self.method.is_empty() {
            cfg.methods = self.method.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        if self.paths.is_some() || self.seed.is_some() {
            let mut s = cfg.sim.unwrap_or_default();
            if let Some(n) = self.paths {
                s.n_paths = n;
            }
            if let Some(seed) = self.seed {
                s.seed = seed;
            }
            cfg.sim = Some(s);
        }
        if let Some(o) = &self.out {
            cfg.output_path = Some(o.display().to_string());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn has_model_overrides(&self) -> bool {
        self.config.is_some()
            || self.alpha.is_some()
            || self.t.is_some()
            || self.c_start.is_some()
            || self.c_stop.is_some()
            || self.c_step.is_some()
            || self.u.is_some()
            || !self.method.is_empty()
    }
}

#[derive(Debug, Parser)]
#[command(name = "ruincap", version, about = "Non-ruin capital and finite-horizon ruin probabilities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived constants and hypothesis report, one row per model.
    Constants(CommonArgs),
    /// Regenerate a figure or table preset (fig1..fig10, table1).
    Reproduce {
        figure: String,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Capital curves along the premium grid.
    Capital(CommonArgs),
    /// Finite-horizon ruin probabilities at capital `u` along the premium grid.
    Ruinprob(CommonArgs),
}

type Column = (String, Vec<Result<f64>>);

fn per_point<F>(grid: &[f64], f: F) -> Vec<Result<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.par_iter().map(|&c| f(c)).collect()
}

fn exp_only(m: &RiskModel, what: &str) -> Result<crate::exact::ExpPair> {
    m.exp_pair().ok_or_else(|| Error::Incompatible(format!("{what} requires exponential pair")))
}

fn new_table(command: &str, cfg: &RunConfig, header: Vec<String>) -> Result<CurveTable> {
    let mut t = CurveTable::new(header);
    t.push_meta("generator", format!("ruincap {}", env!("CARGO_PKG_VERSION")));
    t.push_meta("command", command);
    t.push_meta("config", cfg.to_json()?);
    t.push_meta("seed", cfg.sim.map_or_else(|| "NA".to_string(), |s| s.seed.to_string()));
    Ok(t)
}

fn compact_c_list(cs: &[f64]) -> String {
    if cs.len() <= 4 {
        cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    } else {
        format!("{}..{} ({} points)", cs[0], cs[cs.len() - 1], cs.len())
    }
}

/// Assemble the key column and method columns; failed cells become `NA`
/// with one `na` metadata line per (column, reason).
fn assemble(mut table: CurveTable, key: &[f64], columns: Vec<Column>, warnings: Vec<String>) -> Result<Outcome> {
    let failure = if columns.iter().all(|(_, cells)| cells.iter().all(|c| c.is_err())) {
        columns.iter().flat_map(|(_, cells)| cells.iter()).find_map(|c| c.as_ref().err().cloned())
    } else {
        None
    };
    let mut seen = Vec::new();
    for w in warnings {
        if !seen.contains(&w) {
            table.push_meta("warning", &w);
            seen.push(w);
        }
    }
    for (name, cells) in &columns {
        let mut reasons: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        let mut order = Vec::new();
        for (k, cell) in key.iter().zip(cells) {
            if let Err(e) = cell {
                let r = e.to_string();
                if !reasons.contains_key(&r) {
                    order.push(r.clone());
                }
                reasons.entry(r).or_default().push(*k);
            }
        }
        for r in order {
            table.push_meta("na", format!("{name} at {}: {r}", compact_c_list(&reasons[&r])));
        }
    }
    for (i, k) in key.iter().enumerate() {
        let mut row = vec![Some(*k)];
        row.extend(columns.iter().map(|(_, cells)| cells[i].as_ref().ok().copied()));
        table.push_row(row)?;
    }
    Ok(Outcome { table, failure })
}

/// A table plus the per-point error that emptied it, if every value cell is `NA`.
struct Outcome {
    table: CurveTable,
    failure: Option<Error>,
}

fn model_warnings(m: &RiskModel, methods: &[MethodName]) -> Vec<String> {
    let pre = m.preconditions();
    let mut w = Vec::new();
    if methods.iter().any(|x| matches!(x, MethodName::Ig | MethodName::Bounds)) && !pre.inverse_gaussian() {
        w.extend(pre.warnings().into_iter().filter(|s| !s.starts_with("Lundberg")));
    }
    if methods.contains(&MethodName::Cramer) && !pre.cramer() {
        w.extend(pre.warnings());
    }
    w
}

/// `constants`: one row per configured model.
pub fn cmd_constants(cfg: &RunConfig) -> Result<CurveTable> {
    constants_outcome(cfg).map(|o| o.table)
}

fn constants_outcome(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let header = ["model", "c_star", "m", "d2", "m_v", "d2_v", "m_n", "d2_n", "ig_hypotheses", "cramer_hypotheses"];
    let mut table = new_table("constants", cfg, header.iter().map(|s| s.to_string()).collect())?;
    let models = cfg.all_models();
    for (i, m) in models.iter().enumerate() {
        table.push_meta("model", format!("{}: {m}", i + 1));
    }
    let consts: Vec<Result<crate::model::DerivedConstants>> = models.iter().map(|m| m.derived_constants()).collect();
    let key: Vec<f64> = (1..=models.len()).map(|i| i as f64).collect();
    let pick = |f: fn(&crate::model::DerivedConstants) -> f64| -> Vec<Result<f64>> {
        consts.iter().map(|k| k.as_ref().map(f).map_err(Clone::clone)).collect()
    };
    let flag = |f: fn(&crate::model::Preconditions) -> bool| -> Vec<Result<f64>> {
        models.iter().map(|m| Ok(if f(&m.preconditions()) { 1.0 } else { 0.0 })).collect()
    };
    let columns = vec![
        ("c_star".to_string(), models.iter().map(|m| m.c_star()).collect()),
        ("m".to_string(), pick(|k| k.m_big)),
        ("d2".to_string(), pick(|k| k.d2_big)),
        ("m_v".to_string(), pick(|k| k.m_v)),
        ("d2_v".to_string(), pick(|k| k.d2_v)),
        ("m_n".to_string(), pick(|k| k.m_n)),
        ("d2_n".to_string(), pick(|k| k.d2_n)),
        ("ig_hypotheses".to_string(), flag(|p| p.inverse_gaussian())),
        ("cramer_hypotheses".to_string(), flag(|p| p.cramer())),
    ];
    let warnings = models
        .iter()
        .enumerate()
        .flat_map(|(i, m)| m.preconditions().warnings().into_iter().map(move |w| format!("model {}: {w}", i + 1)))
        .collect();
    assemble(table, &key, columns, warnings)
}

/// Fixed-width rendering of a constants table with 4 decimals.
pub fn render_constants(table: &CurveTable) -> String {
    let widths: Vec<usize> = table.header.iter().map(|h| h.len().max(10) + 2).collect();
    let mut out = String::new();
    for (h, w) in table.header.iter().zip(&widths) {
        let _ = write!(out, "{h:>w$}");
    }
    out.push('\n');
    for r in &table.rows {
        for (j, (v, w)) in r.iter().zip(&widths).enumerate() {
            let cell = match v {
                Some(x) if j == 0 || table.header[j].ends_with("hypotheses") => format!("{}", *x as i64),
                Some(x) => format!("{x:.4}"),
                None => "NA".to_string(),
            };
            let _ = write!(out, "{cell:>w$}");
        }
        out.push('\n');
    }
    for m in table.meta_all("model") {
        let _ = writeln!(out, "# model {m}");
    }
    out
}

/// `capital`: capital curves for every requested backend.
pub fn cmd_capital(cfg: &RunConfig) -> Result<CurveTable> {
    capital_outcome(cfg).map(|o| o.table)
}

fn capital_outcome(cfg: &RunConfig) -> Result<Outcome> {
    let cfg = cfg.resolved();
    cfg.validate()?;
    let grid = cfg.c_grid.points()?;
    let m = cfg.model;
    let (alpha, t) = (cfg.alpha, cfg.t);
    let mut columns: Vec<Column> = Vec::new();
    let mut warnings = model_warnings(&m, &cfg.methods);
    for method in &cfg.methods {
        match method {
            MethodName::Exact => {
                let s = SolveSpec::new(Backend::ExactExp);
                columns.push(("var_exact".into(), per_point(&grid, |c| Ok(var_capital(&m, alpha, t, c, &s)?.u))));
                columns.push(("nonruin_exact".into(), per_point(&grid, |c| Ok(nonruin_capital(&m, alpha, t, c, &s)?.u))));
            }
            MethodName::Clt => {
                let s = SolveSpec::new(Backend::Clt);
                columns.push(("var_clt".into(), per_point(&grid, |c| Ok(var_capital(&m, alpha, t, c, &s)?.u))));
            }
            MethodName::Ig => {
                let s = SolveSpec::new(Backend::InverseGaussian);
                columns.push(("nonruin_ig".into(), per_point(&grid, |c| Ok(nonruin_capital(&m, alpha, t, c, &s)?.u))));
            }
            MethodName::Mc => {
                let sim = cfg.sim.expect("resolved").sim_config(t);
                let names = ["var_mc", "var_mc_stderr", "nonruin_mc", "nonruin_mc_stderr"];
                match simulate(&m, &grid, &sim) {
                    Ok(set) => {
                        let est: Vec<_> = (0..grid.len()).map(|j| set.capitals(j, alpha)).collect();
                        for e in est.iter().flatten() {
                            warnings.extend(e.warnings.iter().cloned());
                        }
                        let col = |f: fn(&crate::montecarlo::CapitalEstimates) -> f64| -> Vec<Result<f64>> {
                            est.iter().map(|e| e.as_ref().map(f).map_err(Clone::clone)).collect()
                        };
                        columns.push((names[0].into(), col(|e| e.var_cap.point)));
                        columns.push((names[1].into(), col(|e| e.var_cap.stderr)));
                        columns.push((names[2].into(), col(|e| e.nonruin_cap.point)));
                        columns.push((names[3].into(), col(|e| e.nonruin_cap.stderr)));
                    }
                    Err(e) => {
                        for n in names {
                            columns.push((n.into(), grid.iter().map(|_| Err(e.clone())).collect()));
                        }
                    }
                }
            }
            MethodName::Bounds => {
                let k = m.derived_constants();
                let band = |c: f64| capital_asymptotic_bounds_with(k.as_ref().map_err(Clone::clone)?, alpha, t, c);
                columns.push(("band_lower".into(), per_point(&grid, |c| Ok(band(c)?.lower))));
                columns.push(("band_upper".into(), per_point(&grid, |c| Ok(band(c)?.upper))));
                columns.push((
                    "bound_upper".into(),
                    per_point(&grid, |c| match m.exp_pair() {
                        Some(p) => capital_upper_bound_exp(&p, alpha, c),
                        None => {
                            let cs = m.c_star()?;
                            if c > cs {
                                capital_upper_bound_lundberg(&m, alpha, c)
                            } else {
                                Err(Error::NotApplicable(format!("bound requires c > c* = {cs}")))
                            }
                        }
                    }),
                ));
            }
            MethodName::Ultimate => {
                let s = SolveSpec::new(Backend::ExactExp);
                let pts: Vec<_> = grid.par_iter().map(|&c| ultimate_capital(&m, alpha, c, &s)).collect();
                let iv = |lower: bool| -> Vec<Result<f64>> {
                    pts.iter()
                        .map(|p| {
                            let p = p.as_ref().map_err(Clone::clone)?;
                            let (lo, hi) = p.interval.unwrap_or((p.u, p.u));
                            Ok(if lower { lo } else { hi })
                        })
                        .collect()
                };
                columns.push(("ultimate".into(), pts.iter().map(|p| p.as_ref().map(|p| p.u).map_err(Clone::clone)).collect()));
                columns.push(("ultimate_lower".into(), iv(true)));
                columns.push(("ultimate_upper".into(), iv(false)));
            }
            MethodName::Profile => {
                let s = SolveSpec::new(Backend::ExactExp);
                let prof = |c: f64| -> Result<(f64, f64)> {
                    let p = exp_only(&m, "profile")?;
                    let scale = (2.0 * p.delta).sqrt() / p.rho;
                    let x = (p.delta / p.rho - c) * t.sqrt() / scale;
                    let u = nonruin_capital(&m, alpha, t, c, &s)?.u;
                    Ok((x, (u - (p.delta / p.rho - c).max(0.0) * t) / (scale * t.sqrt())))
                };
                let pts: Vec<_> = grid.par_iter().map(|&c| prof(c)).collect();
                columns.push(("profile_x".into(), pts.iter().map(|r| r.as_ref().map(|v| v.0).map_err(Clone::clone)).collect()));
                columns.push(("profile_u".into(), pts.iter().map(|r| r.as_ref().map(|v| v.1).map_err(Clone::clone)).collect()));
            }
            MethodName::Cramer => {
                return Err(Error::Usage("method cramer is a probability approximation; use ruinprob".into()));
            }
        }
    }
    let header = std::iter::once("c".to_string()).chain(columns.iter().map(|(n, _)| n.clone())).collect();
    let table = new_table("capital", &cfg, header)?;
    assemble(table, &grid, columns, warnings)
}

/// `ruinprob`: finite-horizon ruin probability at capital `u`.
pub fn cmd_ruinprob(cfg: &RunConfig) -> Result<CurveTable> {
    ruinprob_outcome(cfg).map(|o| o.table)
}

fn ruinprob_outcome(cfg: &RunConfig) -> Result<Outcome> {
    let cfg = cfg.resolved();
    cfg.validate()?;
    let u = cfg.u.ok_or_else(|| Error::Usage("u: required for ruinprob (set u or pass --u)".into()))?;
    let grid = cfg.c_grid.points()?;
    let m = cfg.model;
    let t = cfg.t;
    let mut columns: Vec<Column> = Vec::new();
    let mut warnings = model_warnings(&m, &cfg.methods);
    for method in &cfg.methods {
        match method {
            MethodName::Exact => {
                columns.push(("exact".into(), per_point(&grid, |c| ruin_finite_exp(&exp_only(&m, "exact")?, u, c, t))));
            }
            MethodName::Ig => {
                columns.push(("ig".into(), per_point(&grid, |c| ig_ruin_probability(&m, u, c, t, IgForm::Closed))));
            }
            MethodName::Cramer => {
                columns.push(("cramer".into(), per_point(&grid, |c| cramer_ruin_exp(&exp_only(&m, "cramer")?, u, c, t))));
            }
            MethodName::Ultimate => {
                columns.push(("ultimate".into(), per_point(&grid, |c| ruin_ultimate_exp(&exp_only(&m, "ultimate")?, u, c))));
            }
            MethodName::Mc => {
                let sim = cfg.sim.expect("resolved").sim_config(t);
                match simulate(&m, &grid, &sim) {
                    Ok(set) => {
                        let est: Vec<_> = (0..grid.len()).map(|j| set.ruin_probability(j, u)).collect();
                        columns.push(("mc".into(), est.iter().map(|e| Ok(e.point)).collect()));
                        columns.push(("mc_stderr".into(), est.iter().map(|e| Ok(e.stderr)).collect()));
                    }
                    Err(e) => {
                        for n in ["mc", "mc_stderr"] {
                            columns.push((n.into(), grid.iter().map(|_| Err(e.clone())).collect()));
                        }
                    }
                }
            }
            other => {
                return Err(Error::Usage(format!("method {} is not available for ruinprob", other.as_str())));
            }
        }
    }
    if cfg.sim.is_some_and(|s| s.n_paths < 1000) {
        warnings.push("fewer than 1000 paths: Monte Carlo columns are coarse".into());
    }
    let header = std::iter::once("c".to_string()).chain(columns.iter().map(|(n, _)| n.clone())).collect();
    let table = new_table("ruinprob", &cfg, header)?;
    assemble(table, &grid, columns, warnings)
}

/// Dispatch by command name.
pub fn run_command(command: &str, cfg: &RunConfig) -> Result<CurveTable> {
    match command {
        "constants" => cmd_constants(cfg),
        "capital" => cmd_capital(cfg),
        "ruinprob" => cmd_ruinprob(cfg),
        other => Err(Error::Usage(format!("unknown command {other:?}"))),
    }
}

/// Regenerate a table from its own `command` and `config` metadata.
pub fn rerun(table: &CurveTable) -> Result<CurveTable> {
    let command = table.meta("command").ok_or_else(|| Error::Usage("table has no command metadata".into()))?;
    let cfg = RunConfig::from_json(table.meta("config").ok_or_else(|| Error::Usage("table has no config metadata".into()))?)?;
    run_command(command, &cfg)
}

fn emit(o: Outcome, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => o.table.write_path(p)?,
        None => o.table.write_to(&mut *stdout)?,
    }
    match o.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Constants(args) => {
            let o = constants_outcome(&args.to_config()?)?;
            write!(stdout, "{}", render_constants(&o.table))?;
            match &args.out {
                Some(p) => emit(o, Some(p), stdout),
                None => o.failure.map_or(Ok(()), Err),
            }
        }
        Command::Capital(args) => emit(capital_outcome(&args.to_config()?)?, args.out.as_deref(), stdout),
        Command::Ruinprob(args) => emit(ruinprob_outcome(&args.to_config()?)?, args.out.as_deref(), stdout),
        Command::Reproduce { figure, args } => {
            if args.has_model_overrides() {
                return Err(Error::Usage("reproduce accepts only --paths, --seed and --out".into()));
            }
            let mut opts = PresetOptions::default();
            if let Some(n) = args.paths {
                opts.n_paths = n;
            }
            if let Some(s) = args.seed {
                opts.seed = s;
            }
            let dir = args.out.unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            for a in reproduce(&figure, &opts)? {
                let csv = dir.join(format!("{}.csv", a.name));
                a.table.write_path(&csv)?;
                let side = dir.join(format!("{}.verify.json", a.name));
                std::fs::write(&side, a.sidecar.to_json()? + "\n")?;
                writeln!(stdout, "{}: {} rows", csv.display(), a.table.rows.len())?;
                for c in &a.sidecar.checks {
                    writeln!(stdout, "  {}", c.summary())?;
                }
                for l in &a.sidecar.limitations {
                    writeln!(stdout, "  limitation: {l}")?;
                }
            }
            Ok(())
        }
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
