//! Simulation of the compound renewal surplus.
//!
//! Each path records its supremum deficit `max_s (V_s - c s)` and terminal
//! deficit `V_t - c t`. Ruin before `t` with capital `u` is `sup > u` and a
//! year-end shortfall is `terminal > u`, so both capitals are upper order
//! statistics of one path sweep. Claim epochs do not depend on `c`, so a
//! whole premium grid is evaluated on the same paths.
//!
//! Path `i` draws from ChaCha8 keyed by the seed, on stream
//! `i % stream_count`, starting at word `(i / stream_count) << 48`. Results
//! depend only on `(seed, stream_count, n_paths)`, never on thread scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::Sampler;
use crate::error::{Error, Result};
use crate::model::RiskModel;
use crate::special::Probability;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_paths: usize,
    pub seed: u64,
    pub t: f64,
    #[serde(default = "default_streams")]
    pub stream_count: u64,
}

fn default_streams() -> u64 {
    64
}

impl SimConfig {
    pub fn new(n_paths: usize, seed: u64, t: f64) -> Self {
        SimConfig { n_paths, seed, t, stream_count: default_streams() }
    }

    fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::domain("n_paths must be positive"));
        }
        if self.stream_count == 0 {
            return Err(Error::domain("stream_count must be positive"));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(Error::domain(format!("t must be positive, got {}", self.t)));
        }
        Ok(())
    }

    /// The random stream of path `index`.
    pub fn path_rng(&self, index: usize) -> ChaCha8Rng {
        let i = index as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i % self.stream_count);
        rng.set_word_pos(((i / self.stream_count) as u128) << 48);
        rng
    }
}

/// Per-path sufficient statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub sup_deficit: f64,
    pub terminal_deficit: f64,
}

/// A point estimate with standard error and 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub point: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
}

/// One path for a single premium rate.
pub fn simulate_path<R: Rng + ?Sized>(t_law: &Sampler, y_law: &Sampler, c: f64, t: f64, rng: &mut R) -> PathStats {
    let mut out = [PathStats { sup_deficit: 0.0, terminal_deficit: 0.0 }];
    simulate_path_multi(t_law, y_law, &[c], t, rng, &mut out);
    out[0]
}

/// One path evaluated for every premium rate in `cs`.
pub fn simulate_path_multi<R: Rng + ?Sized>(
    t_law: &Sampler,
    y_law: &Sampler,
    cs: &[f64],
    t: f64,
    rng: &mut R,
    out: &mut [PathStats],
) {
    for o in out.iter_mut() {
        o.sup_deficit = 0.0;
    }
    let mut s = 0.0;
    let mut v = 0.0;
    loop {
        s += t_law.sample(rng);
        if s > t {
            break;
        }
        v += y_law.sample(rng);
        for (o, &c) in out.iter_mut().zip(cs) {
            let d = v - c * s;
            if d > o.sup_deficit {
                o.sup_deficit = d;
            }
        }
    }
    for (o, &c) in out.iter_mut().zip(cs) {
        o.terminal_deficit = v - c * t;
    }
}

/// Path statistics for a premium grid, sorted per premium rate.
#[derive(Debug, Clone)]
pub struct PathSet {
    pub cs: Vec<f64>,
    /// `sup[j]` holds the sorted supremum deficits for `cs[j]`.
    pub sup: Vec<Vec<f64>>,
    /// `terminal[j]` holds the sorted terminal deficits for `cs[j]`.
    pub terminal: Vec<Vec<f64>>,
}

/// Simulate `cfg.n_paths` paths with common random numbers across `cs`.
pub fn simulate(m: &RiskModel, cs: &[f64], cfg: &SimConfig) -> Result<PathSet> {
    cfg.validate()?;
    if cs.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
        return Err(Error::domain("premium rates must be finite and nonnegative"));
    }
    let ts = m.t_law.sampler()?;
    let ys = m.y_law.sampler()?;
    let k = cs.len();
    let per_path: Vec<Vec<PathStats>> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.path_rng(i);
            let mut out = vec![PathStats { sup_deficit: 0.0, terminal_deficit: 0.0 }; k];
            simulate_path_multi(&ts, &ys, cs, cfg.t, &mut rng, &mut out);
            debug_assert!(out.iter().all(|p| p.terminal_deficit <= p.sup_deficit));
            out
        })
        .collect();
    let mut sup = vec![Vec::with_capacity(cfg.n_paths); k];
    let mut terminal = vec![Vec::with_capacity(cfg.n_paths); k];
    for path in &per_path {
        for (j, p) in path.iter().enumerate() {
            sup[j].push(p.sup_deficit);
            terminal[j].push(p.terminal_deficit);
        }
    }
    for v in sup.iter_mut().chain(terminal.iter_mut()) {
        v.sort_by(f64::total_cmp);
    }
    Ok(PathSet { cs: cs.to_vec(), sup, terminal })
}

fn proportion(count: usize, n: usize) -> Estimate {
    let p = count as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    Estimate { point: p, stderr: se, ci95: ((p - Z95 * se).max(0.0), (p + Z95 * se).min(1.0)) }
}

fn upper_quantile(sorted: &[f64], alpha: f64) -> Estimate {
    let n = sorted.len();
    let nf = n as f64;
    let k = ((1.0 - alpha) * nf).ceil().clamp(1.0, nf) as usize;
    let half = Z95 * (nf * alpha * (1.0 - alpha)).sqrt();
    let lo_k = ((k as f64 - half).floor() as isize).clamp(1, n as isize) as usize;
    let hi_k = ((k as f64 + half).ceil() as isize).clamp(1, n as isize) as usize;
    let point = sorted[k - 1].max(0.0);
    let lo = sorted[lo_k - 1].max(0.0);
    let hi = sorted[hi_k - 1].max(0.0);
    Estimate { point, stderr: (hi - lo) / (2.0 * Z95), ci95: (lo, hi) }
}

/// Both capitals read from the same paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapitalEstimates {
    pub c: f64,
    pub var_cap: Estimate,
    pub nonruin_cap: Estimate,
    pub warnings: Vec<String>,
}

impl PathSet {
    pub fn n_paths(&self) -> usize {
        self.sup.first().map_or(0, Vec::len)
    }

    fn index_of(&self, c: f64) -> Result<usize> {
        self.cs
            .iter()
            .position(|&x| x == c)
            .ok_or_else(|| Error::domain(format!("premium rate {c} was not simulated")))
    }

    /// `P{sup_deficit > u}` for the `j`-th premium rate.
    pub fn ruin_probability(&self, j: usize, u: f64) -> Estimate {
        let v = &self.sup[j];
        let below = v.partition_point(|&x| x <= u);
        proportion(v.len() - below, v.len())
    }

    /// `P{terminal_deficit > u}` for the `j`-th premium rate.
    pub fn shortfall_probability(&self, j: usize, u: f64) -> Estimate {
        let v = &self.terminal[j];
        let below = v.partition_point(|&x| x <= u);
        proportion(v.len() - below, v.len())
    }

    pub fn capitals(&self, j: usize, alpha: Probability) -> Result<CapitalEstimates> {
        let a = alpha.value();
        if !(a > 0.0 && a < 0.5) {
            return Err(Error::domain(format!("alpha must lie in (0, 1/2), got {a}")));
        }
        let n = self.n_paths();
        let mut warnings = Vec::new();
        if (n as f64) < 50.0 / a {
            warnings.push(format!("insufficient paths: {n} < 50 / alpha = {}", (50.0 / a).ceil()));
        }
        Ok(CapitalEstimates {
            c: self.cs[j],
            var_cap: upper_quantile(&self.terminal[j], a),
            nonruin_cap: upper_quantile(&self.sup[j], a),
            warnings,
        })
    }

    pub fn capitals_at(&self, c: f64, alpha: Probability) -> Result<CapitalEstimates> {
        self.capitals(self.index_of(c)?, alpha)
    }
}

/// Monte Carlo estimate of `P{tau(u, c) <= t}`.
pub fn estimate_ruin_prob(m: &RiskModel, u: f64, c: f64, cfg: &SimConfig) -> Result<Estimate> {
    if !(u >= 0.0) {
        return Err(Error::domain(format!("u must be nonnegative, got {u}")));
    }
    Ok(simulate(m, &[c], cfg)?.ruin_probability(0, u))
}

/// Monte Carlo Value-at-Risk and non-ruin capital at one premium rate.
pub fn estimate_capitals(m: &RiskModel, alpha: Probability, c: f64, cfg: &SimConfig) -> Result<CapitalEstimates> {
    simulate(m, &[c], cfg)?.capitals(0, alpha)
}

/// Capitals along a premium grid with common random numbers.
pub fn simulate_curve(m: &RiskModel, alpha: Probability, c_grid: &[f64], cfg: &SimConfig) -> Result<Vec<CapitalEstimates>> {
    let set = simulate(m, c_grid, cfg)?;
    (0..c_grid.len()).map(|j| set.capitals(j, alpha)).collect()
}

/// Ruin probabilities at capital `u` along a premium grid.
pub fn simulate_ruin_curve(m: &RiskModel, u: f64, c_grid: &[f64], cfg: &SimConfig) -> Result<Vec<Estimate>> {
    let set = simulate(m, c_grid, cfg)?;
    Ok((0..c_grid.len()).map(|j| set.ruin_probability(j, u)).collect())
}
