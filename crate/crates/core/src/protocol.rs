//! Outer loop: level-1 seeding, restarts, and perturbative extension of the
//! best point from level `p' - 1` to level `p'`.
//!
//! All randomness is drawn from streams keyed by
//! `(master_seed, graph_id, level, restart)`, so a sweep is a pure function of
//! its inputs regardless of how restarts are scheduled across threads.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::{build_cost_diagonal, solve_exact, CostDiagonal, ExactSolution, GraphInstance};
use crate::metrics::accuracy;
use crate::optimizer::{inner_loop, InnerLoopResult, IterationRecord, OptimizerConfig, VariationalPoint};
use crate::schedule::{to_schedule, FourierPoint};
use crate::seeding;
use crate::statevector::{evolve, BiasField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Standard,
    #[serde(alias = "adaptive")]
    AdaptiveBias,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::AdaptiveBias => "adaptive",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "qaoa" => Ok(Mode::Standard),
            "adaptive" | "adaptive-bias" | "ab" | "ab-qaoa" => Ok(Mode::AdaptiveBias),
            other => Err(Error::Config(format!("unknown mode `{other}` (expected standard or adaptive)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub restarts: usize,
    pub alpha: f64,
    pub target_p: usize,
    pub mode: Mode,
    pub master_seed: u64,
    pub optimizer: OptimizerConfig,
    /// Level-1 `u_1` is drawn from `[-init_u_range, init_u_range]`.
    pub init_u_range: f64,
    pub init_v_range: f64,
    /// Level-1 bias value in adaptive mode.
    pub initial_bias: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        let sqrt2 = std::f64::consts::SQRT_2;
        ProtocolConfig {
            restarts: 10,
            alpha: 0.6,
            target_p: 1,
            mode: Mode::AdaptiveBias,
            master_seed: 0,
            optimizer: OptimizerConfig::default(),
            // gamma_1 in [-pi/2, pi/2], beta_1 in [-pi/4, pi/4]
            init_u_range: sqrt2 * std::f64::consts::FRAC_PI_2,
            init_v_range: sqrt2 * std::f64::consts::FRAC_PI_4,
            initial_bias: 1.0,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::Config("alpha must be non-negative".into()));
        }
        if self.target_p == 0 {
            return Err(Error::Config("target_p must be at least 1".into()));
        }
        if !(self.init_u_range >= 0.0 && self.init_v_range >= 0.0) {
            return Err(Error::Config("initial sampling ranges must be non-negative".into()));
        }
        if !self.initial_bias.is_finite() || self.initial_bias.abs() > self.optimizer.h_max {
            return Err(Error::Config("initial_bias must lie within [-h_max, h_max]".into()));
        }
        self.optimizer.validate()
    }

    /// Optimizer settings actually used: standard mode never moves the bias.
    pub fn effective_optimizer(&self) -> OptimizerConfig {
        match self.mode {
            Mode::Standard => OptimizerConfig { ell: 0.0, ..self.optimizer.clone() },
            Mode::AdaptiveBias => self.optimizer.clone(),
        }
    }
}

const SEED_STREAM: u64 = 0;
const EXTEND_STREAM: u64 = 1;
const SHOT_STREAM: u64 = 2;

/// `R` random level-1 points; `h = initial_bias` in adaptive mode, zero otherwise.
pub fn seed_level1(cfg: &ProtocolConfig, graph_id: &str, n: usize) -> Vec<VariationalPoint> {
    (0..cfg.restarts)
        .map(|s| {
            let mut rng = seeding::stream_rng(cfg.master_seed, graph_id, &[1, s as u64, SEED_STREAM]);
            let u = symmetric_uniform(&mut rng, cfg.init_u_range);
            let v = symmetric_uniform(&mut rng, cfg.init_v_range);
            let bias = match cfg.mode {
                Mode::Standard => BiasField::zeros(n),
                Mode::AdaptiveBias => BiasField::uniform(n, cfg.initial_bias),
            };
            VariationalPoint { fourier: FourierPoint { u: vec![u], v: vec![v] }, bias }
        })
        .collect()
}

fn symmetric_uniform<R: Rng>(rng: &mut R, half_width: f64) -> f64 {
    if half_width == 0.0 {
        0.0
    } else {
        rng.random_range(-half_width..=half_width)
    }
}

/// `R` starting points at `level` built from the best point one level down.
///
/// Restart 0 is the plain extension (zero appended to `u` and `v`, bias
/// unchanged). The others replace every element `a` of `u`, `v` and `h` by
/// `a + alpha * N(0, a^2)` with independent draws, then append the zeros.
pub fn extend_points(best: &VariationalPoint, cfg: &ProtocolConfig, graph_id: &str, level: usize) -> Vec<VariationalPoint> {
    debug_assert_eq!(best.level() + 1, level);
    let h_max = cfg.optimizer.h_max;
    (0..cfg.restarts)
        .map(|s| {
            if s == 0 {
                return VariationalPoint { fourier: best.fourier.extended(), bias: best.bias.clone() };
            }
            let mut rng = seeding::stream_rng(cfg.master_seed, graph_id, &[level as u64, s as u64, EXTEND_STREAM]);
            let mut perturb = |a: f64| {
                // N(0, a^2) == |a| * N(0, 1); a == 0 stays 0
                let z: f64 = Normal::new(0.0, 1.0).expect("unit normal").sample(&mut rng);
                a + cfg.alpha * a.abs() * z
            };
            let u: Vec<f64> = best.fourier.u.iter().map(|&a| perturb(a)).collect();
            let v: Vec<f64> = best.fourier.v.iter().map(|&a| perturb(a)).collect();
            let h: Vec<f64> = best.bias.values().iter().map(|&a| perturb(a).clamp(-h_max, h_max)).collect();
            let fourier = FourierPoint { u, v }.extended();
            VariationalPoint { fourier, bias: BiasField::with_bound(h, h_max).expect("clamped bias") }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartSummary {
    pub index: usize,
    pub e_f: Option<f64>,
    pub n_ite: usize,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub best_index: usize,
    pub best_point: VariationalPoint,
    /// Best final `<H_C>` over restarts.
    pub e_best: f64,
    /// `E0 - e_best`, the achieved expected cut.
    pub e_opt: f64,
    pub e_max: f64,
    pub r: f64,
    pub f: f64,
    pub n_ite_mean: f64,
    pub per_restart: Vec<RestartSummary>,
    /// Trace of the best restart when `optimizer.record_trace` is set.
    pub trace: Option<Vec<IterationRecord>>,
}

/// Optimises every point and keeps the best final energy (ties: lowest index).
pub fn run_level(
    points: &[VariationalPoint],
    d: &CostDiagonal,
    sol: &ExactSolution,
    cfg: &ProtocolConfig,
    graph_id: &str,
    level: usize,
) -> Result<LevelRecord> {
    if points.is_empty() {
        return Err(Error::Config("no starting points".into()));
    }
    if let Some(bad) = points.iter().find(|p| p.level() != level) {
        return Err(Error::DimensionMismatch { expected: level, found: bad.level() });
    }
    let opt = cfg.effective_optimizer();
    let results: Vec<Result<InnerLoopResult>> = points
        .par_iter()
        .enumerate()
        .map(|(s, pt)| {
            let seed = seeding::stream_seed(cfg.master_seed, graph_id, &[level as u64, s as u64, SHOT_STREAM]);
            inner_loop(pt, d, Some(sol), &opt, seed)
        })
        .collect();
    select_best(results, d, sol, level)
}

/// Reduces restart outcomes to a [`LevelRecord`]; only fails if every restart failed.
pub fn select_best(
    results: Vec<Result<InnerLoopResult>>,
    d: &CostDiagonal,
    sol: &ExactSolution,
    level: usize,
) -> Result<LevelRecord> {
    let restarts = results.len();
    let mut per_restart = Vec::with_capacity(restarts);
    let mut best: Option<(usize, InnerLoopResult)> = None;
    let mut last_error = String::new();
    for (index, res) in results.into_iter().enumerate() {
        match res {
            Ok(r) => {
                per_restart.push(RestartSummary {
                    index,
                    e_f: Some(r.e_f),
                    n_ite: r.n_ite,
                    converged: r.converged,
                    error: None,
                });
                if best.as_ref().is_none_or(|(_, b)| r.e_f < b.e_f) {
                    best = Some((index, r));
                }
            }
            Err(e) => {
                last_error = e.to_string();
                per_restart.push(RestartSummary { index, e_f: None, n_ite: 0, converged: false, error: Some(last_error.clone()) });
            }
        }
    }
    let (best_index, best) = best.ok_or(Error::LevelFailed { level, restarts, last: last_error })?;
    let ok: Vec<_> = per_restart.iter().filter(|s| s.error.is_none()).collect();
    let n_ite_mean = ok.iter().map(|s| s.n_ite as f64).sum::<f64>() / ok.len() as f64;
    let e_opt = d.e0() - best.e_f;
    let f = match best.fidelity {
        Some(f) => f,
        None => evolve(d, &to_schedule(&best.point.fourier)?, &best.point.bias)?.fidelity_to_manifold(sol),
    };
    Ok(LevelRecord {
        level,
        best_index,
        e_best: best.e_f,
        e_opt,
        e_max: sol.e_max,
        r: accuracy(e_opt, sol.e_max)?.min(1.0),
        f: f.clamp(0.0, 1.0),
        n_ite_mean,
        per_restart,
        trace: best.trace,
        best_point: best.point,
    })
}

/// Full sweep over levels `1..=target_p` for one graph.
pub fn run_sweep(g: &GraphInstance, cfg: &ProtocolConfig) -> Result<Vec<LevelRecord>> {
    let d = build_cost_diagonal(g)?;
    let sol = solve_exact(&d);
    run_sweep_with(g.id(), &d, &sol, cfg)
}

pub fn run_sweep_with(graph_id: &str, d: &CostDiagonal, sol: &ExactSolution, cfg: &ProtocolConfig) -> Result<Vec<LevelRecord>> {
    cfg.validate()?;
    let mut records: Vec<LevelRecord> = Vec::with_capacity(cfg.target_p);
    for level in 1..=cfg.target_p {
        let points = match records.last() {
            None => seed_level1(cfg, graph_id, d.n()),
            Some(prev) => extend_points(&prev.best_point, cfg, graph_id, level),
        };
        records.push(run_level(&points, d, sol, cfg, graph_id, level)?);
    }
    Ok(records)
}
