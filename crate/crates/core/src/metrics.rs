//! Accuracy, empirical decay fits, `p*`, speedup, gate counts, landscapes and
//! ensemble aggregation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::ResultRow;
use crate::maxcut::CostDiagonal;
use crate::optimizer::{energy_of_point, VariationalPoint};
use crate::protocol::Mode;
use crate::schedule::FourierPoint;

/// Reference accuracy of the best known classical approximation for MaxCut.
pub const CLASSICAL_ACCURACY: f64 = 0.8785;
pub const DEFAULT_R_STAR: f64 = 0.99;

/// `r = e_opt / e_max`.
pub fn accuracy(e_opt: f64, e_max: f64) -> Result<f64> {
    if !(e_max > 0.0) {
        return Err(Error::Domain(format!("e_max must be positive, got {e_max}")));
    }
    Ok(e_opt / e_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitForm {
    /// `y = exp(-p / p0 + c)`
    ExpLinear,
    /// `y = exp(-sqrt(p / p0) + c)`
    ExpSqrt,
}

impl FitForm {
    fn abscissa(self, p: f64) -> f64 {
        match self {
            FitForm::ExpLinear => p,
            FitForm::ExpSqrt => p.sqrt(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FitForm::ExpLinear => "exp-linear",
            FitForm::ExpSqrt => "exp-sqrt",
        }
    }
}

impl std::str::FromStr for FitForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp-linear" => Ok(FitForm::ExpLinear),
            "exp-sqrt" => Ok(FitForm::ExpSqrt),
            other => Err(Error::Config(format!("unknown fit form `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub form: FitForm,
    pub p0: f64,
    pub c: f64,
    /// RMS residual of the ln-space fit.
    pub residual: f64,
}

impl FitResult {
    pub fn eval(&self, p: f64) -> f64 {
        (-self.form.abscissa(p / self.p0) + self.c).exp()
    }
}

/// Unweighted least squares of `ln y` against `p` or `sqrt(p)`.
pub fn fit_curve(points: &[(f64, f64)], form: FitForm) -> Result<FitResult> {
    fit_curve_weighted(points, form, None)
}

/// Least squares in ln space with optional per-point weights.
///
/// With `weights = Some(std)`, point `i` gets weight `(y_i / std_i)^2`, the
/// inverse variance of `ln y_i` to first order; zero std entries are dropped
/// to the smallest positive std present.
pub fn fit_curve_weighted(points: &[(f64, f64)], form: FitForm, stds: Option<&[f64]>) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 points to fit, got {}", points.len())));
    }
    if let Some(s) = stds {
        if s.len() != points.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: s.len() });
        }
    }
    if let Some(&(p, y)) = points.iter().find(|&&(p, y)| !(y > 0.0) || !y.is_finite() || !(p >= 0.0)) {
        return Err(Error::Domain(format!("cannot fit point (p={p}, y={y}) in log space")));
    }
    let weights: Vec<f64> = match stds {
        None => vec![1.0; points.len()],
        Some(s) => {
            let floor = s.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
            let floor = if floor.is_finite() { floor } else { 1.0 };
            points.iter().zip(s).map(|(&(_, y), &sd)| (y / sd.max(floor)).powi(2)).collect()
        }
    };
    let xs: Vec<f64> = points.iter().map(|&(p, _)| form.abscissa(p)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let sw: f64 = weights.iter().sum();
    let mx = xs.iter().zip(&weights).map(|(x, w)| x * w).sum::<f64>() / sw;
    let my = ys.iter().zip(&weights).map(|(y, w)| y * w).sum::<f64>() / sw;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for ((x, y), w) in xs.iter().zip(&ys).zip(&weights) {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Domain("all points share the same p".into()));
    }
    let slope = sxy / sxx;
    let c = my - slope * mx;
    if !(slope < 0.0) {
        return Err(Error::Domain(format!("curve does not decay (ln-space slope {slope})")));
    }
    let p0 = match form {
        FitForm::ExpLinear => -1.0 / slope,
        FitForm::ExpSqrt => 1.0 / (slope * slope),
    };
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - (c + slope * x)).powi(2)).sum();
    let residual = (sse / xs.len() as f64).sqrt();
    Ok(FitResult { form, p0, c, residual })
}

/// Level at which a fitted curve reaches `r_star`, rounded to the nearest integer (at least 1).
pub fn p_star_from_fit(fit: &FitResult, r_star: f64) -> Result<usize> {
    check_r_star(r_star)?;
    if !(fit.p0 > 0.0) || !fit.p0.is_finite() || !fit.c.is_finite() {
        return Err(Error::Unreachable { r_star });
    }
    let x = fit.c - (1.0 - r_star).ln();
    if x <= 0.0 {
        return Ok(1);
    }
    let p = match fit.form {
        FitForm::ExpLinear => fit.p0 * x,
        FitForm::ExpSqrt => fit.p0 * x * x,
    };
    Ok((p.round() as usize).max(1))
}

/// Smallest measured level whose ensemble mean accuracy is at least `r_star`.
pub fn p_star_from_curve(curve: &EnsembleCurve, r_star: f64) -> Result<usize> {
    check_r_star(r_star)?;
    curve
        .points
        .iter()
        .find(|pt| 1.0 - pt.mean_infidelity_r >= r_star)
        .map(|pt| pt.p)
        .ok_or(Error::Unreachable { r_star })
}

fn check_r_star(r_star: f64) -> Result<()> {
    if r_star > 0.0 && r_star < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("r_star must lie in (0, 1), got {r_star}")))
    }
}

/// `S = (p*_standard / p*_adaptive)^2`.
pub fn speedup(p_star_standard: usize, p_star_adaptive: usize) -> f64 {
    let ratio = p_star_standard as f64 / p_star_adaptive as f64;
    ratio * ratio
}

/// Gates to prepare one level-`p` state: `p (3 n R / 2 + n) + n`.
pub fn state_prep_gate_count(n: u64, regularity: u64, p: u64) -> u64 {
    p * (3 * n * regularity / 2 + n) + n
}

/// Gates for a full optimisation: `n_ite (2p + 1) m_zz (n R / 2) [p (3 n R / 2 + n) + n]`.
pub fn total_gate_count(n: u64, regularity: u64, p: u64, n_ite: u64, m_zz: u64) -> u128 {
    n_ite as u128
        * (2 * p + 1) as u128
        * m_zz as u128
        * (n * regularity / 2) as u128
        * state_prep_gate_count(n, regularity, p) as u128
}

/// Rectangular `(u_1, v_1)` grid with `resolution + 1` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeGrid {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub resolution: usize,
}

impl LandscapeGrid {
    fn axis(range: (f64, f64), resolution: usize, base: f64) -> Vec<f64> {
        if resolution == 0 {
            return vec![base];
        }
        let step = (range.1 - range.0) / resolution as f64;
        (0..=resolution).map(|i| range.0 + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `energies[i][j]` is the energy at `(u[i], v[j])`.
    pub energies: Vec<Vec<f64>>,
}

impl Landscape {
    /// `(u, v, energy)` of the lowest grid point.
    pub fn minimum(&self) -> (f64, f64, f64) {
        let mut best = (self.u[0], self.v[0], f64::INFINITY);
        for (i, row) in self.energies.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e < best.2 {
                    best = (self.u[i], self.v[j], e);
                }
            }
        }
        best
    }
}

/// Level-1 energy over a grid of `(u_1, v_1)` with the bias held at `base`'s.
///
/// A zero-resolution grid evaluates only the base point itself.
pub fn scan_landscape(d: &CostDiagonal, base: &VariationalPoint, grid: &LandscapeGrid) -> Result<Landscape> {
    if base.level() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: base.level() });
    }
    let u = LandscapeGrid::axis(grid.u_range, grid.resolution, base.fourier.u[0]);
    let v = LandscapeGrid::axis(grid.v_range, grid.resolution, base.fourier.v[0]);
    let mut energies = Vec::with_capacity(u.len());
    for &ui in &u {
        let row = v
            .iter()
            .map(|&vj| {
                let pt = VariationalPoint { fourier: FourierPoint::new(vec![ui], vec![vj])?, bias: base.bias.clone() };
                energy_of_point(&pt, d)
            })
            .collect::<Result<Vec<f64>>>()?;
        energies.push(row);
    }
    Ok(Landscape { u, v, energies })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: usize,
    /// Mean of `1 - r`.
    pub mean_infidelity_r: f64,
    pub std_infidelity_r: f64,
    /// Mean of `1 - F`.
    pub mean_infidelity_f: f64,
    pub std_infidelity_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleCurve {
    pub n: usize,
    pub mode: Mode,
    pub points: Vec<CurvePoint>,
    pub ensemble_size: usize,
}

impl EnsembleCurve {
    /// `(p, mean 1 - r)` pairs, ready for [`fit_curve`].
    pub fn accuracy_points(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|pt| (pt.p as f64, pt.mean_infidelity_r)).collect()
    }

    pub fn point(&self, p: usize) -> Option<&CurvePoint> {
        self.points.iter().find(|pt| pt.p == p)
    }
}

/// Per-level mean and population standard deviation over graphs.
///
/// Every graph must carry the same `n`, mode and set of levels.
pub fn aggregate_ensemble(rows: &[ResultRow]) -> Result<EnsembleCurve> {
    let first = rows.first().ok_or_else(|| Error::InconsistentEnsemble("no records".into()))?;
    let mut by_graph: BTreeMap<&str, BTreeMap<usize, &ResultRow>> = BTreeMap::new();
    for row in rows {
        if row.n != first.n || row.mode != first.mode {
            return Err(Error::InconsistentEnsemble(format!(
                "mixed ensembles: ({}, {}) and ({}, {})",
                first.n, first.mode, row.n, row.mode
            )));
        }
        if by_graph.entry(&row.graph_id).or_default().insert(row.level, row).is_some() {
            return Err(Error::InconsistentEnsemble(format!("duplicate level {} for {}", row.level, row.graph_id)));
        }
    }
    let grid: Vec<usize> = by_graph.values().next().expect("nonempty").keys().copied().collect();
    for (id, levels) in &by_graph {
        if !levels.keys().copied().eq(grid.iter().copied()) {
            return Err(Error::InconsistentEnsemble(format!("graph {id} has a different level grid")));
        }
    }
    let points = grid
        .iter()
        .map(|&p| {
            let ir: Vec<f64> = by_graph.values().map(|l| 1.0 - l[&p].r).collect();
            let ifd: Vec<f64> = by_graph.values().map(|l| 1.0 - l[&p].f).collect();
            let (mean_infidelity_r, std_infidelity_r) = mean_std(&ir);
            let (mean_infidelity_f, std_infidelity_f) = mean_std(&ifd);
            CurvePoint { p, mean_infidelity_r, std_infidelity_r, mean_infidelity_f, std_infidelity_f }
        })
        .collect();
    Ok(EnsembleCurve { n: first.n, mode: first.mode, points, ensemble_size: by_graph.len() })
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
