//! Inner loop at a fixed level: forward-difference gradients in Fourier
//! space, Adam on `(u, v)`, and measurement feedback on the bias fields.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxcut::{CostDiagonal, ExactSolution};
use crate::schedule::{to_schedule, FourierPoint};
use crate::seeding;
use crate::statevector::{evolve, initial_state, BiasField, StateVector, DEFAULT_H_MAX};

/// One candidate of the classical optimiser: Fourier amplitudes plus bias fields.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalPoint {
    pub fourier: FourierPoint,
    pub bias: BiasField,
}

impl VariationalPoint {
    pub fn level(&self) -> usize {
        self.fourier.level()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientRule {
    /// `(E(x + eps) - E(x)) / eps`, `2p + 1` energies per gradient.
    Forward,
    /// `(E(x + eps) - E(x - eps)) / 2 eps`; validation only.
    Central,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub eps_g: f64,
    pub adam_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    /// Bias learning rate.
    pub ell: f64,
    /// Stop when consecutive energies differ by less than this.
    pub tol: f64,
    pub max_iter: usize,
    pub h_max: f64,
    pub gradient: GradientRule,
    /// Estimate `<Z_j>` for the bias update from this many shots instead of exactly.
    pub z_shots: Option<usize>,
    pub record_trace: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            eps_g: 1e-4,
            adam_rate: 0.01,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            ell: 1.1,
            tol: 1e-6,
            max_iter: 1000,
            h_max: DEFAULT_H_MAX,
            gradient: GradientRule::Forward,
            z_shots: None,
            record_trace: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.eps_g > 0.0) {
            return bad("eps_g must be positive");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        if !(self.ell >= 0.0) {
            return bad("ell must be non-negative");
        }
        if !(self.adam_rate > 0.0) || !(self.adam_eps > 0.0) {
            return bad("adam_rate and adam_eps must be positive");
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return bad("adam betas must lie in [0, 1)");
        }
        if !(self.h_max > 0.0) {
            return bad("h_max must be positive");
        }
        if self.z_shots == Some(0) {
            return bad("z_shots must be at least 1");
        }
        Ok(())
    }
}

/// Adam moments over the flattened parameter vector `[u.., v..]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new(dim: usize) -> Self {
        AdamState { step: 0, m: vec![0.0; dim], v: vec![0.0; dim] }
    }

    pub fn step(&self) -> u64 {
        self.step
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(state: &mut AdamState, params: &mut [f64], grad: &[f64], cfg: &OptimizerConfig) -> Result<()> {
    if params.len() != state.m.len() || grad.len() != state.m.len() {
        return Err(Error::DimensionMismatch { expected: state.m.len(), found: grad.len() });
    }
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - cfg.adam_beta1.powi(t);
    let c2 = 1.0 - cfg.adam_beta2.powi(t);
    for i in 0..params.len() {
        state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * grad[i];
        state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= cfg.adam_rate * m_hat / (v_hat.sqrt() + cfg.adam_eps);
    }
    Ok(())
}

/// `h_j <- h_j - ell (h_j - z_j)`, clipped to `[-h_max, h_max]`.
pub fn update_bias(h: &BiasField, z_expect: &[f64], ell: f64, h_max: f64) -> Result<BiasField> {
    if h.len() != z_expect.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), found: z_expect.len() });
    }
    let next = h
        .values()
        .iter()
        .zip(z_expect)
        .enumerate()
        .map(|(j, (&hj, &zj))| {
            let x = hj - ell * (hj - zj);
            if x.abs() > h_max {
                warn!("bias field h[{j}] = {x} clipped to +/-{h_max}");
                x.clamp(-h_max, h_max)
            } else {
                x
            }
        })
        .collect();
    BiasField::with_bound(next, h_max)
}

fn final_state(pt: &VariationalPoint, d: &CostDiagonal) -> Result<StateVector> {
    evolve(d, &to_schedule(&pt.fourier)?, &pt.bias)
}

fn checked_energy(state: &StateVector, d: &CostDiagonal, fourier: &FourierPoint, bias: &BiasField) -> Result<f64> {
    let e = state.expect_cost(d)?;
    if !e.is_finite() {
        return Err(Error::Numerical(format!(
            "energy {e} at u={:?} v={:?} h={:?}",
            fourier.u,
            fourier.v,
            bias.values()
        )));
    }
    Ok(e)
}

/// `<H_C>` in the final state prepared from `pt`.
pub fn energy_of_point(pt: &VariationalPoint, d: &CostDiagonal) -> Result<f64> {
    let state = final_state(pt, d)?;
    checked_energy(&state, d, &pt.fourier, &pt.bias)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub du: Vec<f64>,
    pub dv: Vec<f64>,
}

impl Gradient {
    fn flattened(&self) -> Vec<f64> {
        self.du.iter().chain(&self.dv).copied().collect()
    }
}

/// Forward differences around a point whose energy `base` is already known;
/// calls `eval` exactly `2p` times.
pub fn forward_difference_from<F>(fp: &FourierPoint, base: f64, eps: f64, mut eval: F) -> Result<Gradient>
where
    F: FnMut(&FourierPoint) -> Result<f64>,
{
    let p = fp.level();
    let mut probe = fp.clone();
    let mut du = Vec::with_capacity(p);
    for l in 0..p {
        probe.u[l] = fp.u[l] + eps;
        du.push((eval(&probe)? - base) / eps);
        probe.u[l] = fp.u[l];
    }
    let mut dv = Vec::with_capacity(p);
    for l in 0..p {
        probe.v[l] = fp.v[l] + eps;
        dv.push((eval(&probe)? - base) / eps);
        probe.v[l] = fp.v[l];
    }
    Ok(Gradient { du, dv })
}

/// Forward-difference gradient with an injected evaluator: `2p + 1` calls.
pub fn forward_difference<F>(fp: &FourierPoint, eps: f64, mut eval: F) -> Result<(Gradient, f64)>
where
    F: FnMut(&FourierPoint) -> Result<f64>,
{
    let base = eval(fp)?;
    Ok((forward_difference_from(fp, base, eps, &mut eval)?, base))
}

/// Central-difference gradient, `4p` calls.
pub fn central_difference<F>(fp: &FourierPoint, eps: f64, mut eval: F) -> Result<Gradient>
where
    F: FnMut(&FourierPoint) -> Result<f64>,
{
    let p = fp.level();
    let mut probe = fp.clone();
    let mut shift = |probe: &mut FourierPoint, is_u: bool, l: usize| -> Result<f64> {
        let set = |probe: &mut FourierPoint, x: f64| {
            if is_u {
                probe.u[l] = x
            } else {
                probe.v[l] = x
            }
        };
        let orig = if is_u { fp.u[l] } else { fp.v[l] };
        set(probe, orig + eps);
        let plus = eval(probe)?;
        set(probe, orig - eps);
        let minus = eval(probe)?;
        set(probe, orig);
        Ok((plus - minus) / (2.0 * eps))
    };
    let du = (0..p).map(|l| shift(&mut probe, true, l)).collect::<Result<Vec<_>>>()?;
    let dv = (0..p).map(|l| shift(&mut probe, false, l)).collect::<Result<Vec<_>>>()?;
    Ok(Gradient { du, dv })
}

/// Gradient of `<H_C>` with respect to `(u, v)` at fixed bias: `2p + 1` energies.
pub fn gradient_uv(pt: &VariationalPoint, d: &CostDiagonal, eps_g: f64) -> Result<Gradient> {
    if !(eps_g > 0.0) {
        return Err(Error::Config("eps_g must be positive".into()));
    }
    let bias = &pt.bias;
    let (grad, _) = forward_difference(&pt.fourier, eps_g, |fp| {
        energy_of_point(&VariationalPoint { fourier: fp.clone(), bias: bias.clone() }, d)
    })?;
    Ok(grad)
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    /// Ground-manifold overlap of the final state, when the exact solution is known.
    pub fidelity: Option<f64>,
    /// Ground-manifold overlap of the prepared starting state.
    pub fidelity_start: Option<f64>,
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerLoopResult {
    pub point: VariationalPoint,
    pub e_f: f64,
    pub n_ite: usize,
    pub converged: bool,
    /// Fidelity of the final state, when the exact solution was supplied.
    pub fidelity: Option<f64>,
    /// Total energy evaluations, `1 + n_ite (2p + 1)` with forward differences.
    pub evaluations: usize,
    /// Row 0 is the starting point; row `t` is the state after iteration `t`.
    pub trace: Option<Vec<IterationRecord>>,
}

struct Probe {
    energy: f64,
    state: StateVector,
}

/// Runs the inner loop from `init` until `|E_t - E_{t-1}| < tol` or `max_iter`.
///
/// Each iteration: forward-difference gradient around the current point
/// (whose energy is already known), Adam step on `(u, v)`, bias update from
/// `<Z_j>` of the current final state, then one evaluation at the new point.
/// That evaluation is both the recorded energy of the iteration and the base
/// of the next gradient, so an iteration costs exactly `2p + 1` energies.
///
/// `seed` is only consumed when `cfg.z_shots` is set.
pub fn inner_loop(
    init: &VariationalPoint,
    d: &CostDiagonal,
    sol: Option<&ExactSolution>,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<InnerLoopResult> {
    cfg.validate()?;
    if init.bias.len() != d.n() {
        return Err(Error::DimensionMismatch { expected: d.n(), found: init.bias.len() });
    }
    if init.level() == 0 {
        return Err(Error::EmptyPoint);
    }
    let p = init.level();
    let mut evaluations = 0usize;
    let mut evaluate = |fourier: &FourierPoint, bias: &BiasField| -> Result<Probe> {
        evaluations += 1;
        let state = evolve(d, &to_schedule(fourier)?, bias)?;
        let energy = checked_energy(&state, d, fourier, bias)?;
        Ok(Probe { energy, state })
    };

    let mut point = init.clone();
    let mut adam = AdamState::new(2 * p);
    let mut current = evaluate(&point.fourier, &point.bias)?;
    let mut trace = cfg.record_trace.then(Vec::new);
    let record = |trace: &mut Option<Vec<IterationRecord>>, t: usize, probe: &Probe, bias: &BiasField| {
        if let Some(rows) = trace.as_mut() {
            rows.push(IterationRecord {
                iteration: t,
                energy: probe.energy,
                fidelity: sol.map(|s| probe.state.fidelity_to_manifold(s)),
                fidelity_start: sol.map(|s| initial_state(bias).fidelity_to_manifold(s)),
                h: bias.values().to_vec(),
            });
        }
    };
    record(&mut trace, 0, &current, &point.bias);

    let mut n_ite = 0;
    let mut converged = false;
    while n_ite < cfg.max_iter {
        n_ite += 1;
        let bias = point.bias.clone();
        let mut energy_at = |fp: &FourierPoint| evaluate(fp, &bias).map(|probe| probe.energy);
        let grad = match cfg.gradient {
            GradientRule::Forward => forward_difference_from(&point.fourier, current.energy, cfg.eps_g, &mut energy_at)?,
            GradientRule::Central => central_difference(&point.fourier, cfg.eps_g, &mut energy_at)?,
        };

        let mut params: Vec<f64> = point.fourier.u.iter().chain(&point.fourier.v).copied().collect();
        adam_step(&mut adam, &mut params, &grad.flattened(), cfg)?;
        let fourier = FourierPoint::new(params[..p].to_vec(), params[p..].to_vec())?;

        let bias = if cfg.ell == 0.0 {
            point.bias.clone()
        } else {
            let z = match cfg.z_shots {
                None => current.state.expect_z_all(),
                Some(shots) => {
                    let s = seeding::stream_seed(seed, "bias-shots", &[n_ite as u64]);
                    shot_z(&current.state.sample_bitstrings(shots, s)?, d.n())
                }
            };
            update_bias(&point.bias, &z, cfg.ell, cfg.h_max)?
        };

        point = VariationalPoint { fourier, bias };
        let previous = current.energy;
        current = evaluate(&point.fourier, &point.bias)?;
        record(&mut trace, n_ite, &current, &point.bias);
        if (current.energy - previous).abs() < cfg.tol {
            converged = true;
            break;
        }
    }

    Ok(InnerLoopResult {
        fidelity: sol.map(|s| current.state.fidelity_to_manifold(s)),
        e_f: current.energy,
        point,
        n_ite,
        converged,
        evaluations,
        trace,
    })
}

fn shot_z(samples: &[u64], n: usize) -> Vec<f64> {
    let m = samples.len() as f64;
    (0..n)
        .map(|j| samples.iter().map(|&z| if (z >> j) & 1 == 0 { 1.0 } else { -1.0 }).sum::<f64>() / m)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxcut::{build_cost_diagonal, generate_regular_graph, solve_exact, Edge, GraphInstance};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::cell::Cell;

    fn single_edge() -> CostDiagonal {
        build_cost_diagonal(&GraphInstance::new("edge", 2, 1, vec![Edge { a: 0, b: 1, weight: 1.0 }]).unwrap())
            .unwrap()
    }

    fn point(u: Vec<f64>, v: Vec<f64>, h: Vec<f64>) -> VariationalPoint {
        VariationalPoint { fourier: FourierPoint::new(u, v).unwrap(), bias: BiasField::new(h).unwrap() }
    }

    #[test]
    fn zero_schedule_energies() {
        let g = generate_regular_graph(8, 3, true, 3).unwrap();
        let d = build_cost_diagonal(&g).unwrap();
        let sol = solve_exact(&d);
        assert_abs_diff_eq!(energy_of_point(&point(vec![0.0; 2], vec![0.0; 2], vec![0.0; 8]), &d).unwrap(), 0.0, epsilon = 1e-14);
        // strong bias along a ground state pattern prepares (nearly) that basis state
        let z = sol.ground_states[0];
        let h = (0..8).map(|j| if (z >> j) & 1 == 0 { 10.0 } else { -10.0 }).collect();
        let e = energy_of_point(&point(vec![0.0], vec![0.0], h), &d).unwrap();
        assert!((e - d.min()).abs() < 0.1 * (d.max() - d.min()), "{e} vs {}", d.min());
    }

    #[test]
    fn single_edge_optimum_at_level_one() {
        let d = single_edge();
        // gamma = pi/2, beta = pi/8 (grid-search optimum) in Fourier coordinates
        let s2 = 2f64.sqrt();
        let pt = point(vec![std::f64::consts::FRAC_PI_2 * s2], vec![std::f64::consts::PI / 8.0 * s2], vec![0.0, 0.0]);
        let e = energy_of_point(&pt, &d).unwrap();
        assert_abs_diff_eq!(e, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn forward_difference_on_a_quadratic() {
        let calls = Cell::new(0);
        let fp = FourierPoint::new(vec![0.5, -1.0, 2.0], vec![0.0, 0.25, 1.0]).unwrap();
        let eps = 1e-3;
        let (g, base) = forward_difference(&fp, eps, |x| {
            calls.set(calls.get() + 1);
            Ok(x.u.iter().map(|u| u * u).sum::<f64>())
        })
        .unwrap();
        assert_eq!(calls.get(), 2 * 3 + 1);
        assert_abs_diff_eq!(base, 5.25, epsilon = 1e-15);
        for (du, u) in g.du.iter().zip(&fp.u) {
            assert_abs_diff_eq!(*du, 2.0 * u + eps, epsilon = 1e-9);
        }
        assert!(g.dv.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gradient_call_count_matches_level() {
        let g = generate_regular_graph(6, 3, true, 8).unwrap();
        let d = build_cost_diagonal(&g).unwrap();
        for p in 1..=5 {
            let calls = Cell::new(0);
            let fp = FourierPoint::new(vec![0.3; p], vec![0.2; p]).unwrap();
            let bias = BiasField::uniform(6, 0.5);
            forward_difference(&fp, 1e-4, |x| {
                calls.set(calls.get() + 1);
                energy_of_point(&VariationalPoint { fourier: x.clone(), bias: bias.clone() }, &d)
            })
            .unwrap();
            assert_eq!(calls.get(), 2 * p + 1);
        }
    }

    #[test]
    fn stationary_direction_has_small_forward_gradient() {
        // single edge from |-->: E(u, v) is odd in gamma, so du is stationary
        // wherever the gamma-derivative vanishes; check against a central oracle
        let d = single_edge();
        let pt = point(vec![std::f64::consts::FRAC_PI_2 * 2f64.sqrt()], vec![0.4], vec![0.0, 0.0]);
        let eps = 1e-4;
        let fwd = gradient_uv(&pt, &d, eps).unwrap();
        let central = central_difference(&pt.fourier, 1e-6, |fp| {
            energy_of_point(&VariationalPoint { fourier: fp.clone(), bias: pt.bias.clone() }, &d)
        })
        .unwrap();
        assert!(central.du[0].abs() < 1e-8);
        assert!(fwd.du[0].abs() < 10.0 * eps);
        assert_abs_diff_eq!(fwd.dv[0], central.dv[0], epsilon = 10.0 * eps);
    }

    #[test]
    fn adam_examples() {
        let cfg = OptimizerConfig::default();
        let mut state = AdamState::new(2);
        let mut x = vec![1.0, -2.0];
        adam_step(&mut state, &mut x, &[0.0, 0.0], &cfg).unwrap();
        assert_eq!(x, vec![1.0, -2.0]);

        // step 1: m_hat = g, v_hat = g^2, update = rate * g / (|g| + eps)
        let mut state = AdamState::new(2);
        let mut x = vec![0.0, 0.0];
        adam_step(&mut state, &mut x, &[3.0, -0.5], &cfg).unwrap();
        assert_abs_diff_eq!(x[0], -0.01 * 3.0 / (3.0 + 1e-8), epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 0.01 * 0.5 / (0.5 + 1e-8), epsilon = 1e-15);

        // zero gradients after a kick: steps shrink geometrically
        let mut prev = x.clone();
        let mut deltas = vec![];
        for _ in 0..40 {
            adam_step(&mut state, &mut x, &[0.0, 0.0], &cfg).unwrap();
            deltas.push((x[0] - prev[0]).abs());
            prev = x.clone();
        }
        assert!(deltas.windows(2).all(|w| w[1] < w[0]));
        assert!(deltas[39] < 0.1 * deltas[0]);
        assert!(adam_step(&mut state, &mut x, &[0.0], &cfg).is_err());
    }

    #[test]
    fn bias_update_examples() {
        let h = BiasField::new(vec![0.3, -2.0, 1.0]).unwrap();
        let z = [0.9, 0.1, -0.4];
        for (a, b) in update_bias(&h, &z, 1.0, 10.0).unwrap().values().iter().zip(&z) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let fixed = BiasField::new(z.to_vec()).unwrap();
        assert_eq!(update_bias(&fixed, &z, 1.7, 10.0).unwrap().values(), &z);
        let one = BiasField::new(vec![1.0]).unwrap();
        assert_abs_diff_eq!(update_bias(&one, &[0.0], 1.1, 10.0).unwrap().values()[0], -0.1, epsilon = 1e-15);
        // clipping at the guard
        let big = BiasField::new(vec![9.0]).unwrap();
        assert_eq!(update_bias(&big, &[-9.0], 1.9, 10.0).unwrap().values(), &[-10.0]);
        assert_eq!(update_bias(&big, &[9.9], 2.0, 10.0).unwrap().values(), &[10.0]);
        assert!(update_bias(&h, &[0.0], 1.0, 10.0).is_err());
    }

    proptest! {
        #[test]
        fn bias_map_contracts(h in -5.0f64..5.0, z in -1.0f64..1.0, ell in 0.0f64..2.0) {
            let next = update_bias(&BiasField::new(vec![h]).unwrap(), &[z], ell, 10.0).unwrap();
            let lhs = (next.values()[0] - z).abs();
            let rhs = (1.0 - ell).abs() * (h - z).abs();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_loop_solves_a_single_edge() {
        let d = single_edge();
        let sol = solve_exact(&d);
        let cfg = OptimizerConfig { record_trace: true, ..OptimizerConfig::default() };
        let init = point(vec![0.4], vec![0.2], vec![1.0, 1.0]);
        let res = inner_loop(&init, &d, Some(&sol), &cfg, 0).unwrap();
        assert!(res.converged);
        assert!(res.n_ite <= cfg.max_iter);
        assert!((res.e_f + 0.5).abs() < 1e-3, "e_f = {}", res.e_f);
        assert_eq!(res.evaluations, 1 + res.n_ite * 3);
        let trace = res.trace.unwrap();
        assert_eq!(trace.len(), res.n_ite + 1);
        assert!(trace.iter().all(|r| r.energy.is_finite() && r.energy >= -0.5 - 1e-12 && r.energy <= 0.5 + 1e-12));
    }

    #[test]
    fn evaluation_count_per_iteration() {
        let g = generate_regular_graph(6, 3, true, 21).unwrap();
        let d = build_cost_diagonal(&g).unwrap();
        for p in 1..=3 {
            let cfg = OptimizerConfig { max_iter: 7, tol: 1e-300, ..OptimizerConfig::default() };
            let init = point(vec![0.3; p], vec![0.2; p], vec![1.0; 6]);
            let res = inner_loop(&init, &d, None, &cfg, 0).unwrap();
            assert_eq!(res.n_ite, 7);
            assert!(!res.converged);
            assert_eq!(res.evaluations, 1 + 7 * (2 * p + 1));
        }
    }

    #[test]
    fn zero_bias_and_zero_rate_is_bias_free() {
        let g = generate_regular_graph(8, 3, false, 2).unwrap();
        let d = build_cost_diagonal(&g).unwrap();
        let cfg = OptimizerConfig { ell: 0.0, max_iter: 50, record_trace: true, ..OptimizerConfig::default() };
        let res = inner_loop(&point(vec![0.5, 0.1], vec![0.3, 0.0], vec![0.0; 8]), &d, None, &cfg, 0).unwrap();
        assert!(res.point.bias.is_zero());
        assert!(res.trace.unwrap().iter().all(|r| r.h.iter().all(|&h| h == 0.0)));
    }

    #[test]
    fn shot_mode_runs_and_is_seeded() {
        let g = generate_regular_graph(6, 3, true, 4).unwrap();
        let d = build_cost_diagonal(&g).unwrap();
        let cfg = OptimizerConfig { z_shots: Some(500), max_iter: 30, ..OptimizerConfig::default() };
        let init = point(vec![0.5], vec![0.3], vec![1.0; 6]);
        let a = inner_loop(&init, &d, None, &cfg, 5).unwrap();
        let b = inner_loop(&init, &d, None, &cfg, 5).unwrap();
        let c = inner_loop(&init, &d, None, &cfg, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.point.bias, c.point.bias);
    }

    #[test]
    fn config_validation() {
        let ok = OptimizerConfig::default();
        assert!(ok.validate().is_ok());
        assert!(OptimizerConfig { eps_g: 0.0, ..ok.clone() }.validate().is_err());
        assert!(OptimizerConfig { tol: -1.0, ..ok.clone() }.validate().is_err());
        assert!(OptimizerConfig { max_iter: 0, ..ok.clone() }.validate().is_err());
        assert!(OptimizerConfig { ell: -0.1, ..ok.clone() }.validate().is_err());
        assert!(OptimizerConfig { z_shots: Some(0), ..ok }.validate().is_err());
    }
}
