//! Dense statevector simulation of the cost-phase / biased-mixer circuit.
//!
//! The register is stored as `2^n` complex amplitudes with qubit `j` on bit
//! `j` of the index. Each layer is applied in place:
//!
//! * cost phase: `amp[z] *= exp(-i gamma C[z])`, one pass over the diagonal;
//! * mixer: `n` independent 2x2 rotations `exp(-i beta (X - h_j Z))`.
//!
//! Both are `O(n 2^n)` and allocation free.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::error::{Error, Result};
use crate::maxcut::{CostDiagonal, ExactSolution, GraphInstance};
use crate::schedule::Schedule;
use crate::seeding;

/// Default magnitude bound on the bias fields.
pub const DEFAULT_H_MAX: f64 = 10.0;

/// Per-qubit longitudinal fields of the biased mixer `sum_j (X_j - h_j Z_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasField {
    h: Vec<f64>,
}

impl BiasField {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        Self::with_bound(h, DEFAULT_H_MAX)
    }

    pub fn with_bound(h: Vec<f64>, h_max: f64) -> Result<Self> {
        if let Some((j, x)) = h.iter().enumerate().find(|(_, x)| !x.is_finite() || x.abs() > h_max) {
            return Err(Error::InvalidBias(format!("h[{j}] = {x} outside [-{h_max}, {h_max}]")));
        }
        Ok(BiasField { h })
    }

    pub fn zeros(n: usize) -> Self {
        BiasField { h: vec![0.0; n] }
    }

    pub fn uniform(n: usize, value: f64) -> Self {
        BiasField { h: vec![value; n] }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(|&x| x == 0.0)
    }

    /// Ground-state amplitudes `(a, b)` of `X - h Z` on one qubit, with `a >= 0`.
    ///
    /// The Bloch vector is `(-1, 0, h) / sqrt(1 + h^2)`, so with
    /// `cos(theta) = h / w` the state is `cos(theta/2)|0> - sin(theta/2)|1>`.
    pub fn single_qubit_ground_state(h: f64) -> (f64, f64) {
        let cos_theta = h / (1.0 + h * h).sqrt();
        (((1.0 + cos_theta) / 2.0).sqrt(), -((1.0 - cos_theta) / 2.0).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis_state(n: usize, z: u64) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[z as usize] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: amps.len().next_power_of_two(), found: amps.len() });
        }
        Ok(StateVector { n: amps.len().trailing_zeros() as usize, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amps.iter().map(|a| a.norm_sqr())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch { expected: self.n, found: n });
        }
        Ok(())
    }

    /// Multiplies `amp[z]` by `exp(-i gamma values[z])`.
    pub fn apply_cost_phase(&mut self, d: &CostDiagonal, gamma: f64) -> Result<()> {
        self.check_dim(d.n())?;
        if gamma == 0.0 {
            return Ok(());
        }
        // values[z] == values[!z]: evaluate each phase once for the pair (z, !z).
        let values = d.values();
        let half = self.amps.len() / 2;
        let (low, high) = self.amps.split_at_mut(half);
        for (z, (lo, hi)) in low.iter_mut().zip(high.iter_mut().rev()).enumerate() {
            let phase = Complex64::cis(-gamma * values[z]);
            *lo *= phase;
            *hi *= phase;
        }
        Ok(())
    }

    /// Applies `exp(-i beta (X_j - h_j Z_j))` on every qubit `j`.
    pub fn apply_mixer(&mut self, h: &BiasField, beta: f64) -> Result<()> {
        self.check_dim(h.len())?;
        if beta == 0.0 {
            return Ok(());
        }
        for (j, &hj) in h.values().iter().enumerate() {
            let w = (1.0 + hj * hj).sqrt();
            let (s, c) = (beta * w).sin_cos();
            let d0 = Complex64::new(c, s * hj / w);
            let d1 = Complex64::new(c, -s * hj / w);
            let off = Complex64::new(0.0, -s / w);
            let stride = 1usize << j;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (zeros, ones) = block.split_at_mut(stride);
                for (a0, a1) in zeros.iter_mut().zip(ones.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = d0 * x0 + off * x1;
                    *a1 = off * x0 + d1 * x1;
                }
            }
        }
        Ok(())
    }

    /// `<H_C>` for the given diagonal.
    pub fn expect_cost(&self, d: &CostDiagonal) -> Result<f64> {
        self.check_dim(d.n())?;
        Ok(self.amps.iter().zip(d.values()).map(|(a, &v)| a.norm_sqr() * v).sum())
    }

    /// `<Z_j>` for every qubit, with bit 0 counting as +1.
    pub fn expect_z_all(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.n];
        for (idx, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            for (j, zj) in z.iter_mut().enumerate() {
                if (idx >> j) & 1 == 0 {
                    *zj += p;
                } else {
                    *zj -= p;
                }
            }
        }
        z
    }

    /// Total probability on the ground manifold of `sol`.
    pub fn fidelity_to_manifold(&self, sol: &ExactSolution) -> f64 {
        sol.ground_states.iter().map(|&z| self.amps[z as usize].norm_sqr()).sum()
    }

    /// `shots` i.i.d. computational-basis measurements.
    pub fn sample_bitstrings(&self, shots: usize, rng_seed: u64) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::Domain("shots must be at least 1".into()));
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|e| Error::Numerical(format!("cannot sample from state: {e}")))?;
        let mut rng = seeding::stream_rng(rng_seed, "shots", &[]);
        Ok((0..shots).map(|_| dist.sample(&mut rng) as u64).collect())
    }
}

/// Ground state of `sum_j (X_j - h_j Z_j)` as a product state; `h = 0` gives `|->^n`.
pub fn initial_state(h: &BiasField) -> StateVector {
    let mut amps = Vec::with_capacity(1 << h.len());
    amps.push(Complex64::new(1.0, 0.0));
    for &hj in h.values() {
        let (a, b) = BiasField::single_qubit_ground_state(hj);
        let len = amps.len();
        for i in 0..len {
            let x = amps[i];
            amps.push(x * b);
            amps[i] = x * a;
        }
    }
    StateVector { n: h.len(), amps }
}

/// Prepares `initial_state(h)` and applies cost then mixer for `k = 1..p'`.
pub fn evolve(d: &CostDiagonal, schedule: &Schedule, h: &BiasField) -> Result<StateVector> {
    if h.len() != d.n() {
        return Err(Error::DimensionMismatch { expected: d.n(), found: h.len() });
    }
    let mut state = initial_state(h);
    for (&gamma, &beta) in schedule.gammas().iter().zip(schedule.betas()) {
        state.apply_cost_phase(d, gamma)?;
        state.apply_mixer(h, beta)?;
    }
    Ok(state)
}

/// Estimates recovered from one shot record: `<H_C>` from the `ZZ` terms and
/// every `<Z_j>` from the joint outcome counts of an edge containing `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotEstimate {
    pub energy: f64,
    pub z: Vec<f64>,
}

pub fn estimate_from_shots(samples: &[u64], g: &GraphInstance) -> Result<ShotEstimate> {
    if samples.is_empty() {
        return Err(Error::Domain("empty shot record".into()));
    }
    let m = samples.len() as f64;
    // t[e][ab]: fraction of shots with qubit a of edge e in state `a`, qubit b in `b`
    let t: Vec<[f64; 4]> = g
        .edges()
        .iter()
        .map(|e| {
            let mut counts = [0usize; 4];
            for &z in samples {
                let bits = (((z >> e.a) & 1) << 1 | ((z >> e.b) & 1)) as usize;
                counts[bits] += 1;
            }
            counts.map(|c| c as f64 / m)
        })
        .collect();
    let energy = g
        .edges()
        .iter()
        .zip(&t)
        .map(|(e, t)| e.weight / 2.0 * (t[0b00] - t[0b01] - t[0b10] + t[0b11]))
        .sum();
    let z = (0..g.n())
        .map(|v| {
            let (k, e) = g
                .edges()
                .iter()
                .enumerate()
                .find(|(_, e)| e.a == v || e.b == v)
                .expect("regular graph: every vertex has an edge");
            let t = &t[k];
            if e.a == v {
                t[0b00] + t[0b01] - t[0b10] - t[0b11]
            } else {
                t[0b00] + t[0b10] - t[0b01] - t[0b11]
            }
        })
        .collect();
    Ok(ShotEstimate { energy, z })
}
