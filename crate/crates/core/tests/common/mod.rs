//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the simulator's layer kernels: matrices are built
//! densely from Pauli strings and exponentiated numerically.

#![allow(dead_code)]

use num_complex::Complex64 as C;

use abqaoa::GraphInstance;

pub type Matrix = Vec<Vec<C>>;

pub fn zeros(dim: usize) -> Matrix {
    vec![vec![C::new(0.0, 0.0); dim]; dim]
}

pub fn identity(dim: usize) -> Matrix {
    let mut m = zeros(dim);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Matrix, x: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum()).collect()
}

fn scale(a: &Matrix, s: C) -> Matrix {
    a.iter().map(|row| row.iter().map(|x| x * s).collect()).collect()
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn norm1(a: &Matrix) -> f64 {
    (0..a.len()).map(|j| a.iter().map(|row| row[j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(a)` by scaling and squaring with a 30-term Taylor series.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.len();
    let nrm = norm1(a);
    let mut s = 0;
    while nrm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let scaled = scale(a, C::new(f64::powi(2.0, -s), 0.0));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..30 {
        term = scale(&matmul(&term, &scaled), C::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..s {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// Pauli `X` or `Z` on `qubit` of an `n`-qubit register, as a dense matrix.
pub fn pauli(n: usize, qubit: usize, which: char) -> Matrix {
    let dim = 1 << n;
    let mut m = zeros(dim);
    for col in 0..dim {
        let bit = (col >> qubit) & 1;
        match which {
            'X' => m[col ^ (1 << qubit)][col] = C::new(1.0, 0.0),
            'Z' => m[col][col] = C::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0),
            _ => panic!("unsupported pauli {which}"),
        }
    }
    m
}

/// `sum_edges (w/2) Z_a Z_b` as a dense matrix.
pub fn dense_cost(g: &GraphInstance) -> Matrix {
    let n = g.n();
    let mut h = zeros(1 << n);
    for e in g.edges() {
        let zz = matmul(&pauli(n, e.a, 'Z'), &pauli(n, e.b, 'Z'));
        h = add(&h, &scale(&zz, C::new(e.weight / 2.0, 0.0)));
    }
    h
}

/// `sum_j (X_j - h_j Z_j)` as a dense matrix.
pub fn dense_mixer(h: &[f64]) -> Matrix {
    let n = h.len();
    let mut m = zeros(1 << n);
    for (j, &hj) in h.iter().enumerate() {
        m = add(&m, &pauli(n, j, 'X'));
        m = add(&m, &scale(&pauli(n, j, 'Z'), C::new(-hj, 0.0)));
    }
    m
}

/// Ground state of a Hermitian matrix with a gapped, nondegenerate ground
/// level, by imaginary-time projection of a generic start vector.
pub fn ground_state(hm: &Matrix) -> Vec<C> {
    let dim = hm.len();
    let proj = expm(&scale(hm, C::new(-5.0, 0.0)));
    let mut v: Vec<C> = (0..dim).map(|i| C::new(1.0 + 0.1 * i as f64, 0.05 * i as f64)).collect();
    for _ in 0..20 {
        v = matvec(&proj, &v);
        let nrm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    v
}

/// Dense reference for the biased protocol: ground state of the mixer, then
/// alternating `exp(-i gamma H_C)` and `exp(-i beta H_M)`.
pub fn dense_evolve(g: &GraphInstance, gammas: &[f64], betas: &[f64], h: &[f64]) -> Vec<C> {
    let hc = dense_cost(g);
    let hm = dense_mixer(h);
    let mut psi = ground_state(&hm);
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        psi = matvec(&expm(&scale(&hc, C::new(0.0, -gamma))), &psi);
        psi = matvec(&expm(&scale(&hm, C::new(0.0, -beta))), &psi);
    }
    psi
}

pub fn expectation(hm: &Matrix, psi: &[C]) -> f64 {
    let hv = matvec(hm, psi);
    psi.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum::<C>().re
}

/// Largest amplitude difference after removing the global phase of `b` relative to `a`.
pub fn distance_up_to_phase(a: &[C], b: &[C]) -> f64 {
    let overlap: C = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x - y * phase).norm()).fold(0.0, f64::max)
}

/// Energy per basis state straight from the edge list.
pub fn cut_energy(g: &GraphInstance, z: usize) -> f64 {
    g.edges()
        .iter()
        .map(|e| {
            let sa = if (z >> e.a) & 1 == 0 { 1.0 } else { -1.0 };
            let sb = if (z >> e.b) & 1 == 0 { 1.0 } else { -1.0 };
            e.weight / 2.0 * sa * sb
        })
        .sum()
}

/// Standard QAOA as usually written: start in `|+>^n`, cost phase
/// `exp(-i gamma H_C)`, mixer `prod_j exp(-i beta X_j)` with the rotation
/// written out as `cos(beta) I - i sin(beta) X`.
pub fn textbook_qaoa(g: &GraphInstance, gammas: &[f64], betas: &[f64]) -> Vec<C> {
    let n = g.n();
    let dim = 1usize << n;
    let energies: Vec<f64> = (0..dim).map(|z| cut_energy(g, z)).collect();
    let amp = 1.0 / (dim as f64).sqrt();
    let mut psi = vec![C::new(amp, 0.0); dim];
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        for (a, &e) in psi.iter_mut().zip(&energies) {
            *a *= C::from_polar(1.0, -gamma * e);
        }
        let (c, s) = (beta.cos(), beta.sin());
        for q in 0..n {
            let mut next = psi.clone();
            for z in 0..dim {
                next[z] = psi[z] * c + psi[z ^ (1 << q)] * C::new(0.0, -s);
            }
            psi = next;
        }
    }
    psi
}

/// Gates of one level-`p` state preparation, assembled one by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Ry(usize),
    Cnot(usize, usize),
    Rz(usize),
    Rxz(usize),
}

/// Explicit circuit for `g`: an `R_y` per qubit to prepare the mixer ground
/// state, then per level a `CNOT - R_z - CNOT` ladder for each edge and one
/// `R_xz` per qubit.
pub fn build_circuit(g: &GraphInstance, p: usize) -> Vec<Gate> {
    let n = g.n();
    let mut circuit: Vec<Gate> = (0..n).map(Gate::Ry).collect();
    for _ in 0..p {
        for e in g.edges() {
            circuit.push(Gate::Cnot(e.a, e.b));
            circuit.push(Gate::Rz(e.b));
            circuit.push(Gate::Cnot(e.a, e.b));
        }
        circuit.extend((0..n).map(Gate::Rxz));
    }
    circuit
}
