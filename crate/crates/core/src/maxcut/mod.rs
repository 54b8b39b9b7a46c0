//! MaxCut instances on regular graphs.
//!
//! Bit convention used throughout the crate: bit `j` of a basis index `z` is
//! qubit (vertex) `j`, and bit value 0 maps to spin +1, bit value 1 to spin -1.

mod isomorphism;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;

pub use isomorphism::{are_isomorphic, collect_nonisomorphic_u3r, GraphInvariants, NonIsomorphicSet};

/// Largest register the dense simulator accepts by default.
pub const DEFAULT_QUBIT_LIMIT: usize = 24;

/// Full restarts of the pairing model before generation gives up.
pub const GENERATION_RETRY_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Undirected, simple, connected `regularity`-regular graph with edge weights in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    id: String,
    n: usize,
    regularity: usize,
    edges: Vec<Edge>,
}

impl GraphInstance {
    /// Validates every structural invariant. Edges are normalised to `a < b`
    /// and sorted, so two instances built from the same edge set compare equal.
    pub fn new(id: impl Into<String>, n: usize, regularity: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 || regularity == 0 || n <= regularity || (n * regularity) % 2 != 0 {
            return Err(Error::Parity { n, regularity });
        }
        if edges.len() != n * regularity / 2 {
            return Err(Error::InvalidGraph(format!(
                "expected {} edges, found {}",
                n * regularity / 2,
                edges.len()
            )));
        }
        let mut degree = vec![0usize; n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut normalised = Vec::with_capacity(edges.len());
        for e in edges {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidGraph(format!("edge ({}, {}) out of range", e.a, e.b)));
            }
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {}", e.a)));
            }
            if !(e.weight > 0.0 && e.weight <= 1.0) {
                return Err(Error::InvalidGraph(format!(
                    "weight {} of edge ({}, {}) not in (0, 1]",
                    e.weight, e.a, e.b
                )));
            }
            let (a, b) = if e.a < e.b { (e.a, e.b) } else { (e.b, e.a) };
            if !seen.insert((a, b)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            degree[a] += 1;
            degree[b] += 1;
            normalised.push(Edge { a, b, weight: e.weight });
        }
        if let Some(v) = degree.iter().position(|&d| d != regularity) {
            return Err(Error::InvalidGraph(format!(
                "vertex {v} has degree {}, expected {regularity}",
                degree[v]
            )));
        }
        normalised.sort_by_key(|e| (e.a, e.b));
        Ok(GraphInstance { id: id.into(), n, regularity, edges: normalised })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn regularity(&self) -> usize {
        self.regularity
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.n]; self.n];
        for e in &self.edges {
            adj[e.a][e.b] = true;
            adj[e.b][e.a] = true;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self.n, self.edges.iter().map(|e| (e.a, e.b)))
    }

    /// Cut weight of the bipartition encoded by `z`, counted edge by edge.
    pub fn cut_value(&self, z: u64) -> f64 {
        self.edges
            .iter()
            .filter(|e| ((z >> e.a) ^ (z >> e.b)) & 1 == 1)
            .map(|e| e.weight)
            .sum()
    }
}

fn is_connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// Conventional id for generated instances, e.g. `w3r-n8-s7`.
pub fn instance_id(n: usize, regularity: usize, weighted: bool, seed: u64) -> String {
    format!("{}{}r-n{}-s{}", if weighted { 'w' } else { 'u' }, regularity, n, seed)
}

/// Random simple connected regular graph from the pairing model with full
/// restarts on self-loops, multi-edges or a disconnected result.
pub fn generate_regular_graph(n: usize, regularity: usize, weighted: bool, rng_seed: u64) -> Result<GraphInstance> {
    let mut rng = seeding::stream_rng(rng_seed, "regular-graph", &[n as u64, regularity as u64]);
    let edges = random_regular_edges(n, regularity, &mut rng)?;
    let edges = edges
        .into_iter()
        .map(|(a, b)| Edge {
            a,
            b,
            // (0, 1]: random::<f64>() is in [0, 1)
            weight: if weighted { 1.0 - rng.random::<f64>() } else { 1.0 },
        })
        .collect();
    GraphInstance::new(instance_id(n, regularity, weighted, rng_seed), n, regularity, edges)
}

pub(crate) fn random_regular_edges<R: Rng + ?Sized>(
    n: usize,
    regularity: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    if n == 0 || regularity == 0 || n <= regularity || (n * regularity) % 2 != 0 {
        return Err(Error::Parity { n, regularity });
    }
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, regularity)).collect();
    let mut adj = vec![vec![false; n]; n];
    'attempt: for _ in 0..GENERATION_RETRY_BUDGET {
        points.shuffle(rng);
        for row in adj.iter_mut() {
            row.fill(false);
        }
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || adj[a][b] {
                continue 'attempt;
            }
            adj[a][b] = true;
            adj[b][a] = true;
            edges.push((a, b));
        }
        if !is_connected(n, edges.iter().copied()) {
            continue;
        }
        edges.sort_unstable();
        return Ok(edges);
    }
    Err(Error::GenerationFailed { attempts: GENERATION_RETRY_BUDGET })
}

/// `count` independent instances; instance `i` uses the seed derived from `(seed, i)`.
pub fn generate_ensemble(
    n: usize,
    regularity: usize,
    weighted: bool,
    count: usize,
    seed: u64,
) -> Result<Vec<GraphInstance>> {
    (0..count)
        .map(|i| {
            let s = seeding::stream_seed(seed, "ensemble", &[n as u64, i as u64]);
            let g = generate_regular_graph(n, regularity, weighted, s)?;
            let prefix = if weighted { 'w' } else { 'u' };
            Ok(g.with_id(format!("{prefix}{regularity}r-n{n}-{:03}", i + 1)))
        })
        .collect()
}

/// Diagonal of the cost Hamiltonian `sum (w/2) Z_a Z_b` over all basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDiagonal {
    n: usize,
    values: Vec<f64>,
    e0: f64,
}

impl CostDiagonal {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `E0 = sum w / 2`; the cut value of `z` is `e0 - values[z]`.
    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn build_cost_diagonal(g: &GraphInstance) -> Result<CostDiagonal> {
    build_cost_diagonal_with_limit(g, DEFAULT_QUBIT_LIMIT)
}

pub fn build_cost_diagonal_with_limit(g: &GraphInstance, limit: usize) -> Result<CostDiagonal> {
    let n = g.n();
    if n > limit || n >= 64 {
        return Err(Error::Capacity { n, limit });
    }
    let dim = 1usize << n;
    let e0 = g.total_weight() / 2.0;
    let terms: Vec<(usize, usize, f64)> = g.edges().iter().map(|e| (e.a, e.b, e.weight / 2.0)).collect();
    let values = (0..dim)
        .map(|z| {
            terms
                .iter()
                .map(|&(a, b, half)| if ((z >> a) ^ (z >> b)) & 1 == 0 { half } else { -half })
                .sum()
        })
        .collect();
    Ok(CostDiagonal { n, values, e0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub e_max: f64,
    /// Ground basis indices in increasing order.
    pub ground_states: Vec<u64>,
}

impl ExactSolution {
    pub fn degeneracy(&self) -> usize {
        self.ground_states.len()
    }

    /// Ground states rendered as bit strings, qubit 0 first.
    pub fn ground_bitstrings(&self, n: usize) -> Vec<String> {
        self.ground_states.iter().map(|&z| bitstring(z, n)).collect()
    }
}

pub fn bitstring(z: u64, n: usize) -> String {
    (0..n).map(|j| if (z >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Relative slack when collecting the argmin set of a weighted diagonal.
const GROUND_TOLERANCE: f64 = 1e-9;

/// Exhaustive minimum of the diagonal: the maximum cut and all optimal partitions.
pub fn solve_exact(d: &CostDiagonal) -> ExactSolution {
    let min = d.min();
    let slack = GROUND_TOLERANCE * d.e0().abs().max(1.0);
    let ground_states = d
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= min + slack)
        .map(|(z, _)| z as u64)
        .collect();
    ExactSolution { e_max: d.e0() - min, ground_states }
}
