//! Exact isomorphism classes of small regular graphs.
//!
//! Candidates are first separated by cheap invariants (sorted per-vertex
//! triangle counts and the closed-walk counts `tr(A^k)`, which fix the
//! adjacency spectrum), then confirmed by a backtracking vertex mapping.

use crate::error::{Error, Result};
use crate::seeding;

use super::{random_regular_edges, Edge, GraphInstance};

/// Largest order for which exhaustive isomorphism testing is offered.
pub const MAX_ISOMORPHISM_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphInvariants {
    pub triangles: Vec<u32>,
    pub closed_walks: Vec<u64>,
}

impl GraphInvariants {
    pub fn of(adj: &[Vec<bool>]) -> Self {
        let n = adj.len();
        let mut triangles: Vec<u32> = (0..n)
            .map(|v| {
                let mut t = 0;
                for a in 0..n {
                    for b in (a + 1)..n {
                        if adj[v][a] && adj[v][b] && adj[a][b] {
                            t += 1;
                        }
                    }
                }
                t
            })
            .collect();
        triangles.sort_unstable();

        let a: Vec<Vec<u64>> = adj.iter().map(|row| row.iter().map(|&x| x as u64).collect()).collect();
        let mut power = a.clone();
        let mut closed_walks = Vec::with_capacity(n);
        for _ in 0..n {
            closed_walks.push((0..n).map(|i| power[i][i]).sum());
            power = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| power[i][k] * a[k][j]).sum()).collect())
                .collect();
        }
        GraphInvariants { triangles, closed_walks }
    }
}

/// Exact test by backtracking over vertex mappings.
pub fn are_isomorphic(g: &[Vec<bool>], h: &[Vec<bool>]) -> bool {
    let n = g.len();
    if n != h.len() {
        return false;
    }
    let deg = |m: &[Vec<bool>], v: usize| m[v].iter().filter(|&&x| x).count();
    let mut gd: Vec<usize> = (0..n).map(|v| deg(g, v)).collect();
    let mut hd: Vec<usize> = (0..n).map(|v| deg(h, v)).collect();
    let (g_deg, h_deg) = (gd.clone(), hd.clone());
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return false;
    }
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_mapping(g, h, &g_deg, &h_deg, 0, &mut mapping, &mut used)
}

fn extend_mapping(
    g: &[Vec<bool>],
    h: &[Vec<bool>],
    g_deg: &[usize],
    h_deg: &[usize],
    v: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = g.len();
    if v == n {
        return true;
    }
    for w in 0..n {
        if used[w] || g_deg[v] != h_deg[w] {
            continue;
        }
        if (0..v).any(|u| g[v][u] != h[w][mapping[u]]) {
            continue;
        }
        mapping[v] = w;
        used[w] = true;
        if extend_mapping(g, h, g_deg, h_deg, v + 1, mapping, used) {
            return true;
        }
        used[w] = false;
    }
    mapping[v] = usize::MAX;
    false
}

#[derive(Debug, Clone)]
pub struct NonIsomorphicSet {
    /// One representative per class, ordered by invariants, ids `u3r-n{n}-g{k}`.
    pub graphs: Vec<GraphInstance>,
    pub attempts: usize,
    /// True when the second half of the attempt budget produced no new class.
    pub complete: bool,
}

/// Samples connected unweighted cubic graphs and keeps one per isomorphism class.
pub fn collect_nonisomorphic_u3r(n: usize, attempt_budget: usize, rng_seed: u64) -> Result<NonIsomorphicSet> {
    if n > MAX_ISOMORPHISM_ORDER {
        return Err(Error::Capacity { n, limit: MAX_ISOMORPHISM_ORDER });
    }
    let mut rng = seeding::stream_rng(rng_seed, "nonisomorphic-u3r", &[n as u64]);
    let mut classes: Vec<(GraphInvariants, Vec<Vec<bool>>, Vec<(usize, usize)>)> = Vec::new();
    let mut last_new = 0;
    for attempt in 1..=attempt_budget {
        let edges = random_regular_edges(n, 3, &mut rng)?;
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let inv = GraphInvariants::of(&adj);
        let known = classes.iter().any(|(ci, cadj, _)| *ci == inv && are_isomorphic(cadj, &adj));
        if !known {
            classes.push((inv, adj, edges));
            last_new = attempt;
        }
    }
    // stable: equal invariants keep discovery order
    classes.sort_by(|x, y| x.0.cmp(&y.0));
    let graphs = classes
        .into_iter()
        .enumerate()
        .map(|(k, (_, _, edges))| {
            let edges = edges.into_iter().map(|(a, b)| Edge { a, b, weight: 1.0 }).collect();
            GraphInstance::new(format!("u3r-n{n}-g{}", k + 1), n, 3, edges)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonIsomorphicSet { graphs, attempts: attempt_budget, complete: attempt_budget - last_new >= (attempt_budget / 2).max(1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permuted(adj: &[Vec<bool>], perm: &[usize]) -> Vec<Vec<bool>> {
        let n = adj.len();
        let mut out = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[perm[i]][perm[j]] = adj[i][j];
            }
        }
        out
    }

    #[test]
    fn relabelled_graph_is_isomorphic() {
        let g = super::super::generate_regular_graph(10, 3, false, 3).unwrap();
        let adj = g.adjacency();
        let perm = [3, 7, 1, 0, 9, 2, 8, 5, 4, 6];
        let h = permuted(&adj, &perm);
        assert_eq!(GraphInvariants::of(&adj), GraphInvariants::of(&h));
        assert!(are_isomorphic(&adj, &h));
    }

    #[test]
    fn prism_and_k33_are_distinct() {
        let mut prism = vec![vec![false; 6]; 6];
        let mut k33 = vec![vec![false; 6]; 6];
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)] {
            prism[a][b] = true;
            prism[b][a] = true;
        }
        for a in 0..3 {
            for b in 3..6 {
                k33[a][b] = true;
                k33[b][a] = true;
            }
        }
        assert!(!are_isomorphic(&prism, &k33));
        assert_ne!(GraphInvariants::of(&prism), GraphInvariants::of(&k33));
    }

    #[test]
    fn class_counts_for_small_orders() {
        let k4 = collect_nonisomorphic_u3r(4, 100, 0).unwrap();
        assert_eq!(k4.graphs.len(), 1);
        assert!(k4.complete);
        let six = collect_nonisomorphic_u3r(6, 10_000, 0).unwrap();
        assert_eq!(six.graphs.len(), 2);
        let eight = collect_nonisomorphic_u3r(8, 10_000, 0).unwrap();
        assert_eq!(eight.graphs.len(), 5);
        assert!(eight.complete);
        for (k, g) in eight.graphs.iter().enumerate() {
            assert_eq!(g.id(), format!("u3r-n8-g{}", k + 1));
            assert!(g.is_unweighted());
        }
    }

    #[test]
    fn tiny_budget_is_flagged_incomplete() {
        let set = collect_nonisomorphic_u3r(10, 1, 0).unwrap();
        assert_eq!(set.graphs.len(), 1);
        assert!(!set.complete);
    }

    #[test]
    fn order_above_limit_is_refused() {
        assert!(collect_nonisomorphic_u3r(14, 10, 0).is_err());
    }
}
