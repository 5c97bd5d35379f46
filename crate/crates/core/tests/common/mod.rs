//! Shared helpers for the integration suites: seeded instance generators and
//! slow reference routines kept independent from the library's internals.

#![allow(dead_code)]

use minfb::graph::{VertexId, WeightedDigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random loopless multigraph with up to `n_max` vertices and `m_max` arcs,
/// weights drawn uniformly from `choices`.
pub fn random_digraph(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    m_max: usize,
    choices: &[i64],
) -> WeightedDigraph {
    let n = rng.gen_range(1..=n_max.max(1));
    let m = if n < 2 { 0 } else { rng.gen_range(0..=m_max) };
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let tail = rng.gen_range(0..n as u32);
        let mut head = rng.gen_range(0..n as u32);
        while head == tail {
            head = rng.gen_range(0..n as u32);
        }
        let w = choices[rng.gen_range(0..choices.len())];
        arcs.push((tail, head, w));
    }
    WeightedDigraph::new(n, arcs).expect("random graph is valid")
}

pub fn weight_range(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).collect()
}

/// Random DAG: arcs only go from a lower to a higher vertex index.
pub fn random_dag(rng: &mut ChaCha8Rng, n_max: usize, m_max: usize) -> WeightedDigraph {
    let n = rng.gen_range(2..=n_max.max(2));
    let m = rng.gen_range(0..=m_max);
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let a = rng.gen_range(0..n as u32);
        let mut b = rng.gen_range(0..n as u32);
        while b == a {
            b = rng.gen_range(0..n as u32);
        }
        let (t, h) = if a < b { (a, b) } else { (b, a) };
        arcs.push((t, h, 0));
    }
    WeightedDigraph::new(n, arcs).expect("dag is valid")
}

/// Exact treewidth by branch and bound over elimination orderings, kept
/// independent from the library's subset dynamic program.
pub fn treewidth_by_ordering_search(n: usize, edges: &[(VertexId, VertexId)]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u as usize][v as usize] = true;
        adj[v as usize][u as usize] = true;
    }
    let mut best = n.saturating_sub(1);
    let mut alive: Vec<bool> = vec![true; n];
    search(&mut adj, &mut alive, n, 0, &mut best);
    best
}

fn search(adj: &mut Vec<Vec<bool>>, alive: &mut Vec<bool>, n: usize, current: usize, best: &mut usize) {
    if current >= *best {
        return; // cannot improve
    }
    let remaining: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if remaining.len() <= 1 {
        *best = (*best).min(current.max(remaining.len().saturating_sub(1)));
        return;
    }
    if remaining.len() - 1 <= current {
        // Eliminating the rest in any order cannot exceed `current`.
        *best = (*best).min(current);
        return;
    }
    for &v in &remaining {
        let neigh: Vec<usize> =
            remaining.iter().copied().filter(|&u| u != v && adj[v][u]).collect();
        let width = current.max(neigh.len());
        if width >= *best {
            continue;
        }
        // Eliminate v: clique-ify its neighbourhood.
        let mut added = Vec::new();
        for i in 0..neigh.len() {
            for j in i + 1..neigh.len() {
                if !adj[neigh[i]][neigh[j]] {
                    adj[neigh[i]][neigh[j]] = true;
                    adj[neigh[j]][neigh[i]] = true;
                    added.push((neigh[i], neigh[j]));
                }
            }
        }
        alive[v] = false;
        search(adj, alive, n, width, best);
        alive[v] = true;
        for (a, b) in added {
            adj[a][b] = false;
            adj[b][a] = false;
        }
    }
}

/// Exact pathwidth via the vertex-separation-number characterization: the
/// cost of a prefix is the number of its vertices with neighbours outside,
/// and pathwidth equals the min over orderings of the max prefix cost.
pub fn pathwidth_by_subset_dp(n: usize, edges: &[(VertexId, VertexId)]) -> usize {
    if n == 0 {
        return 0;
    }
    assert!(n <= 20);
    let mut neigh = vec![0u32; n];
    for &(u, v) in edges {
        neigh[u as usize] |= 1 << v;
        neigh[v as usize] |= 1 << u;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let boundary = |mask: u32| -> usize {
        (0..n)
            .filter(|&v| mask & (1 << v) != 0 && neigh[v] & !mask != 0)
            .count()
    };
    let mut cost = vec![usize::MAX; (full as usize) + 1];
    cost[0] = 0;
    for mask in 0..=full {
        let c = cost[mask as usize];
        if c == usize::MAX {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            let next = mask | (1 << v);
            let width = c.max(boundary(next));
            if width < cost[next as usize] {
                cost[next as usize] = width;
            }
        }
    }
    cost[full as usize]
}
