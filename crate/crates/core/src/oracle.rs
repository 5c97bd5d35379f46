//! Exhaustive reference solvers. These are test instruments: no pruning, no
//! heuristics, fixed enumeration order (subset size first, then
//! lexicographic by arc id), so expected values are reproducible verbatim.
//! Intended for roughly m <= 18 and k <= 4; callers enforce size guards.

use crate::graph::{
    has_negative_cycle_in, ArcId, DeletionSet, GraphError, VertexId, WeightedDigraph,
};
use crate::negcycle::Cycle;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    Graph(GraphError),
    OverlappingTerminals { vertex: VertexId },
    MismatchedSides { sources: usize, sinks: usize },
    UnknownArcInU(ArcId),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Graph(e) => write!(f, "{e}"),
            OracleError::OverlappingTerminals { vertex } => {
                write!(f, "terminal sets overlap at vertex {vertex}")
            }
            OracleError::MismatchedSides { sources, sinks } => {
                write!(f, "{sources} source sets but {sinks} sink sets")
            }
            OracleError::UnknownArcInU(id) => write!(f, "arc id {id} in U does not exist"),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<GraphError> for OracleError {
    fn from(e: GraphError) -> Self {
        OracleError::Graph(e)
    }
}

/// Visits subsets of `0..m` in the fixed order: by size `0..=k_max`, within a
/// size lexicographically. Stops when the visitor returns `Some`.
pub fn first_subset_where<T>(
    m: usize,
    k_max: usize,
    mut visit: impl FnMut(&[ArcId]) -> Option<T>,
) -> Option<T> {
    let k_max = k_max.min(m);
    if let Some(t) = visit(&[]) {
        return Some(t);
    }
    for size in 1..=k_max {
        let mut combo: Vec<ArcId> = (0..size as u32).collect();
        loop {
            if let Some(t) = visit(&combo) {
                return Some(t);
            }
            if !next_combination(&mut combo, m) {
                break;
            }
        }
    }
    None
}

fn next_combination(combo: &mut [ArcId], m: usize) -> bool {
    let size = combo.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if combo[i] < (m - size + i) as u32 {
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum-cardinality deletion set of size <= k leaving no negative cycle,
/// or `None` if none exists within the budget.
pub fn brute_force_ndfas(g: &WeightedDigraph, k: usize) -> Option<DeletionSet> {
    let mut alive = g.full_mask();
    first_subset_where(g.arc_count(), k, |subset| {
        for &id in subset {
            alive[id as usize] = false;
        }
        let ok = !has_negative_cycle_in(g, &alive);
        for &id in subset {
            alive[id as usize] = true;
        }
        ok.then(|| DeletionSet::from_ids(subset.iter().copied()))
    })
}

/// Is every forbidden pair `X_i -> Y_j` (j <= i) disconnected under `alive`?
pub fn is_skew_cut(
    g: &WeightedDigraph,
    alive: &[bool],
    sources: &[Vec<VertexId>],
    sinks: &[Vec<VertexId>],
) -> bool {
    for (i, xs) in sources.iter().enumerate() {
        if xs.is_empty() {
            continue;
        }
        let reach = reachable_from(g, alive, xs);
        for sink in sinks.iter().take(i + 1) {
            if sink.iter().any(|&y| reach[y as usize]) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn reachable_from(g: &WeightedDigraph, alive: &[bool], starts: &[VertexId]) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue: Vec<VertexId> = Vec::new();
    for &s in starts {
        if !seen[s as usize] {
            seen[s as usize] = true;
            queue.push(s);
        }
    }
    while let Some(v) = queue.pop() {
        for &aid in g.out_arcs(v) {
            if !alive[aid as usize] {
                continue;
            }
            let w = g.arcs()[aid as usize].head;
            if !seen[w as usize] {
                seen[w as usize] = true;
                queue.push(w);
            }
        }
    }
    seen
}

fn check_terminals(
    sources: &[Vec<VertexId>],
    sinks: &[Vec<VertexId>],
) -> Result<(), OracleError> {
    if sources.len() != sinks.len() {
        return Err(OracleError::MismatchedSides {
            sources: sources.len(),
            sinks: sinks.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for set in sources.iter().chain(sinks.iter()) {
        for &v in set {
            if !seen.insert(v) {
                return Err(OracleError::OverlappingTerminals { vertex: v });
            }
        }
    }
    Ok(())
}

/// Minimum arc set (size <= k) whose removal leaves no `X_i -> Y_j` path for
/// any j <= i. Exhaustive.
pub fn brute_force_skew_cut(
    g: &WeightedDigraph,
    sources: &[Vec<VertexId>],
    sinks: &[Vec<VertexId>],
    k: usize,
) -> Result<Option<DeletionSet>, OracleError> {
    check_terminals(sources, sinks)?;
    let mut alive = g.full_mask();
    Ok(first_subset_where(g.arc_count(), k, |subset| {
        for &id in subset {
            alive[id as usize] = false;
        }
        let ok = is_skew_cut(g, &alive, sources, sinks);
        for &id in subset {
            alive[id as usize] = true;
        }
        ok.then(|| DeletionSet::from_ids(subset.iter().copied()))
    }))
}

/// Does some cycle of the alive subgraph pass through an arc of `u_set`?
pub(crate) fn has_cycle_through(g: &WeightedDigraph, alive: &[bool], u_set: &[ArcId]) -> bool {
    u_set.iter().any(|&uid| {
        if !alive[uid as usize] {
            return false;
        }
        let arc = &g.arcs()[uid as usize];
        let reach = reachable_from(g, alive, &[arc.head]);
        reach[arc.tail as usize]
    })
}

/// Minimum arc set (size <= k) hitting every cycle that meets `u_set`.
pub fn brute_force_subset_dfas(
    g: &WeightedDigraph,
    u_set: &[ArcId],
    k: usize,
) -> Result<Option<DeletionSet>, OracleError> {
    for &id in u_set {
        if id as usize >= g.arc_count() {
            return Err(OracleError::UnknownArcInU(id));
        }
    }
    let mut alive = g.full_mask();
    Ok(first_subset_where(g.arc_count(), k, |subset| {
        for &id in subset {
            alive[id as usize] = false;
        }
        let ok = !has_cycle_through(g, &alive, u_set);
        for &id in subset {
            alive[id as usize] = true;
        }
        ok.then(|| DeletionSet::from_ids(subset.iter().copied()))
    }))
}

/// Every simple directed cycle of the graph, each reported once in canonical
/// rotation. Exponential; test sizes only.
pub fn enumerate_simple_cycles(g: &WeightedDigraph) -> Vec<Cycle> {
    enumerate_simple_cycles_in(g, &g.full_mask())
}

pub(crate) fn enumerate_simple_cycles_in(g: &WeightedDigraph, alive: &[bool]) -> Vec<Cycle> {
    let mut out = Vec::new();
    let mut visited = vec![false; g.vertex_count()];
    let mut path: Vec<ArcId> = Vec::new();
    for start in 0..g.arc_count() as u32 {
        if !alive[start as usize] {
            continue;
        }
        let a = &g.arcs()[start as usize];
        visited[a.tail as usize] = true;
        visited[a.head as usize] = true;
        path.push(start);
        cycle_dfs(g, alive, start, a.tail, a.head, &mut visited, &mut path, &mut out);
        path.pop();
        visited[a.tail as usize] = false;
        visited[a.head as usize] = false;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &WeightedDigraph,
    alive: &[bool],
    min_id: ArcId,
    origin: VertexId,
    current: VertexId,
    visited: &mut Vec<bool>,
    path: &mut Vec<ArcId>,
    out: &mut Vec<Cycle>,
) {
    for &id in g.out_arcs(current) {
        // Each cycle is discovered exactly once: from its minimum arc id.
        if !alive[id as usize] || id <= min_id {
            continue;
        }
        let a = &g.arcs()[id as usize];
        if a.head == origin {
            path.push(id);
            out.push(Cycle::from_arcs(g, path.clone()));
            path.pop();
            continue;
        }
        if visited[a.head as usize] {
            continue;
        }
        visited[a.head as usize] = true;
        path.push(id);
        cycle_dfs(g, alive, min_id, origin, a.head, visited, path, out);
        path.pop();
        visited[a.head as usize] = false;
    }
}

/// Lengths of all simple cycles of an undirected simple graph. Used to check
/// structural bounds; exponential, test sizes only.
pub fn undirected_cycle_lengths(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<usize> {
    let adj = undirected_adj(n, edges);
    let mut out = Vec::new();
    // A cycle is counted once: rooted at its minimum vertex, second vertex
    // smaller than the last.
    for root in 0..n as u32 {
        let mut path = vec![root];
        let mut on_path = vec![false; n];
        on_path[root as usize] = true;
        undirected_cycle_dfs(&adj, root, &mut path, &mut on_path, &mut out);
    }
    out
}

fn undirected_adj(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<Vec<VertexId>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn undirected_cycle_dfs(
    adj: &[Vec<VertexId>],
    root: VertexId,
    path: &mut Vec<VertexId>,
    on_path: &mut Vec<bool>,
    out: &mut Vec<usize>,
) {
    let current = *path.last().unwrap();
    for &next in &adj[current as usize] {
        if next == root && path.len() >= 3 {
            // Close only when the second vertex is the smaller neighbour of
            // the root on this cycle, so each cycle is reported once.
            if path[1] < path[path.len() - 1] {
                out.push(path.len());
            }
            continue;
        }
        if next <= root || on_path[next as usize] {
            continue;
        }
        on_path[next as usize] = true;
        path.push(next);
        undirected_cycle_dfs(adj, root, path, on_path, out);
        path.pop();
        on_path[next as usize] = false;
    }
}

/// Length (in edges) of the longest simple path of an undirected simple
/// graph. Exponential, test sizes only.
pub fn undirected_longest_path(n: usize, edges: &[(VertexId, VertexId)]) -> usize {
    let adj = undirected_adj(n, edges);
    let mut best = 0;
    let mut on_path = vec![false; n];
    for start in 0..n as u32 {
        on_path[start as usize] = true;
        longest_path_dfs(&adj, start, 0, &mut on_path, &mut best);
        on_path[start as usize] = false;
    }
    best
}

fn longest_path_dfs(
    adj: &[Vec<VertexId>],
    current: VertexId,
    len: usize,
    on_path: &mut Vec<bool>,
    best: &mut usize,
) {
    *best = (*best).max(len);
    for &next in &adj[current as usize] {
        if !on_path[next as usize] {
            on_path[next as usize] = true;
            longest_path_dfs(adj, next, len + 1, on_path, best);
            on_path[next as usize] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_solution;

    fn graph(n: usize, arcs: &[(u32, u32, i64)]) -> WeightedDigraph {
        WeightedDigraph::new(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn ndfas_on_triangle() {
        let g = graph(3, &[(0, 1, -1), (1, 2, -1), (2, 0, -1)]);
        let s = brute_force_ndfas(&g, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert!(verify_solution(&g, &s, 1).unwrap().valid());
        assert!(brute_force_ndfas(&g, 0).is_none());
    }

    #[test]
    fn ndfas_zero_weight_cycle_needs_nothing() {
        let g = graph(2, &[(0, 1, 1), (1, 0, -1)]);
        let s = brute_force_ndfas(&g, 0).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn ndfas_monotone_in_budget() {
        let g = graph(4, &[(0, 1, -2), (1, 0, 1), (2, 3, -1), (3, 2, 0)]);
        let s1 = brute_force_ndfas(&g, 2).unwrap();
        let s2 = brute_force_ndfas(&g, 4).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn skew_cut_single_arc() {
        let g = graph(2, &[(0, 1, 0)]);
        let s = brute_force_skew_cut(&g, &[vec![0]], &[vec![1]], 1).unwrap().unwrap();
        assert_eq!(s, DeletionSet::from_ids([0]));
    }

    #[test]
    fn skew_cut_two_pairs() {
        // a=0, b=1, c=2, d=3; arcs a->b, c->b, c->d, a->d.
        let g = graph(4, &[(0, 1, 0), (2, 1, 0), (2, 3, 0), (0, 3, 0)]);
        let sources = vec![vec![0], vec![2]];
        let sinks = vec![vec![1], vec![3]];
        assert!(brute_force_skew_cut(&g, &sources, &sinks, 2).unwrap().is_none());
        let s = brute_force_skew_cut(&g, &sources, &sinks, 3).unwrap().unwrap();
        assert_eq!(s, DeletionSet::from_ids([0, 1, 2]));
    }

    #[test]
    fn skew_cut_rejects_overlap() {
        let g = graph(2, &[(0, 1, 0)]);
        assert!(matches!(
            brute_force_skew_cut(&g, &[vec![0]], &[vec![0]], 1),
            Err(OracleError::OverlappingTerminals { vertex: 0 })
        ));
    }

    #[test]
    fn subset_dfas_cases() {
        let tri = graph(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)]);
        let s = brute_force_subset_dfas(&tri, &[0], 1).unwrap().unwrap();
        assert_eq!(s.len(), 1);

        assert_eq!(
            brute_force_subset_dfas(&tri, &[], 0).unwrap().unwrap(),
            DeletionSet::new()
        );

        // Two arc-disjoint cycles, both meeting U: one deletion cannot do.
        let two = graph(4, &[(0, 1, 0), (1, 0, 0), (2, 3, 0), (3, 2, 0)]);
        assert!(brute_force_subset_dfas(&two, &[0, 2], 1).unwrap().is_none());
    }

    #[test]
    fn cycle_enumeration_counts() {
        // Triangle plus an antiparallel pair on (0, 1).
        let g = graph(3, &[(0, 1, -1), (1, 2, -1), (2, 0, -1), (1, 0, 1)]);
        let cycles = enumerate_simple_cycles(&g);
        assert_eq!(cycles.len(), 2);
        let mut lens: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 3]);
    }

    #[test]
    fn undirected_helpers() {
        // Square with one chord: two triangles and the square itself.
        let edges = [(0u32, 1u32), (1, 2), (2, 3), (3, 0), (0, 2)];
        let mut lens = undirected_cycle_lengths(4, &edges);
        lens.sort_unstable();
        assert_eq!(lens, vec![3, 3, 4]);
        assert_eq!(undirected_longest_path(4, &edges), 3);
    }
}
