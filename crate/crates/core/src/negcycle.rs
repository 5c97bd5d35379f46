//! Negative-cycle detection and recovery.
//!
//! "Shortest" always means length-minimal (fewest arcs), not weight-minimal.
//! Two routes are implemented: a layered min-plus walk table that drives the
//! recovery of a concrete shortest negative cycle, and a repeated-squaring
//! min-plus route that answers existence and minimum length only. They must
//! agree; tests and debug assertions check this.

use crate::graph::{Arc, ArcId, VertexId, WeightedDigraph};

const INF: i64 = i64::MAX / 4;

/// A cycle as a chained arc sequence: consecutive arcs join head to tail and
/// the last head equals the first tail. Stored in canonical rotation, i.e.
/// starting at the minimum arc id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    arc_ids: Vec<ArcId>,
    weight: i64,
}

impl Cycle {
    pub(crate) fn from_arcs(g: &WeightedDigraph, mut arc_ids: Vec<ArcId>) -> Cycle {
        let min_pos = arc_ids
            .iter()
            .enumerate()
            .min_by_key(|(_, id)| **id)
            .map(|(pos, _)| pos)
            .expect("cycle must be non-empty");
        arc_ids.rotate_left(min_pos);
        let weight = arc_ids.iter().map(|&id| g.arcs()[id as usize].weight).sum();
        Cycle { arc_ids, weight }
    }

    pub fn arc_ids(&self) -> &[ArcId] {
        &self.arc_ids
    }

    pub fn len(&self) -> usize {
        self.arc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arc_ids.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Structural validity: arcs chain head to tail, close up, and visit
    /// pairwise distinct vertices except for the closing one.
    pub fn is_valid_in(&self, g: &WeightedDigraph) -> bool {
        if self.arc_ids.is_empty() {
            return false;
        }
        let arcs: Vec<&Arc> = match self
            .arc_ids
            .iter()
            .map(|&id| g.arc(id))
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(v) => v,
            Err(_) => return false,
        };
        let mut seen = std::collections::HashSet::new();
        for (i, a) in arcs.iter().enumerate() {
            let next = arcs[(i + 1) % arcs.len()];
            if a.head != next.tail {
                return false;
            }
            if !seen.insert(a.tail) {
                return false;
            }
        }
        self.weight == arcs.iter().map(|a| a.weight).sum::<i64>()
    }
}

/// Square min-plus matrix, row-major.
struct MinPlusMatrix {
    n: usize,
    data: Vec<i64>,
}

impl MinPlusMatrix {
    fn filled(n: usize, value: i64) -> Self {
        MinPlusMatrix { n, data: vec![value; n * n] }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    fn product(&self, other: &MinPlusMatrix) -> MinPlusMatrix {
        let n = self.n;
        let mut out = MinPlusMatrix::filled(n, INF);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a >= INF {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b >= INF {
                        continue;
                    }
                    let cand = a + b;
                    if cand < out.get(i, j) {
                        out.set(i, j, cand);
                    }
                }
            }
        }
        out
    }

    fn has_negative_diagonal(&self) -> bool {
        (0..self.n).any(|i| self.get(i, i) < 0)
    }
}

/// Minimum arc weight per ordered vertex pair; parallel arcs collapse to the
/// cheapest one.
fn weight_matrix(g: &WeightedDigraph, alive: &[bool]) -> MinPlusMatrix {
    let n = g.vertex_count();
    let mut m = MinPlusMatrix::filled(n, INF);
    for a in g.arcs() {
        if !alive[a.id as usize] {
            continue;
        }
        let (i, j) = (a.tail as usize, a.head as usize);
        if a.weight < m.get(i, j) {
            m.set(i, j, a.weight);
        }
    }
    m
}

/// Minimum length of a negative cycle, found by repeated min-plus squaring
/// of the walk matrix (diagonal zeroed so powers cover all walks of length
/// at most the exponent), followed by a binary search on the length.
pub fn min_negative_cycle_length_by_squaring(g: &WeightedDigraph) -> Option<usize> {
    min_negative_cycle_length_by_squaring_in(g, &g.full_mask())
}

pub(crate) fn min_negative_cycle_length_by_squaring_in(
    g: &WeightedDigraph,
    alive: &[bool],
) -> Option<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    let mut base = weight_matrix(g, alive);
    for i in 0..n {
        let d = base.get(i, i).min(0);
        base.set(i, i, d);
    }
    // Powers base^(2^t); base^(L) bounds min weight over closed walks of
    // length <= L because staying in place costs 0.
    let mut powers = vec![];
    let mut cur = MinPlusMatrix { n, data: base.data.clone() };
    let mut reach = 1usize;
    loop {
        powers.push(MinPlusMatrix { n, data: cur.data.clone() });
        if reach >= n {
            break;
        }
        cur = cur.product(&cur);
        reach *= 2;
    }
    if !powers.last().unwrap().has_negative_diagonal() {
        return None;
    }
    // Binary search the minimal L with a negative closed walk of length <= L.
    let mut lo = 1usize;
    let mut hi = reach;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if power_upto(&powers, mid).has_negative_diagonal() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

fn power_upto(powers: &[MinPlusMatrix], exp: usize) -> MinPlusMatrix {
    let n = powers[0].n;
    let mut acc: Option<MinPlusMatrix> = None;
    for (bit, p) in powers.iter().enumerate() {
        if exp & (1 << bit) != 0 {
            acc = Some(match acc {
                None => MinPlusMatrix { n, data: p.data.clone() },
                Some(a) => a.product(p),
            });
        }
    }
    acc.unwrap_or_else(|| {
        // exp == 0: identity of min-plus (0 diagonal, INF elsewhere).
        let mut m = MinPlusMatrix::filled(n, INF);
        for i in 0..n {
            m.set(i, i, 0);
        }
        m
    })
}

/// Exact-length walk tables: `layers[l][i][j]` is the minimum weight of a
/// walk with exactly `l` arcs from `i` to `j`, for `l = 1..=max_len`.
/// Stops early once a layer exposes a negative diagonal entry and reports
/// that layer index.
struct WalkLayers {
    layers: Vec<MinPlusMatrix>,
    shortest_negative: Option<usize>,
}

fn walk_layers(g: &WeightedDigraph, alive: &[bool], max_len: usize) -> WalkLayers {
    let n = g.vertex_count();
    let first = weight_matrix(g, alive);
    let mut layers = Vec::with_capacity(max_len);
    if first.has_negative_diagonal() {
        // Cannot happen in loopless graphs, kept for self-consistency.
        layers.push(first);
        return WalkLayers { layers, shortest_negative: Some(1) };
    }
    layers.push(first);
    for l in 2..=max_len {
        let prev = layers.last().unwrap();
        let mut next = MinPlusMatrix::filled(n, INF);
        for a in g.arcs() {
            if !alive[a.id as usize] {
                continue;
            }
            let (u, v) = (a.tail as usize, a.head as usize);
            for i in 0..n {
                let d = prev.get(i, u);
                if d >= INF {
                    continue;
                }
                let cand = d + a.weight;
                if cand < next.get(i, v) {
                    next.set(i, v, cand);
                }
            }
        }
        let negative = next.has_negative_diagonal();
        layers.push(next);
        if negative {
            return WalkLayers { layers, shortest_negative: Some(l) };
        }
    }
    WalkLayers { layers, shortest_negative: None }
}

/// Shortest (length-minimal) negative cycle, or `None` when the graph has no
/// negative cycle. Among all shortest negative cycles the one whose canonical
/// rotation (starting at its minimum arc id) is lexicographically smallest is
/// returned, which makes downstream branching reproducible.
pub fn shortest_negative_cycle(g: &WeightedDigraph) -> Option<Cycle> {
    shortest_negative_cycle_in(g, &g.full_mask())
}

pub(crate) fn shortest_negative_cycle_in(g: &WeightedDigraph, alive: &[bool]) -> Option<Cycle> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    let tables = walk_layers(g, alive, n);
    let target_len = tables.shortest_negative;
    #[cfg(debug_assertions)]
    {
        if n <= 32 {
            debug_assert_eq!(
                min_negative_cycle_length_by_squaring_in(g, alive),
                target_len,
                "walk-layer route and squaring route disagree"
            );
        }
    }
    let target_len = target_len?;
    let cycle = recover_lex_min_cycle(g, alive, &tables.layers, target_len)
        .expect("a negative cycle of the detected length must be recoverable");
    debug_assert!(cycle.is_valid_in(g));
    debug_assert!(cycle.weight() < 0);
    debug_assert_eq!(cycle.len(), target_len);
    Some(cycle)
}

/// DFS for the lexicographically smallest negative cycle of exactly
/// `target_len` arcs. Start arcs are tried in increasing id order and forced
/// to be the cycle minimum; every negative closed walk of minimal length is a
/// simple cycle, so vertex-repetition pruning loses nothing.
fn recover_lex_min_cycle(
    g: &WeightedDigraph,
    alive: &[bool],
    layers: &[MinPlusMatrix],
    target_len: usize,
) -> Option<Cycle> {
    let n = g.vertex_count();
    let mut start_ids: Vec<ArcId> = (0..g.arc_count() as u32)
        .filter(|&id| alive[id as usize])
        .collect();
    start_ids.sort_unstable();

    let mut visited = vec![false; n];
    let mut path: Vec<ArcId> = Vec::with_capacity(target_len);
    for &start in &start_ids {
        let a = &g.arcs()[start as usize];
        visited[a.tail as usize] = true;
        visited[a.head as usize] = true;
        path.push(start);
        if dfs_extend(g, alive, layers, target_len, start, a.tail, a.head, a.weight, &mut visited, &mut path) {
            let found = path.clone();
            return Some(Cycle::from_arcs(g, found));
        }
        path.pop();
        visited[a.tail as usize] = false;
        visited[a.head as usize] = false;
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn dfs_extend(
    g: &WeightedDigraph,
    alive: &[bool],
    layers: &[MinPlusMatrix],
    target_len: usize,
    min_id: ArcId,
    origin: VertexId,
    current: VertexId,
    weight_so_far: i64,
    visited: &mut Vec<bool>,
    path: &mut Vec<ArcId>,
) -> bool {
    let remaining = target_len - path.len();
    if remaining == 0 {
        return current == origin && weight_so_far < 0;
    }
    // Even the cheapest completion cannot go negative: prune.
    let best_rest = layers[remaining - 1].get(current as usize, origin as usize);
    if best_rest >= INF || weight_so_far + best_rest >= 0 {
        return false;
    }
    let mut out: Vec<ArcId> = g
        .out_arcs(current)
        .iter()
        .copied()
        .filter(|&id| alive[id as usize] && id > min_id)
        .collect();
    out.sort_unstable();
    for id in out {
        let a = &g.arcs()[id as usize];
        let closing = remaining == 1;
        if closing {
            if a.head != origin {
                continue;
            }
        } else if visited[a.head as usize] {
            continue;
        }
        if !closing {
            visited[a.head as usize] = true;
        }
        path.push(id);
        if dfs_extend(
            g,
            alive,
            layers,
            target_len,
            min_id,
            origin,
            a.head,
            weight_so_far + a.weight,
            visited,
            path,
        ) {
            return true;
        }
        path.pop();
        if !closing {
            visited[a.head as usize] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, arcs: &[(u32, u32, i64)]) -> WeightedDigraph {
        WeightedDigraph::new(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn triangle_all_minus_one() {
        let g = graph(3, &[(0, 1, -1), (1, 2, -1), (2, 0, -1)]);
        let c = shortest_negative_cycle(&g).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.weight(), -3);
        assert_eq!(c.arc_ids(), &[0, 1, 2]);
    }

    #[test]
    fn length_minimality_beats_weight() {
        // 2-cycle of weight -1 next to a 3-cycle of weight -3.
        let g = graph(
            5,
            &[
                (0, 1, 0),
                (1, 0, -1),
                (2, 3, -1),
                (3, 4, -1),
                (4, 2, -1),
            ],
        );
        let c = shortest_negative_cycle(&g).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.arc_ids(), &[0, 1]);
    }

    #[test]
    fn dag_has_no_negative_cycle() {
        let g = graph(4, &[(0, 1, -5), (0, 2, 3), (1, 3, -7), (2, 3, -1)]);
        assert!(shortest_negative_cycle(&g).is_none());
        assert!(min_negative_cycle_length_by_squaring(&g).is_none());
    }

    #[test]
    fn zero_weight_cycle_is_not_negative() {
        let g = graph(2, &[(0, 1, 1), (1, 0, -1)]);
        assert!(shortest_negative_cycle(&g).is_none());
    }

    #[test]
    fn lexicographic_tie_break_between_parallel_arcs() {
        // Two negative 2-cycles through parallel arcs; the lex-smallest ids win.
        let g = graph(2, &[(0, 1, -1), (0, 1, -1), (1, 0, 0), (1, 0, 0)]);
        let c = shortest_negative_cycle(&g).unwrap();
        assert_eq!(c.arc_ids(), &[0, 2]);
    }

    #[test]
    fn squaring_route_reports_minimal_length() {
        let g = graph(
            5,
            &[
                (0, 1, 0),
                (1, 0, -1),
                (2, 3, -1),
                (3, 4, -1),
                (4, 2, -1),
            ],
        );
        assert_eq!(min_negative_cycle_length_by_squaring(&g), Some(2));
    }
}
