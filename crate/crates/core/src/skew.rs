//! Skew separators and the solver parameterized by the number of non-zero
//! arcs.
//!
//! A skew cut for ordered terminal families (X_1..X_p), (Y_1..Y_p) destroys
//! every X_i -> Y_j path with j <= i. The solver here guesses the non-zero
//! arcs of a solution, moves to the zero-weight propagation graph, and for
//! every ordered partition of the remaining non-zero endpoints solves one
//! skew-separator instance. Candidate answers are verified before being
//! returned.

use crate::graph::{verify_solution, ArcId, DeletionSet, VertexId, WeightedDigraph};
use crate::oracle::{brute_force_skew_cut, first_subset_where, is_skew_cut, OracleError};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkewError {
    MismatchedSides { sources: usize, sinks: usize },
    OverlappingTerminals { vertex: VertexId },
    VertexOutOfRange { vertex: VertexId },
    PartitionCapExceeded { items: usize, cap: usize, count: u128 },
}

impl fmt::Display for SkewError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkewError::MismatchedSides { sources, sinks } => {
                write!(f, "{sources} source sets but {sinks} sink sets")
            }
            SkewError::OverlappingTerminals { vertex } => {
                write!(f, "terminal sets overlap at vertex {vertex}")
            }
            SkewError::VertexOutOfRange { vertex } => {
                write!(f, "terminal vertex {vertex} outside the graph")
            }
            SkewError::PartitionCapExceeded { items, cap, count } => {
                write!(
                    f,
                    "{items} items exceed the ordered-partition cap {cap} \
                     ({count} ordered partitions would be enumerated)"
                )
            }
        }
    }
}

impl std::error::Error for SkewError {}

impl From<OracleError> for SkewError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::OverlappingTerminals { vertex } => {
                SkewError::OverlappingTerminals { vertex }
            }
            OracleError::MismatchedSides { sources, sinks } => {
                SkewError::MismatchedSides { sources, sinks }
            }
            other => panic!("unexpected oracle error: {other}"),
        }
    }
}

/// Skew-separator instance. Arc weights of `graph` are ignored.
#[derive(Debug, Clone)]
pub struct SkewInstance {
    pub graph: WeightedDigraph,
    pub sources: Vec<Vec<VertexId>>,
    pub sinks: Vec<Vec<VertexId>>,
    pub budget: usize,
}

impl SkewInstance {
    pub fn validate(&self) -> Result<(), SkewError> {
        if self.sources.len() != self.sinks.len() {
            return Err(SkewError::MismatchedSides {
                sources: self.sources.len(),
                sinks: self.sinks.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for set in self.sources.iter().chain(self.sinks.iter()) {
            for &v in set {
                if v as usize >= self.graph.vertex_count() {
                    return Err(SkewError::VertexOutOfRange { vertex: v });
                }
                if !seen.insert(v) {
                    return Err(SkewError::OverlappingTerminals { vertex: v });
                }
            }
        }
        Ok(())
    }
}

/// The zero-weight propagation graph: non-zero arcs removed, each of their
/// endpoints split into an out-copy and an in-copy.
#[derive(Debug, Clone)]
pub struct ZeroPropagationGraph {
    /// All arcs have weight 0.
    pub graph: WeightedDigraph,
    /// Original vertex -> its out-copy, for split vertices only.
    pub plus_of: BTreeMap<VertexId, VertexId>,
    /// Original vertex -> its in-copy, for split vertices only.
    pub minus_of: BTreeMap<VertexId, VertexId>,
    /// New arc id -> original id in the zero-arc set; a bijection onto A0.
    pub arc_back_map: Vec<ArcId>,
}

pub fn build_zero_propagation_graph(g: &WeightedDigraph) -> ZeroPropagationGraph {
    // Z: endpoints of non-zero arcs.
    let mut split = vec![false; g.vertex_count()];
    for a in g.arcs() {
        if a.weight != 0 {
            split[a.tail as usize] = true;
            split[a.head as usize] = true;
        }
    }
    let mut plus_of = BTreeMap::new();
    let mut minus_of = BTreeMap::new();
    let mut plain = vec![0u32; g.vertex_count()];
    let mut next: u32 = 0;
    for v in 0..g.vertex_count() as u32 {
        if split[v as usize] {
            plus_of.insert(v, next);
            minus_of.insert(v, next + 1);
            next += 2;
        } else {
            plain[v as usize] = next;
            next += 1;
        }
    }
    let mut arcs = Vec::new();
    let mut arc_back_map = Vec::new();
    for a in g.arcs() {
        if a.weight != 0 {
            continue;
        }
        let tail = if split[a.tail as usize] { plus_of[&a.tail] } else { plain[a.tail as usize] };
        let head = if split[a.head as usize] { minus_of[&a.head] } else { plain[a.head as usize] };
        arcs.push((tail, head, 0));
        arc_back_map.push(a.id);
    }
    let graph = WeightedDigraph::new(next as usize, arcs)
        .expect("propagation graph of a loopless graph is loopless");
    ZeroPropagationGraph { graph, plus_of, minus_of, arc_back_map }
}

#[derive(Debug, Clone, Default)]
pub struct SkewConfig {
    /// Route every call to the exhaustive reference solver.
    pub use_oracle: bool,
}

/// A skew cut of size at most `budget`, or `None` when no such cut exists.
/// Branch and bound: any cut must hit a shortest forbidden path, and a
/// max-flow bound per source family prunes hopeless branches. The result is
/// re-checked for the skew property before being returned.
pub fn solve_skew_separator(inst: &SkewInstance) -> Result<Option<DeletionSet>, SkewError> {
    solve_skew_separator_with(inst, &SkewConfig::default())
}

pub fn solve_skew_separator_with(
    inst: &SkewInstance,
    config: &SkewConfig,
) -> Result<Option<DeletionSet>, SkewError> {
    inst.validate()?;
    if config.use_oracle {
        return Ok(brute_force_skew_cut(&inst.graph, &inst.sources, &inst.sinks, inst.budget)?);
    }
    let g = &inst.graph;
    let mut alive = g.full_mask();
    let mut chosen: Vec<ArcId> = Vec::new();
    let result = skew_branch(g, &mut alive, &mut chosen, inst.budget, &inst.sources, &inst.sinks);
    if let Some(ref s) = result {
        let check = g.mask_without(s);
        assert!(
            is_skew_cut(g, &check, &inst.sources, &inst.sinks),
            "skew solver produced a non-cut"
        );
    }
    Ok(result)
}

fn skew_branch(
    g: &WeightedDigraph,
    alive: &mut Vec<bool>,
    chosen: &mut Vec<ArcId>,
    budget: usize,
    sources: &[Vec<VertexId>],
    sinks: &[Vec<VertexId>],
) -> Option<DeletionSet> {
    let path = match shortest_forbidden_path(g, alive, sources, sinks) {
        None => return Some(DeletionSet::from_ids(chosen.iter().copied())),
        Some(p) => p,
    };
    if budget == 0 || flow_lower_bound(g, alive, sources, sinks) > budget {
        return None;
    }
    let mut candidates = path;
    candidates.sort_unstable();
    for id in candidates {
        alive[id as usize] = false;
        chosen.push(id);
        let found = skew_branch(g, alive, chosen, budget - 1, sources, sinks);
        chosen.pop();
        alive[id as usize] = true;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Shortest path realizing any forbidden pair, as its arc id sequence.
/// Ties resolved by the smaller source family index; BFS explores arcs in
/// ascending id so the result is deterministic.
fn shortest_forbidden_path(
    g: &WeightedDigraph,
    alive: &[bool],
    sources: &[Vec<VertexId>],
    sinks: &[Vec<VertexId>],
) -> Option<Vec<ArcId>> {
    let mut best: Option<(usize, usize, Vec<ArcId>)> = None;
    for (i, xs) in sources.iter().enumerate() {
        if xs.is_empty() {
            continue;
        }
        let mut allowed_sinks = vec![false; g.vertex_count()];
        let mut any = false;
        for sink in sinks.iter().take(i + 1) {
            for &y in sink {
                allowed_sinks[y as usize] = true;
                any = true;
            }
        }
        if !any {
            continue;
        }
        if let Some(path) = bfs_path(g, alive, xs, &allowed_sinks) {
            let key = (path.len(), i);
            if best.as_ref().is_none_or(|(l, bi, _)| key < (*l, *bi)) {
                best = Some((path.len(), i, path));
            }
        }
    }
    best.map(|(_, _, p)| p)
}

fn bfs_path(
    g: &WeightedDigraph,
    alive: &[bool],
    starts: &[VertexId],
    targets: &[bool],
) -> Option<Vec<ArcId>> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<ArcId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut sorted_starts = starts.to_vec();
    sorted_starts.sort_unstable();
    for &s in &sorted_starts {
        if !seen[s as usize] {
            seen[s as usize] = true;
            queue.push_back(s);
        }
        if targets[s as usize] {
            return Some(Vec::new());
        }
    }
    while let Some(v) = queue.pop_front() {
        let mut out: Vec<ArcId> = g.out_arcs(v).to_vec();
        out.sort_unstable();
        for id in out {
            if !alive[id as usize] {
                continue;
            }
            let head = g.arcs()[id as usize].head;
            if seen[head as usize] {
                continue;
            }
            seen[head as usize] = true;
            parent[head as usize] = Some(id);
            if targets[head as usize] {
                let mut path = Vec::new();
                let mut cur = head;
                while let Some(aid) = parent[cur as usize] {
                    path.push(aid);
                    cur = g.arcs()[aid as usize].tail;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(head);
        }
    }
    None
}

/// Max over source families i of the minimum arc cut separating X_i from
/// Y_1 u ... u Y_i. Any skew cut contains such a cut for every i.
fn flow_lower_bound(
    g: &WeightedDigraph,
    alive: &[bool],
    sources: &[Vec<VertexId>],
    sinks: &[Vec<VertexId>],
) -> usize {
    let mut bound = 0;
    for (i, xs) in sources.iter().enumerate() {
        if xs.is_empty() {
            continue;
        }
        let mut ys: Vec<VertexId> = Vec::new();
        for sink in sinks.iter().take(i + 1) {
            ys.extend_from_slice(sink);
        }
        if ys.is_empty() {
            continue;
        }
        bound = bound.max(min_arc_cut(g, alive, xs, &ys, g.arc_count()));
    }
    bound
}

/// Value of a minimum arc cut between vertex sets, capped at `cutoff`.
/// Unit capacity per arc; Edmonds-Karp.
fn min_arc_cut(
    g: &WeightedDigraph,
    alive: &[bool],
    sources: &[VertexId],
    sinks: &[VertexId],
    cutoff: usize,
) -> usize {
    #[derive(Clone, Copy)]
    struct Edge {
        to: u32,
        cap: u32,
        rev: u32,
    }
    let n = g.vertex_count() + 2;
    let (src, dst) = ((n - 2) as u32, (n - 1) as u32);
    let mut adj: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let add_edge = |adj: &mut Vec<Vec<Edge>>, from: u32, to: u32, cap: u32| {
        let rev_from = adj[to as usize].len() as u32;
        let rev_to = adj[from as usize].len() as u32;
        adj[from as usize].push(Edge { to, cap, rev: rev_from });
        adj[to as usize].push(Edge { to: from, cap: 0, rev: rev_to });
    };
    for a in g.arcs() {
        if alive[a.id as usize] {
            add_edge(&mut adj, a.tail, a.head, 1);
        }
    }
    let big = g.arc_count() as u32 + 1;
    let source_set: BTreeSet<u32> = sources.iter().copied().collect();
    for &s in &source_set {
        add_edge(&mut adj, src, s, big);
    }
    let sink_set: BTreeSet<u32> = sinks.iter().copied().collect();
    for &t in &sink_set {
        if source_set.contains(&t) {
            // Overlap means no finite cut; callers treat it as unbounded.
            return cutoff + 1;
        }
        add_edge(&mut adj, t, dst, big);
    }
    let mut flow = 0usize;
    while flow <= cutoff {
        // BFS for an augmenting path.
        let mut prev: Vec<Option<(u32, u32)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[src as usize] = true;
        queue.push_back(src);
        'bfs: while let Some(v) = queue.pop_front() {
            for (ei, e) in adj[v as usize].iter().enumerate() {
                if e.cap == 0 || seen[e.to as usize] {
                    continue;
                }
                seen[e.to as usize] = true;
                prev[e.to as usize] = Some((v, ei as u32));
                if e.to == dst {
                    break 'bfs;
                }
                queue.push_back(e.to);
            }
        }
        if !seen[dst as usize] {
            break;
        }
        let mut cur = dst;
        while let Some((v, ei)) = prev[cur as usize] {
            let rev = adj[v as usize][ei as usize].rev;
            adj[v as usize][ei as usize].cap -= 1;
            let to = adj[v as usize][ei as usize].to;
            adj[to as usize][rev as usize].cap += 1;
            cur = v;
        }
        flow += 1;
    }
    flow
}

/// Number of ordered partitions of an n-set (ordered Bell / Fubini number).
pub fn ordered_partition_count(n: usize) -> u128 {
    // a(n) = sum_{k=1..n} C(n, k) a(n - k)
    let mut binom = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + binom[i - 1].get(j).copied().unwrap_or(0);
        }
    }
    let mut a = vec![0u128; n + 1];
    a[0] = 1;
    for i in 1..=n {
        for k in 1..=i {
            a[i] += binom[i][k] * a[i - k];
        }
    }
    a[n]
}

pub const ORDERED_PARTITION_CAP: usize = 10;

/// Every ordered partition of `items`, each exactly once, in a fixed order:
/// by block count, then lexicographically by the block-index assignment of
/// the items.
pub fn enumerate_ordered_partitions<T: Clone>(
    items: &[T],
    cap: usize,
) -> Result<Vec<Vec<Vec<T>>>, SkewError> {
    if items.len() > cap {
        return Err(SkewError::PartitionCapExceeded {
            items: items.len(),
            cap,
            count: ordered_partition_count(items.len()),
        });
    }
    let mut out = Vec::new();
    for assignment in level_assignments(items.len()) {
        let t = assignment.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut blocks: Vec<Vec<T>> = vec![Vec::new(); t];
        for (i, &b) in assignment.iter().enumerate() {
            blocks[b as usize].push(items[i].clone());
        }
        out.push(blocks);
    }
    Ok(out)
}

/// Surjective maps from n positions onto an initial segment of block
/// indices, ordered by block count then lexicographically. n = 0 yields the
/// single empty assignment.
pub fn level_assignments(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for t in 1..=n {
        let mut cur = vec![0u8; n];
        assign_rec(0, n, t as u8, 0, &mut cur, &mut out);
    }
    out
}

fn assign_rec(pos: usize, n: usize, t: u8, used_mask: u16, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if pos == n {
        if used_mask == (1u16 << t) - 1 {
            out.push(cur.clone());
        }
        return;
    }
    let remaining = n - pos;
    for b in 0..t {
        let mask = used_mask | (1u16 << b);
        // Blocks still missing an element must fit in the remaining slots.
        let missing = t as usize - mask.count_ones() as usize;
        if missing > remaining - 1 {
            continue;
        }
        cur[pos] = b;
        assign_rec(pos + 1, n, t, mask, cur, out);
    }
}

/// Solver for the number-of-non-zero-arcs parameterization: guesses the
/// non-zero part of a solution, then solves skew-separator instances on the
/// zero-weight propagation graph for every ordered partition of the
/// remaining non-zero endpoints. Every candidate is verified; the first
/// verified answer in enumeration order is returned.
pub fn solve_nonzero_count(g: &WeightedDigraph, k: usize) -> Option<DeletionSet> {
    solve_nonzero_count_with(g, k, &SkewConfig::default(), ORDERED_PARTITION_CAP)
        .expect("default cap exceeded; use solve_nonzero_count_with")
}

pub fn solve_nonzero_count_with(
    g: &WeightedDigraph,
    k: usize,
    config: &SkewConfig,
    partition_cap: usize,
) -> Result<Option<DeletionSet>, SkewError> {
    let negative = g.negative_arcs();
    if negative.len() <= k {
        return Ok(Some(DeletionSet::from_ids(negative)));
    }
    let nonzero = g.nonzero_arcs();
    let mut result: Option<DeletionSet> = None;
    let mut cap_error: Option<SkewError> = None;
    first_subset_where(nonzero.len(), k, |subset| {
        let removed: Vec<ArcId> = subset.iter().map(|&i| nonzero[i as usize]).collect();
        let mut alive = g.full_mask();
        for &id in &removed {
            alive[id as usize] = false;
        }
        let (reduced, back) = g.restrict_to(&alive);
        let prop = build_zero_propagation_graph(&reduced);
        // Endpoints of the remaining non-zero arcs, ascending.
        let z_prime: Vec<VertexId> = prop.plus_of.keys().copied().collect();
        let partitions = match enumerate_ordered_partitions(&z_prime, partition_cap) {
            Ok(p) => p,
            Err(e) => {
                cap_error = Some(e);
                return Some(());
            }
        };
        let budget = k - removed.len();
        for partition in partitions {
            let mut sources: Vec<Vec<VertexId>> = partition
                .iter()
                .map(|block| block.iter().map(|z| prop.plus_of[z]).collect())
                .collect();
            sources.push(Vec::new());
            let mut sinks: Vec<Vec<VertexId>> = vec![Vec::new()];
            sinks.extend(
                partition
                    .iter()
                    .map(|block| block.iter().map(|z| prop.minus_of[z]).collect::<Vec<_>>()),
            );
            let inst = SkewInstance {
                graph: prop.graph.clone(),
                sources,
                sinks,
                budget,
            };
            let cut = match solve_skew_separator_with(&inst, config) {
                Ok(c) => c,
                Err(e) => {
                    cap_error = Some(e);
                    return Some(());
                }
            };
            if let Some(cut) = cut {
                let mapped: DeletionSet = cut
                    .iter()
                    .map(|new_id| back[prop.arc_back_map[new_id as usize] as usize])
                    .collect();
                let full: DeletionSet =
                    mapped.iter().chain(removed.iter().copied()).collect();
                if verify_solution(g, &full, k).is_ok_and(|r| r.valid()) {
                    result = Some(full);
                    return Some(());
                }
            }
        }
        None
    });
    match cap_error {
        Some(e) => Err(e),
        None => Ok(result),
    }
}
