//! Weighted directed multigraph with integer arc weights.
//!
//! Graphs are finite and loopless. Parallel arcs and antiparallel pairs are
//! allowed and distinguished by their arc ids, which are dense in `0..m` and
//! assigned in insertion order. All values are immutable after construction,
//! so they can be shared freely across threads.

use std::collections::BTreeSet;
use std::fmt;

pub type VertexId = u32;
pub type ArcId = u32;
pub type Weight = i64;

/// A single weighted arc. `tail -> head` with weight `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    Loop { arc: usize, vertex: VertexId },
    VertexOutOfRange { arc: usize, vertex: u64 },
    UnknownArcId(ArcId),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Loop { arc, vertex } => {
                write!(f, "arc {arc} is a loop at vertex {vertex}; loops are not allowed")
            }
            GraphError::VertexOutOfRange { arc, vertex } => {
                write!(f, "arc {arc} references vertex {vertex} outside the vertex range")
            }
            GraphError::UnknownArcId(id) => write!(f, "unknown arc id {id}"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Finite loopless directed multigraph with integer arc weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    vertex_count: usize,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

impl WeightedDigraph {
    /// Builds a graph from `(tail, head, weight)` triples. Arc ids are
    /// assigned densely in input order.
    pub fn new(
        vertex_count: usize,
        arcs: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Result<Self, GraphError> {
        let mut out_arcs = vec![Vec::new(); vertex_count];
        let mut in_arcs = vec![Vec::new(); vertex_count];
        let mut stored = Vec::new();
        for (idx, (tail, head, weight)) in arcs.into_iter().enumerate() {
            for v in [tail, head] {
                if (v as usize) >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { arc: idx, vertex: v as u64 });
                }
            }
            if tail == head {
                return Err(GraphError::Loop { arc: idx, vertex: tail });
            }
            let id = stored.len() as ArcId;
            out_arcs[tail as usize].push(id);
            in_arcs[head as usize].push(id);
            stored.push(Arc { id, tail, head, weight });
        }
        Ok(WeightedDigraph { vertex_count, arcs: stored, out_arcs, in_arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Result<&Arc, GraphError> {
        self.arcs.get(id as usize).ok_or(GraphError::UnknownArcId(id))
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v as usize]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v as usize]
    }

    /// Arc ids with negative weight (the set `A-`).
    pub fn negative_arcs(&self) -> Vec<ArcId> {
        self.arcs.iter().filter(|a| a.weight < 0).map(|a| a.id).collect()
    }

    /// Arc ids with zero weight (the set `A0`).
    pub fn zero_arcs(&self) -> Vec<ArcId> {
        self.arcs.iter().filter(|a| a.weight == 0).map(|a| a.id).collect()
    }

    /// Arc ids with positive weight (the set `A+`).
    pub fn positive_arcs(&self) -> Vec<ArcId> {
        self.arcs.iter().filter(|a| a.weight > 0).map(|a| a.id).collect()
    }

    /// Arc ids with non-zero weight.
    pub fn nonzero_arcs(&self) -> Vec<ArcId> {
        self.arcs.iter().filter(|a| a.weight != 0).map(|a| a.id).collect()
    }

    /// Number of negative-weight arcs (`w-`).
    pub fn w_minus(&self) -> usize {
        self.arcs.iter().filter(|a| a.weight < 0).count()
    }

    /// Number of positive-weight arcs (`w+`).
    pub fn w_plus(&self) -> usize {
        self.arcs.iter().filter(|a| a.weight > 0).count()
    }

    /// All arcs alive.
    pub fn full_mask(&self) -> Vec<bool> {
        vec![true; self.arcs.len()]
    }

    /// Mask with the arcs in `removed` dead.
    pub fn mask_without(&self, removed: &DeletionSet) -> Vec<bool> {
        let mut mask = self.full_mask();
        for id in removed.iter() {
            if (id as usize) < mask.len() {
                mask[id as usize] = false;
            }
        }
        mask
    }

    /// Edges of the underlying undirected simple graph, as sorted pairs
    /// `(u, v)` with `u < v`, deduplicated.
    pub fn underlying_undirected_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut set = BTreeSet::new();
        for a in &self.arcs {
            let (u, v) = if a.tail < a.head { (a.tail, a.head) } else { (a.head, a.tail) };
            set.insert((u, v));
        }
        set.into_iter().collect()
    }

    /// New graph containing only the masked-alive arcs, with fresh dense ids.
    /// Returns the graph and the new-id -> old-id map.
    pub fn restrict_to(&self, alive: &[bool]) -> (WeightedDigraph, Vec<ArcId>) {
        let mut back = Vec::new();
        let triples: Vec<_> = self
            .arcs
            .iter()
            .filter(|a| alive[a.id as usize])
            .map(|a| {
                back.push(a.id);
                (a.tail, a.head, a.weight)
            })
            .collect();
        let g = WeightedDigraph::new(self.vertex_count, triples)
            .expect("restriction of a valid graph is valid");
        (g, back)
    }
}

/// A set of arc ids proposed for deletion (equivalently, constraint rows).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeletionSet {
    ids: BTreeSet<ArcId>,
}

impl DeletionSet {
    pub fn new() -> Self {
        DeletionSet { ids: BTreeSet::new() }
    }

    pub fn from_ids(ids: impl IntoIterator<Item = ArcId>) -> Self {
        DeletionSet { ids: ids.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: ArcId) -> bool {
        self.ids.contains(&id)
    }

    pub fn insert(&mut self, id: ArcId) {
        self.ids.insert(id);
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.ids.iter().copied()
    }

    pub fn union(&self, other: &DeletionSet) -> DeletionSet {
        DeletionSet { ids: self.ids.union(&other.ids).copied().collect() }
    }
}

impl fmt::Display for DeletionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.ids.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<ArcId> for DeletionSet {
    fn from_iter<T: IntoIterator<Item = ArcId>>(iter: T) -> Self {
        DeletionSet::from_ids(iter)
    }
}

/// Integer vertex labels certifying the absence of negative cycles:
/// `pi(u) - pi(v) + w(a) >= 0` for every arc `a = (u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    values: Vec<i64>,
}

impl Potential {
    pub fn new(values: Vec<i64>) -> Self {
        Potential { values }
    }

    pub fn value(&self, v: VertexId) -> i64 {
        self.values[v as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Checks the potential inequality on every alive arc.
    pub fn certifies(&self, g: &WeightedDigraph, alive: &[bool]) -> bool {
        g.arcs().iter().all(|a| {
            !alive[a.id as usize]
                || self.values[a.tail as usize] - self.values[a.head as usize] + a.weight >= 0
        })
    }
}

/// Outcome of checking a proposed deletion set against an instance.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub size_ok: bool,
    pub acyclic_of_negatives: bool,
    pub certificate: Option<Potential>,
}

impl VerifyReport {
    pub fn valid(&self) -> bool {
        self.size_ok && self.acyclic_of_negatives
    }
}

/// Feasible potential via shortest paths from a virtual source joined to
/// every vertex by a weight-0 arc (Gallai's construction). Returns `None`
/// exactly when the graph has a negative cycle.
pub fn build_feasible_potential(g: &WeightedDigraph) -> Option<Potential> {
    build_feasible_potential_in(g, &g.full_mask())
}

pub(crate) fn build_feasible_potential_in(g: &WeightedDigraph, alive: &[bool]) -> Option<Potential> {
    let n = g.vertex_count();
    // Distances start at 0, which is equivalent to having relaxed the
    // virtual source arcs already.
    let mut dist = vec![0i64; n];
    let mut changed = true;
    let mut round = 0;
    while changed && round < n {
        changed = false;
        for a in g.arcs() {
            if !alive[a.id as usize] {
                continue;
            }
            let cand = dist[a.tail as usize] + a.weight;
            if cand < dist[a.head as usize] {
                dist[a.head as usize] = cand;
                changed = true;
            }
        }
        round += 1;
    }
    if changed {
        // Still relaxing after n rounds: some negative cycle is reachable.
        return None;
    }
    Some(Potential::new(dist))
}

/// Cheap negative-cycle existence test (Bellman-Ford from a virtual source).
pub fn has_negative_cycle(g: &WeightedDigraph) -> bool {
    build_feasible_potential(g).is_none()
}

pub(crate) fn has_negative_cycle_in(g: &WeightedDigraph, alive: &[bool]) -> bool {
    build_feasible_potential_in(g, alive).is_none()
}

/// Checks a proposed solution: size within budget and no negative cycle left.
/// The certificate is the feasible potential of the residual graph when one
/// exists.
pub fn verify_solution(
    g: &WeightedDigraph,
    s: &DeletionSet,
    k: usize,
) -> Result<VerifyReport, GraphError> {
    for id in s.iter() {
        g.arc(id)?;
    }
    let alive = g.mask_without(s);
    let certificate = build_feasible_potential_in(g, &alive);
    Ok(VerifyReport {
        size_ok: s.len() <= k,
        acyclic_of_negatives: certificate.is_some(),
        certificate,
    })
}

/// Strongly connected components, ordered by their minimum member vertex.
/// Members of each component are sorted ascending.
pub fn strong_components(g: &WeightedDigraph) -> Vec<Vec<VertexId>> {
    let mut comps = strong_components_reverse_topological(g, &g.full_mask());
    for c in comps.iter_mut() {
        c.sort_unstable();
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Tarjan's algorithm, iterative. Components are emitted in reverse
/// topological order of the condensation.
pub(crate) fn strong_components_reverse_topological(
    g: &WeightedDigraph,
    alive: &[bool],
) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comps = Vec::new();

    struct Frame {
        v: u32,
        arc_pos: usize,
    }

    for start in 0..n as u32 {
        if index[start as usize] != UNSET {
            continue;
        }
        let mut call: Vec<Frame> = vec![Frame { v: start, arc_pos: 0 }];
        index[start as usize] = next_index;
        lowlink[start as usize] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start as usize] = true;

        while let Some(frame) = call.last_mut() {
            let v = frame.v;
            let out = g.out_arcs(v);
            if frame.arc_pos < out.len() {
                let aid = out[frame.arc_pos];
                frame.arc_pos += 1;
                if !alive[aid as usize] {
                    continue;
                }
                let w = g.arcs()[aid as usize].head;
                if index[w as usize] == UNSET {
                    index[w as usize] = next_index;
                    lowlink[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push(Frame { v: w, arc_pos: 0 });
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    lowlink[parent.v as usize] =
                        lowlink[parent.v as usize].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == index[v as usize] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("component stack underflow");
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}
