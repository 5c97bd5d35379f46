//! Instance generators with analytically known answers.
//!
//! Each family is a constructive reduction whose source problem is easy to
//! decide by enumeration at generation size, so every emitted instance
//! carries metadata with the intended answer. Instances are serialized in
//! the graph text format plus a `.meta.json` sidecar.

use crate::decomp::TreeDecomposition;
use crate::graph::{ArcId, VertexId, WeightedDigraph};
use crate::io::render_graph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    OddPartitionSum { total: u64 },
    ZeroPartitionNumber,
    ImproperColoring { u: VertexId, v: VertexId },
    UnknownVertex(VertexId),
    UncoveredVertex(VertexId),
    OverlappingClasses(VertexId),
    CyclicInput,
    SourceEqualsTarget,
    ForeignInstance { expected_family: &'static str, found: String },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::OddPartitionSum { total } => write!(
                f,
                "numbers sum to {total}, which is odd; the construction needs an even total \
                 (an odd total is trivially a no-instance)"
            ),
            GenError::ZeroPartitionNumber => write!(f, "numbers must be positive"),
            GenError::ImproperColoring { u, v } => {
                write!(f, "edge {{{u}, {v}}} lies inside one color class")
            }
            GenError::UnknownVertex(v) => write!(f, "vertex {v} not declared in any class"),
            GenError::UncoveredVertex(v) => write!(f, "vertex {v} belongs to no class"),
            GenError::OverlappingClasses(v) => write!(f, "vertex {v} belongs to two classes"),
            GenError::CyclicInput => write!(f, "input digraph must be acyclic"),
            GenError::SourceEqualsTarget => write!(f, "source and target must differ"),
            GenError::ForeignInstance { expected_family, found } => {
                write!(f, "instance of family `{found}` where `{expected_family}` was expected")
            }
        }
    }
}

impl std::error::Error for GenError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub family: String,
    pub params: serde_json::Value,
    pub expected: Expected,
    pub budget: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub graph: WeightedDigraph,
    pub budget: usize,
    pub meta: InstanceMeta,
}

impl GeneratedInstance {
    /// Graph text plus sidecar JSON.
    pub fn render(&self) -> (String, String) {
        let text = render_graph(&self.graph);
        let meta = serde_json::to_string_pretty(&self.meta).expect("meta serializes");
        (text, meta)
    }
}

fn has_any_cycle(g: &WeightedDigraph, alive: &[bool]) -> bool {
    // Iterative DFS with colors.
    let n = g.vertex_count();
    let mut color = vec![0u8; n]; // 0 white, 1 on stack, 2 done
    for start in 0..n as u32 {
        if color[start as usize] != 0 {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
        color[start as usize] = 1;
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            let out = g.out_arcs(v);
            if *pos < out.len() {
                let aid = out[*pos];
                *pos += 1;
                if !alive[aid as usize] {
                    continue;
                }
                let w = g.arcs()[aid as usize].head;
                match color[w as usize] {
                    0 => {
                        color[w as usize] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                color[v as usize] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Minimum feedback arc set size by plain enumeration; `None` above `k_max`.
pub fn min_feedback_arc_set_size(g: &WeightedDigraph, k_max: usize) -> Option<usize> {
    let mut alive = g.full_mask();
    crate::oracle::first_subset_where(g.arc_count(), k_max, |subset| {
        for &id in subset {
            alive[id as usize] = false;
        }
        let acyclic = !has_any_cycle(g, &alive);
        for &id in subset {
            alive[id as usize] = true;
        }
        acyclic.then_some(subset.len())
    })
}

/// Feedback-arc-set instance: same digraph with every weight forced to -1.
/// Deleting arcs kills all cycles exactly when it kills all negative ones.
pub fn gen_from_dfas(g: &WeightedDigraph, k: usize) -> GeneratedInstance {
    let arcs: Vec<(u32, u32, i64)> = g.arcs().iter().map(|a| (a.tail, a.head, -1)).collect();
    let graph = WeightedDigraph::new(g.vertex_count(), arcs).expect("same shape");
    let expected = if g.arc_count() <= 18 {
        match min_feedback_arc_set_size(g, k) {
            Some(_) => Expected::Yes,
            None => Expected::No,
        }
    } else {
        Expected::Unknown
    };
    let meta = InstanceMeta {
        family: "dfas".into(),
        params: serde_json::json!({ "n": g.vertex_count(), "m": g.arc_count(), "k": k }),
        expected,
        budget: k,
    };
    GeneratedInstance { graph, budget: k, meta }
}

/// Per-number gadget chain encoding a Partition instance; one positive arc
/// closes the chain with weight A/2, budget n. Solvable within the budget
/// exactly when some subset of the numbers sums to A/2.
pub fn gen_partition_gadget(numbers: &[u64]) -> Result<GeneratedInstance, GenError> {
    if numbers.iter().any(|&a| a == 0) {
        return Err(GenError::ZeroPartitionNumber);
    }
    let total: u64 = numbers.iter().sum();
    if total % 2 != 0 {
        return Err(GenError::OddPartitionSum { total });
    }
    let n = numbers.len();
    let layout = PartitionLayout::new(n);
    let mut arcs: Vec<(u32, u32, i64)> = Vec::new();
    for (i, &a) in numbers.iter().enumerate() {
        for j in 0..2 {
            arcs.push((layout.junction(i, j), layout.junction(i + 1, j), 0));
            arcs.push((layout.junction(i, j), layout.x(i, j), 0));
            arcs.push((layout.x(i, j), layout.y(i, j), -(a as i64)));
            arcs.push((layout.y(i, j), layout.junction(i + 1, j), 0));
        }
        arcs.push((layout.y(i, 0), layout.x(i, 1), 0));
        arcs.push((layout.y(i, 1), layout.x(i, 0), 0));
    }
    arcs.push((layout.s, layout.junction(0, 0), 0));
    arcs.push((layout.s, layout.junction(0, 1), 0));
    arcs.push((layout.junction(n, 0), layout.t, 0));
    arcs.push((layout.junction(n, 1), layout.t, 0));
    arcs.push((layout.t, layout.s, (total / 2) as i64));
    let graph = WeightedDigraph::new(layout.vertex_count, arcs).expect("gadget is loopless");
    let expected = if subset_sum_hits(numbers, total / 2) { Expected::Yes } else { Expected::No };
    let meta = InstanceMeta {
        family: "partition".into(),
        params: serde_json::json!({ "numbers": numbers }),
        expected,
        budget: n,
    };
    Ok(GeneratedInstance { graph, budget: n, meta })
}

fn subset_sum_hits(numbers: &[u64], target: u64) -> bool {
    let mut sums: BTreeSet<u64> = BTreeSet::new();
    sums.insert(0);
    for &a in numbers {
        let shifted: Vec<u64> = sums.iter().map(|s| s + a).filter(|&s| s <= target).collect();
        sums.extend(shifted);
    }
    sums.contains(&target)
}

/// Vertex layout of the partition gadget chain; junction level i is the exit
/// of gadget i-1 and the entry of gadget i.
pub struct PartitionLayout {
    pub s: VertexId,
    pub t: VertexId,
    n: usize,
    pub vertex_count: usize,
}

impl PartitionLayout {
    pub fn new(n: usize) -> Self {
        PartitionLayout { s: 0, t: 1, n, vertex_count: 2 + 2 * (n + 1) + 4 * n }
    }

    /// j is 0 or 1 (the two parallel tracks).
    pub fn junction(&self, level: usize, j: usize) -> VertexId {
        debug_assert!(level <= self.n && j < 2);
        (2 + 2 * level + j) as VertexId
    }

    pub fn x(&self, gadget: usize, j: usize) -> VertexId {
        (2 + 2 * (self.n + 1) + 4 * gadget + 2 * j) as VertexId
    }

    pub fn y(&self, gadget: usize, j: usize) -> VertexId {
        self.x(gadget, j) + 1
    }
}

/// The explicit width-6 path decomposition of a partition-gadget instance.
/// Rejects instances of any other family or with a mismatching graph.
pub fn pathwidth_certificate_partition(
    inst: &GeneratedInstance,
) -> Result<TreeDecomposition, GenError> {
    if inst.meta.family != "partition" {
        return Err(GenError::ForeignInstance {
            expected_family: "partition",
            found: inst.meta.family.clone(),
        });
    }
    let numbers: Vec<u64> = serde_json::from_value(
        inst.meta.params.get("numbers").cloned().unwrap_or(serde_json::Value::Null),
    )
    .map_err(|_| GenError::ForeignInstance {
        expected_family: "partition",
        found: "partition (malformed params)".into(),
    })?;
    let regenerated = gen_partition_gadget(&numbers)?;
    if regenerated.graph != inst.graph {
        return Err(GenError::ForeignInstance {
            expected_family: "partition",
            found: "partition (graph differs from its parameters)".into(),
        });
    }
    let n = numbers.len();
    let layout = PartitionLayout::new(n);
    let mut bags: Vec<Vec<VertexId>> = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        bags.push(vec![
            layout.s,
            layout.junction(i, 0),
            layout.junction(i, 1),
            layout.x(i, 0),
            layout.x(i, 1),
            layout.y(i, 0),
            layout.y(i, 1),
        ]);
        bags.push(vec![
            layout.s,
            layout.junction(i, 0),
            layout.junction(i, 1),
            layout.y(i, 0),
            layout.y(i, 1),
            layout.junction(i + 1, 0),
            layout.junction(i + 1, 1),
        ]);
    }
    bags.push(vec![layout.s, layout.junction(n, 0), layout.junction(n, 1), layout.t]);
    for bag in bags.iter_mut() {
        bag.sort_unstable();
    }
    let edges = (0..bags.len() - 1).map(|i| (i, i + 1)).collect();
    Ok(TreeDecomposition { bags, edges })
}

/// Multicolored-clique gadget. `classes` partition `0..n`; `edges` join
/// distinct classes. Budget is k + k(k-1)/2 where k is the class count;
/// within that budget the instance is solvable exactly when the input has a
/// clique with one vertex per class.
///
/// Degenerate shapes are closed off deterministically: a one-element ring
/// uses its hub to close the forced negative cycle, and an empty edge set
/// between two classes (no clique possible) is padded with budget+1
/// arc-disjoint negative 2-cycles, an unconditionally unsolvable blocker.
pub fn gen_multicolored_clique_gadget(
    classes: &[Vec<VertexId>],
    edges: &[(VertexId, VertexId)],
) -> Result<GeneratedInstance, GenError> {
    let k = classes.len();
    let n: usize = classes.iter().map(|c| c.len()).sum();
    let mut class_of = vec![usize::MAX; n];
    let mut rank_of = vec![0u64; n]; // 1-based position inside its class
    for (ci, class) in classes.iter().enumerate() {
        for (pos, &v) in class.iter().enumerate() {
            if v as usize >= n {
                return Err(GenError::UnknownVertex(v));
            }
            if class_of[v as usize] != usize::MAX {
                return Err(GenError::OverlappingClasses(v));
            }
            class_of[v as usize] = ci;
            rank_of[v as usize] = pos as u64 + 1;
        }
    }
    if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(GenError::UncoveredVertex(v as VertexId));
    }
    let mut pair_edges: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); k * k];
    for &(u, v) in edges {
        for w in [u, v] {
            if w as usize >= n {
                return Err(GenError::UnknownVertex(w));
            }
        }
        let (cu, cv) = (class_of[u as usize], class_of[v as usize]);
        if cu == cv {
            return Err(GenError::ImproperColoring { u, v });
        }
        let (lo, hi) = if cu < cv { (cu, cv) } else { (cv, cu) };
        let entry = if cu < cv { (u, v) } else { (v, u) };
        if !pair_edges[lo * k + hi].contains(&entry) {
            pair_edges[lo * k + hi].push(entry);
        }
    }
    let budget = k + k * (k - 1) / 2;
    let nn = n as i64; // the weight unit of the construction

    let mut next_vertex: u32 = 0;
    let mut pair_hub = vec![0u32; k * k];
    let mut pair_members: Vec<Vec<u32>> = vec![Vec::new(); k * k];
    let (t_hub, n_aux, p_aux) = {
        let mut alloc = |count: usize| -> u32 {
            let base = next_vertex;
            next_vertex += count as u32;
            base
        };
        // Class members keep their input ids 0..n.
        alloc(n);
        let t_hub: Vec<u32> = (0..k).map(|_| alloc(1)).collect();
        let n_aux: Vec<u32> = (0..k).map(|_| alloc(1)).collect();
        let p_aux: Vec<u32> = (0..k).map(|_| alloc(1)).collect();
        // Per pair: hub, then edge vertices (or padding vertices when empty).
        for i in 0..k {
            for j in i + 1..k {
                let idx = i * k + j;
                pair_hub[idx] = alloc(1);
                let count =
                    if pair_edges[idx].is_empty() { budget + 1 } else { pair_edges[idx].len() };
                let base = alloc(count);
                pair_members[idx] = (base..base + count as u32).collect();
            }
        }
        (t_hub, n_aux, p_aux)
    };

    let mut arcs: Vec<(u32, u32, i64)> = Vec::new();
    // Vertex gadgets: ring of weight -n plus 0-arcs to the hub.
    for (ci, class) in classes.iter().enumerate() {
        for &v in class {
            arcs.push((v, t_hub[ci], 0));
        }
        if class.len() >= 2 {
            for r in 0..class.len() {
                arcs.push((class[r], class[(r + 1) % class.len()], -nn));
            }
        } else {
            arcs.push((t_hub[ci], class[0], -nn));
        }
    }
    // Edge gadgets, mirrored: 0-arcs out of the hub, ring of weight -n.
    for i in 0..k {
        for j in i + 1..k {
            let idx = i * k + j;
            let hub = pair_hub[idx];
            let members = &pair_members[idx];
            let count = pair_edges[idx].len();
            if count == 0 {
                for &u in members {
                    arcs.push((hub, u, -nn));
                    arcs.push((u, hub, -nn));
                }
            } else {
                for &e in members {
                    arcs.push((hub, e, 0));
                }
                if count >= 2 {
                    for r in 0..count {
                        arcs.push((members[r], members[(r + 1) % count], -nn));
                    }
                } else {
                    arcs.push((members[0], hub, -nn));
                }
            }
            // Connectors carry the only positive weights.
            arcs.push((t_hub[i], hub, nn * (classes[i].len() as i64 + count as i64 - 1)));
            arcs.push((t_hub[j], hub, nn * (classes[j].len() as i64 + count as i64 - 1)));
            // Consistency arcs for both endpoints of every edge.
            for (pos, &(u, v)) in pair_edges[idx].iter().enumerate() {
                let e = members[pos];
                let (fu, fv) = (rank_of[u as usize] as i64, rank_of[v as usize] as i64);
                arcs.push((e, n_aux[i], -(nn - fu)));
                arcs.push((e, p_aux[i], -fu));
                arcs.push((e, n_aux[j], -(nn - fv)));
                arcs.push((e, p_aux[j], -fv));
            }
        }
    }
    // Consistency arcs back into the classes.
    for (ci, class) in classes.iter().enumerate() {
        for &v in class {
            let fv = rank_of[v as usize] as i64;
            arcs.push((n_aux[ci], v, -fv));
            arcs.push((p_aux[ci], v, -(nn - fv)));
        }
    }
    let graph = WeightedDigraph::new(next_vertex as usize, arcs).expect("gadget is loopless");
    let expected = multicolored_clique_brute_force(classes, &pair_edges, k)
        .map(|yes| if yes { Expected::Yes } else { Expected::No })
        .unwrap_or(Expected::Unknown);
    let meta = InstanceMeta {
        family: "mcclique".into(),
        params: serde_json::json!({
            "classes": classes,
            "edges": edges.iter().map(|&(u, v)| vec![u, v]).collect::<Vec<_>>(),
        }),
        expected,
        budget,
    };
    Ok(GeneratedInstance { graph, budget, meta })
}

fn multicolored_clique_brute_force(
    classes: &[Vec<VertexId>],
    pair_edges: &[Vec<(VertexId, VertexId)>],
    k: usize,
) -> Option<bool> {
    let product: usize = classes.iter().map(|c| c.len()).try_fold(1usize, |acc, len| {
        acc.checked_mul(len).filter(|&p| p <= 1_000_000)
    })?;
    let _ = product;
    let mut choice = vec![0usize; k];
    loop {
        let ok = (0..k).all(|i| {
            (i + 1..k).all(|j| {
                pair_edges[i * k + j]
                    .contains(&(classes[i][choice[i]], classes[j][choice[j]]))
            })
        });
        if ok {
            return Some(true);
        }
        // Odometer step.
        let mut pos = 0;
        loop {
            if pos == k {
                return Some(false);
            }
            choice[pos] += 1;
            if choice[pos] < classes[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Replaces every arc of weight w != 0 by a path of |w| arcs of weight
/// sign(w); zero arcs are copied. Returns the new graph and the map from new
/// arc ids to the original arc they subdivide.
pub fn subdivide_to_unit_weights(g: &WeightedDigraph) -> (WeightedDigraph, Vec<ArcId>) {
    let mut arcs: Vec<(u32, u32, i64)> = Vec::new();
    let mut back: Vec<ArcId> = Vec::new();
    let mut next_vertex = g.vertex_count() as u32;
    for a in g.arcs() {
        let steps = a.weight.unsigned_abs().max(1) as usize;
        let unit = a.weight.signum();
        if steps == 1 {
            arcs.push((a.tail, a.head, a.weight));
            back.push(a.id);
            continue;
        }
        let mut current = a.tail;
        for step in 0..steps {
            let target = if step + 1 == steps {
                a.head
            } else {
                let v = next_vertex;
                next_vertex += 1;
                v
            };
            arcs.push((current, target, unit));
            back.push(a.id);
            current = target;
        }
    }
    let graph = WeightedDigraph::new(next_vertex as usize, arcs).expect("subdivision is loopless");
    (graph, back)
}

/// Bounded-edge-cut chain: k+1 parallel return routes, realized as disjoint
/// paths of l+1 arcs of weight -1 each, against the original DAG arcs of
/// weight +1. Negative cycles correspond exactly to s -> t paths of length
/// at most l, so the instance is solvable within k iff the cut instance is.
pub fn gen_bedc_chain(
    g: &WeightedDigraph,
    s: VertexId,
    t: VertexId,
    k: usize,
    l: usize,
) -> Result<GeneratedInstance, GenError> {
    if s as usize >= g.vertex_count() {
        return Err(GenError::UnknownVertex(s));
    }
    if t as usize >= g.vertex_count() {
        return Err(GenError::UnknownVertex(t));
    }
    if s == t {
        return Err(GenError::SourceEqualsTarget);
    }
    if has_any_cycle(g, &g.full_mask()) {
        return Err(GenError::CyclicInput);
    }
    let mut arcs: Vec<(u32, u32, i64)> = g.arcs().iter().map(|a| (a.tail, a.head, 1)).collect();
    let mut next_vertex = g.vertex_count() as u32;
    for _ in 0..=k {
        let mut current = t;
        for step in 0..=l {
            let target = if step == l {
                s
            } else {
                let v = next_vertex;
                next_vertex += 1;
                v
            };
            arcs.push((current, target, -1));
            current = target;
        }
    }
    let graph = WeightedDigraph::new(next_vertex as usize, arcs).expect("chain is loopless");
    let expected = if g.arc_count() <= 18 {
        if bedc_yes(g, s, t, k, l) {
            Expected::Yes
        } else {
            Expected::No
        }
    } else {
        Expected::Unknown
    };
    let meta = InstanceMeta {
        family: "bedc-chain".into(),
        params: serde_json::json!({ "s": s, "t": t, "k": k, "l": l }),
        expected,
        budget: k,
    };
    Ok(GeneratedInstance { graph, budget: k, meta })
}

/// Bounded Edge Directed (s,t)-Cut by enumeration: can at most `k` arc
/// deletions make every s -> t path longer than `l`?
pub fn bedc_yes(g: &WeightedDigraph, s: VertexId, t: VertexId, k: usize, l: usize) -> bool {
    let mut alive = g.full_mask();
    crate::oracle::first_subset_where(g.arc_count(), k, |subset| {
        for &id in subset {
            alive[id as usize] = false;
        }
        let ok = bfs_distance(g, &alive, s, t).map_or(true, |d| d > l);
        for &id in subset {
            alive[id as usize] = true;
        }
        ok.then_some(())
    })
    .is_some()
}

fn bfs_distance(g: &WeightedDigraph, alive: &[bool], s: VertexId, t: VertexId) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[s as usize] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        if v == t {
            return Some(dist[v as usize]);
        }
        for &id in g.out_arcs(v) {
            if !alive[id as usize] {
                continue;
            }
            let head = g.arcs()[id as usize].head;
            if dist[head as usize] == usize::MAX {
                dist[head as usize] = dist[v as usize] + 1;
                queue.push_back(head);
            }
        }
    }
    None
}
