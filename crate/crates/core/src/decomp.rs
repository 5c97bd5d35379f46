//! Tree decompositions and treedepth of the underlying undirected graph.
//!
//! Decompositions are computed by a min-fill elimination heuristic, replaced
//! by an exact subset dynamic program for small graphs (n <= 14). Validity is
//! what the downstream dynamic program needs; width only affects its running
//! time. Treedepth is exact up to a configurable vertex cap via a memoized
//! recursion over connected vertex subsets, and an elimination-forest upper
//! bound above the cap.

use crate::graph::{VertexId, WeightedDigraph};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub const TREEDEPTH_EXACT_CAP: usize = 20;
const TREEWIDTH_EXACT_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompError {
    InvalidDecomposition(String),
    VertexNotCovered(VertexId),
}

impl fmt::Display for DecompError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompError::InvalidDecomposition(why) => write!(f, "invalid decomposition: {why}"),
            DecompError::VertexNotCovered(v) => {
                write!(f, "vertex {v} appears in no bag")
            }
        }
    }
}

impl std::error::Error for DecompError {}

/// Tree decomposition: a tree on node ids `0..bags.len()` given by its edge
/// list, one vertex bag per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// PACE-style text export for external verification.
    pub fn to_pace_string(&self, n_vertices: usize) -> String {
        let max_bag = self.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        let mut out = format!("s td {} {} {}\n", self.bags.len(), max_bag, n_vertices);
        for (i, bag) in self.bags.iter().enumerate() {
            out.push_str(&format!("b {}", i + 1));
            for v in bag {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push('\n');
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

/// Checks the defining properties and reports the first violation:
/// the node graph is a tree, every undirected edge is inside some bag, and
/// the bags containing any fixed vertex form a connected subtree.
pub fn validate_decomposition(g: &WeightedDigraph, dec: &TreeDecomposition) -> Result<(), DecompError> {
    let nodes = dec.bags.len();
    if nodes == 0 {
        if g.vertex_count() == 0 {
            return Ok(());
        }
        return Err(DecompError::InvalidDecomposition("no bags".into()));
    }
    if dec.edges.len() + 1 != nodes {
        return Err(DecompError::InvalidDecomposition(format!(
            "{} nodes need {} tree edges, found {}",
            nodes,
            nodes - 1,
            dec.edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in &dec.edges {
        if a >= nodes || b >= nodes {
            return Err(DecompError::InvalidDecomposition(format!(
                "tree edge ({a}, {b}) out of range"
            )));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    // Connectivity plus the edge count above makes it a tree.
    let mut seen = vec![false; nodes];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(DecompError::InvalidDecomposition("node graph is disconnected".into()));
    }
    for bag in &dec.bags {
        for &v in bag {
            if v as usize >= g.vertex_count() {
                return Err(DecompError::InvalidDecomposition(format!(
                    "bag vertex {v} out of range"
                )));
            }
        }
    }
    for (u, v) in g.underlying_undirected_edges() {
        let covered = dec
            .bags
            .iter()
            .any(|bag| bag.contains(&u) && bag.contains(&v));
        if !covered {
            return Err(DecompError::InvalidDecomposition(format!(
                "edge {{{u}, {v}}} is in no bag"
            )));
        }
    }
    // Occurrence sets must be connected subtrees.
    for v in 0..g.vertex_count() as u32 {
        let holders: Vec<usize> =
            (0..nodes).filter(|&x| dec.bags[x].contains(&v)).collect();
        if holders.len() <= 1 {
            continue;
        }
        let inside: BTreeSet<usize> = holders.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![holders[0]];
        seen.insert(holders[0]);
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if inside.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != holders.len() {
            return Err(DecompError::InvalidDecomposition(format!(
                "bags containing vertex {v} do not form a subtree"
            )));
        }
    }
    Ok(())
}

/// Valid tree decomposition of the underlying undirected graph. Every vertex
/// (isolated ones included) appears in some bag. Exact width for n <= 14,
/// min-fill heuristic above.
pub fn compute_tree_decomposition(g: &WeightedDigraph) -> TreeDecomposition {
    let n = g.vertex_count();
    let edges = g.underlying_undirected_edges();
    let order = if n <= TREEWIDTH_EXACT_CAP {
        exact_elimination_order(n, &edges)
    } else {
        min_fill_order(n, &edges)
    };
    let dec = decomposition_from_order(n, &edges, &order);
    debug_assert!(validate_decomposition(g, &dec).is_ok());
    dec
}

fn adjacency_sets(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<BTreeSet<u32>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        adj[u as usize].insert(v);
        adj[v as usize].insert(u);
    }
    adj
}

/// Greedy min-fill elimination order; ties by degree, then vertex id.
fn min_fill_order(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<VertexId> {
    let mut adj = adjacency_sets(n, edges);
    let mut alive: BTreeSet<u32> = (0..n as u32).collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let mut best: Option<(usize, usize, u32)> = None;
        for &v in &alive {
            let neigh: Vec<u32> = adj[v as usize].iter().copied().collect();
            let mut fill = 0usize;
            for i in 0..neigh.len() {
                for j in i + 1..neigh.len() {
                    if !adj[neigh[i] as usize].contains(&neigh[j]) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, neigh.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, v) = best.unwrap();
        let neigh: Vec<u32> = adj[v as usize].iter().copied().collect();
        for i in 0..neigh.len() {
            for j in i + 1..neigh.len() {
                adj[neigh[i] as usize].insert(neigh[j]);
                adj[neigh[j] as usize].insert(neigh[i]);
            }
        }
        for &u in &neigh {
            adj[u as usize].remove(&v);
        }
        adj[v as usize].clear();
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Back-degree of `v` when eliminated after exactly the set `mask`:
/// neighbours outside `mask ∪ {v}` reachable from `v` through `mask`.
fn back_neighbourhood(adj: &[BTreeSet<u32>], mask: u64, v: u32) -> Vec<u32> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut result = Vec::new();
    let mut stack = vec![v];
    seen[v as usize] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x as usize] {
            if seen[y as usize] {
                continue;
            }
            seen[y as usize] = true;
            if mask & (1 << y) != 0 {
                stack.push(y);
            } else if y != v {
                result.push(y);
            }
        }
    }
    result
}

/// Exact minimum-width elimination order by dynamic programming over
/// eliminated subsets. The back-degree of a vertex depends only on the set
/// eliminated before it, which makes the subset recursion sound.
fn exact_elimination_order(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<VertexId> {
    if n == 0 {
        return Vec::new();
    }
    let adj = adjacency_sets(n, edges);
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, (usize, u32)> = HashMap::new();

    fn solve(
        mask: u64,
        n: usize,
        full: u64,
        adj: &[BTreeSet<u32>],
        memo: &mut HashMap<u64, (usize, u32)>,
    ) -> usize {
        if mask == full {
            return 0;
        }
        if let Some(&(w, _)) = memo.get(&mask) {
            return w;
        }
        let mut best = usize::MAX;
        let mut best_v = u32::MAX;
        for v in 0..n as u32 {
            if mask & (1 << v) != 0 {
                continue;
            }
            let deg = back_neighbourhood(adj, mask, v).len();
            let rest = solve(mask | (1 << v), n, full, adj, memo);
            let width = deg.max(rest);
            if width < best || (width == best && v < best_v) {
                best = width;
                best_v = v;
            }
        }
        memo.insert(mask, (best, best_v));
        best
    }

    solve(0, n, full, &adj, &mut memo);
    let mut order = Vec::with_capacity(n);
    let mut mask = 0u64;
    while mask != full {
        let (_, v) = memo[&mask];
        order.push(v);
        mask |= 1 << v;
    }
    order
}

/// Clique-tree style decomposition from an elimination order: the bag of `v`
/// is `v` plus its back-neighbourhood; each bag hangs off the bag of the
/// first back-neighbour to be eliminated.
fn decomposition_from_order(
    n: usize,
    edges: &[(VertexId, VertexId)],
    order: &[VertexId],
) -> TreeDecomposition {
    if n == 0 {
        return TreeDecomposition { bags: vec![Vec::new()], edges: Vec::new() };
    }
    let adj = adjacency_sets(n, edges);
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    let mut eliminated: u64 = 0;
    let mut bags: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut higher: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &v in order {
        let mut back = back_neighbourhood(&adj, eliminated, v);
        back.sort_unstable();
        higher[position[v as usize]] = back.clone();
        let mut bag = back;
        bag.push(v);
        bag.sort_unstable();
        bags[position[v as usize]] = bag;
        eliminated |= 1 << v;
    }
    let mut tree_edges = Vec::new();
    for i in 0..n {
        if let Some(&parent_v) = higher[i].iter().min_by_key(|&&u| position[u as usize]) {
            tree_edges.push((i, position[parent_v as usize]));
        } else if i + 1 < n {
            // No back-neighbour (isolated remainder): chain to keep a tree.
            tree_edges.push((i, i + 1));
        }
    }
    TreeDecomposition { bags, edges: tree_edges }
}

/// Node kinds of a nice tree decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceNodeKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Debug, Clone)]
pub struct NiceNode {
    pub kind: NiceNodeKind,
    /// Sorted.
    pub bag: Vec<VertexId>,
    pub children: Vec<usize>,
}

/// Rooted decomposition with leaf/introduce/forget/join nodes; root and leaf
/// bags are empty.
#[derive(Debug, Clone)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node indices in an order where children precede parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
            } else {
                stack.push((x, true));
                for &c in &self.nodes[x].children {
                    stack.push((c, false));
                }
            }
        }
        out
    }
}

/// Structural validity of the nice form.
pub fn validate_nice(g: &WeightedDigraph, nice: &NiceTreeDecomposition) -> Result<(), DecompError> {
    let invalid = |why: String| Err(DecompError::InvalidDecomposition(why));
    if !nice.nodes[nice.root].bag.is_empty() {
        return invalid("root bag not empty".into());
    }
    for (i, node) in nice.nodes.iter().enumerate() {
        match node.kind {
            NiceNodeKind::Leaf => {
                if !node.children.is_empty() || !node.bag.is_empty() {
                    return invalid(format!("leaf node {i} malformed"));
                }
            }
            NiceNodeKind::Introduce(v) => {
                if node.children.len() != 1 {
                    return invalid(format!("introduce node {i} needs one child"));
                }
                let child = &nice.nodes[node.children[0]];
                let mut expect = child.bag.clone();
                expect.push(v);
                expect.sort_unstable();
                if child.bag.contains(&v) || node.bag != expect {
                    return invalid(format!("introduce node {i} does not add exactly {v}"));
                }
            }
            NiceNodeKind::Forget(v) => {
                if node.children.len() != 1 {
                    return invalid(format!("forget node {i} needs one child"));
                }
                let child = &nice.nodes[node.children[0]];
                let expect: Vec<u32> =
                    child.bag.iter().copied().filter(|&u| u != v).collect();
                if !child.bag.contains(&v) || node.bag != expect {
                    return invalid(format!("forget node {i} does not drop exactly {v}"));
                }
            }
            NiceNodeKind::Join => {
                if node.children.len() != 2 {
                    return invalid(format!("join node {i} needs two children"));
                }
                for &c in &node.children {
                    if nice.nodes[c].bag != node.bag {
                        return invalid(format!("join node {i} bag differs from child {c}"));
                    }
                }
            }
        }
    }
    // The nice form is itself a tree decomposition; reuse the flat validator.
    let flat = TreeDecomposition {
        bags: nice.nodes.iter().map(|x| x.bag.clone()).collect(),
        edges: nice
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, x)| x.children.iter().map(move |&c| (i, c)))
            .collect(),
    };
    validate_decomposition(g, &flat)?;
    for v in 0..g.vertex_count() as u32 {
        if !nice.nodes.iter().any(|x| x.bag.contains(&v)) {
            return Err(DecompError::VertexNotCovered(v));
        }
    }
    Ok(())
}

/// Kloks-style conversion to nice form. Width is unchanged; every vertex of
/// the graph must appear in some bag.
pub fn make_nice(
    g: &WeightedDigraph,
    dec: &TreeDecomposition,
) -> Result<NiceTreeDecomposition, DecompError> {
    validate_decomposition(g, dec)?;
    for v in 0..g.vertex_count() as u32 {
        if !dec.bags.iter().any(|b| b.contains(&v)) {
            return Err(DecompError::VertexNotCovered(v));
        }
    }

    let mut builder = NiceBuilder { nodes: Vec::new() };
    let top = if dec.bags.is_empty() {
        builder.push(NiceNodeKind::Leaf, Vec::new(), Vec::new())
    } else {
        let nodes = dec.bags.len();
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in &dec.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut sorted_bags: Vec<Vec<u32>> = dec.bags.clone();
        for bag in sorted_bags.iter_mut() {
            bag.sort_unstable();
            bag.dedup();
        }
        builder.subtree(0, usize::MAX, &sorted_bags, &adj)
    };
    // Forget everything remaining on top of the root chain.
    let mut current = top;
    let bag = builder.nodes[current].bag.clone();
    let mut remaining = bag;
    while let Some(v) = remaining.pop() {
        current = builder.push(NiceNodeKind::Forget(v), remaining.clone(), vec![current]);
    }
    let nice = NiceTreeDecomposition { root: current, nodes: builder.nodes };
    validate_nice(g, &nice)?;
    Ok(nice)
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NiceNodeKind, bag: Vec<u32>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Returns the index of a nice node whose bag equals `bags[x]` and whose
    /// subtree covers everything below `x`.
    fn subtree(&mut self, x: usize, parent: usize, bags: &[Vec<u32>], adj: &[Vec<usize>]) -> usize {
        let target = &bags[x];
        let mut tops: Vec<usize> = Vec::new();
        for &c in &adj[x] {
            if c == parent {
                continue;
            }
            let child_top = self.subtree(c, x, bags, adj);
            tops.push(self.transition(child_top, target));
        }
        if tops.is_empty() {
            // Leaf of the input tree: introduce the whole bag above an empty leaf.
            let mut current = self.push(NiceNodeKind::Leaf, Vec::new(), Vec::new());
            let mut acc: Vec<u32> = Vec::new();
            for &v in target {
                acc.push(v);
                acc.sort_unstable();
                current = self.push(NiceNodeKind::Introduce(v), acc.clone(), vec![current]);
            }
            return current;
        }
        let mut current = tops[0];
        for &other in &tops[1..] {
            current = self.push(NiceNodeKind::Join, target.clone(), vec![current, other]);
        }
        current
    }

    /// Chain of forgets then introduces turning the bag at `from` into `target`.
    fn transition(&mut self, from: usize, target: &[u32]) -> usize {
        let mut current = from;
        let mut bag = self.nodes[from].bag.clone();
        let to_forget: Vec<u32> =
            bag.iter().copied().filter(|v| !target.contains(v)).collect();
        for v in to_forget {
            bag.retain(|&u| u != v);
            current = self.push(NiceNodeKind::Forget(v), bag.clone(), vec![current]);
        }
        let to_introduce: Vec<u32> =
            target.iter().copied().filter(|v| !bag.contains(v)).collect();
        for v in to_introduce {
            bag.push(v);
            bag.sort_unstable();
            current = self.push(NiceNodeKind::Introduce(v), bag.clone(), vec![current]);
        }
        current
    }
}

/// Rooted elimination forest: every edge of the graph joins an
/// ancestor-descendant pair, depth counts vertices on the longest
/// root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreedepthDecomposition {
    /// Parent of each vertex, `None` for roots.
    pub parent: Vec<Option<VertexId>>,
    pub depth: usize,
    /// Whether `depth` is the exact treedepth or only an upper bound.
    pub exact: bool,
}

impl TreedepthDecomposition {
    /// Depth of each vertex (root = 1).
    pub fn vertex_depths(&self) -> Vec<usize> {
        let n = self.parent.len();
        let mut depth = vec![0usize; n];
        fn resolve(v: usize, parent: &[Option<u32>], depth: &mut [usize]) -> usize {
            if depth[v] != 0 {
                return depth[v];
            }
            let d = match parent[v] {
                None => 1,
                Some(p) => resolve(p as usize, parent, depth) + 1,
            };
            depth[v] = d;
            d
        }
        for v in 0..n {
            resolve(v, &self.parent, &mut depth);
        }
        depth
    }

    /// True when every edge joins an ancestor-descendant pair.
    pub fn witnesses(&self, n: usize, edges: &[(VertexId, VertexId)]) -> bool {
        if self.parent.len() != n {
            return false;
        }
        let ancestor = |mut a: u32, b: u32| -> bool {
            loop {
                if a == b {
                    return true;
                }
                match self.parent[a as usize] {
                    Some(p) => a = p,
                    None => return false,
                }
            }
        };
        edges.iter().all(|&(u, v)| ancestor(u, v) || ancestor(v, u))
    }
}

/// Treedepth of the underlying undirected graph. Exact for
/// `n <= TREEDEPTH_EXACT_CAP`, otherwise a valid elimination forest whose
/// depth is an upper bound (`exact = false`).
pub fn compute_treedepth(g: &WeightedDigraph) -> TreedepthDecomposition {
    compute_treedepth_with_cap(g, TREEDEPTH_EXACT_CAP)
}

pub fn compute_treedepth_with_cap(g: &WeightedDigraph, cap: usize) -> TreedepthDecomposition {
    let n = g.vertex_count();
    let edges = g.underlying_undirected_edges();
    compute_treedepth_undirected(n, &edges, cap)
}

pub fn compute_treedepth_undirected(
    n: usize,
    edges: &[(VertexId, VertexId)],
    cap: usize,
) -> TreedepthDecomposition {
    if n == 0 {
        return TreedepthDecomposition { parent: Vec::new(), depth: 0, exact: true };
    }
    let adj = adjacency_sets(n, edges);
    if n <= cap.min(63) {
        let mut memo: HashMap<u64, (usize, u32)> = HashMap::new();
        let full: u64 = (1u64 << n) - 1;
        let depth = td_exact(full, &adj, &mut memo);
        let mut parent = vec![None; n];
        td_forest(full, None, &adj, &memo, &mut parent);
        let dec = TreedepthDecomposition { parent, depth, exact: true };
        debug_assert!(dec.witnesses(n, edges));
        debug_assert_eq!(dec.vertex_depths().iter().max().copied().unwrap_or(0), depth);
        dec
    } else {
        let mut parent = vec![None; n];
        let all: BTreeSet<u32> = (0..n as u32).collect();
        let depth = td_heuristic(&all, None, &adj, &mut parent);
        let dec = TreedepthDecomposition { parent, depth, exact: false };
        debug_assert!(dec.witnesses(n, edges));
        dec
    }
}

fn components_of(mask: u64, adj: &[BTreeSet<u32>]) -> Vec<u64> {
    let mut comps = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        let start = rest.trailing_zeros();
        let mut comp: u64 = 0;
        let mut stack = vec![start];
        comp |= 1 << start;
        while let Some(v) = stack.pop() {
            for &u in &adj[v as usize] {
                let bit = 1u64 << u;
                if mask & bit != 0 && comp & bit == 0 {
                    comp |= bit;
                    stack.push(u);
                }
            }
        }
        comps.push(comp);
        rest &= !comp;
    }
    comps
}

/// Exact treedepth of the induced subgraph on `mask`, assumed connected or
/// split into components first. Memoized per connected mask together with
/// the optimal root choice.
fn td_exact(mask: u64, adj: &[BTreeSet<u32>], memo: &mut HashMap<u64, (usize, u32)>) -> usize {
    if mask.count_ones() == 1 {
        return 1;
    }
    let comps = components_of(mask, adj);
    if comps.len() > 1 {
        return comps.iter().map(|&c| td_exact(c, adj, memo)).max().unwrap();
    }
    if let Some(&(d, _)) = memo.get(&mask) {
        return d;
    }
    let mut best = usize::MAX;
    let mut best_root = u32::MAX;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let d = 1 + td_exact(mask & !(1u64 << v), adj, memo);
        if d < best {
            best = d;
            best_root = v;
        }
    }
    memo.insert(mask, (best, best_root));
    best
}

fn td_forest(
    mask: u64,
    parent_of_roots: Option<u32>,
    adj: &[BTreeSet<u32>],
    memo: &HashMap<u64, (usize, u32)>,
    parent: &mut Vec<Option<u32>>,
) {
    if mask == 0 {
        return;
    }
    for comp in components_of(mask, adj) {
        if comp.count_ones() == 1 {
            let v = comp.trailing_zeros();
            parent[v as usize] = parent_of_roots;
            continue;
        }
        let root = memo[&comp].1;
        parent[root as usize] = parent_of_roots;
        td_forest(comp & !(1u64 << root), Some(root), adj, memo, parent);
    }
}

/// Upper-bound elimination forest: repeatedly remove the vertex minimizing
/// the largest remaining component.
fn td_heuristic(
    vertices: &BTreeSet<u32>,
    parent_of_root: Option<u32>,
    adj: &[BTreeSet<u32>],
    parent: &mut Vec<Option<u32>>,
) -> usize {
    if vertices.is_empty() {
        return 0;
    }
    if vertices.len() == 1 {
        let v = *vertices.iter().next().unwrap();
        parent[v as usize] = parent_of_root;
        return 1;
    }
    let comps = set_components(vertices, adj);
    if comps.len() > 1 {
        return comps
            .iter()
            .map(|c| td_heuristic(c, parent_of_root, adj, parent))
            .max()
            .unwrap();
    }
    let mut best: Option<(usize, u32)> = None;
    for &v in vertices {
        let mut rest = vertices.clone();
        rest.remove(&v);
        let largest = set_components(&rest, adj)
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0);
        let key = (largest, v);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    let (_, root) = best.unwrap();
    parent[root as usize] = parent_of_root;
    let mut rest = vertices.clone();
    rest.remove(&root);
    1 + td_heuristic(&rest, Some(root), adj, parent)
}

fn set_components(vertices: &BTreeSet<u32>, adj: &[BTreeSet<u32>]) -> Vec<BTreeSet<u32>> {
    let mut comps = Vec::new();
    let mut unseen = vertices.clone();
    while let Some(&start) = unseen.iter().next() {
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        comp.insert(start);
        unseen.remove(&start);
        while let Some(v) = stack.pop() {
            for &u in &adj[v as usize] {
                if unseen.contains(&u) {
                    unseen.remove(&u);
                    comp.insert(u);
                    stack.push(u);
                }
            }
        }
        comps.push(comp);
    }
    comps
}
