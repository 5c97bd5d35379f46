//! Dynamic program over nice tree decompositions.
//!
//! Table keys pair an ordered partition of the current bag with an integer
//! potential assignment into a range [a, b]. An arc kept by a solution must
//! either go from an earlier block to a later one or stay within a block and
//! satisfy the potential inequality; the deleted arcs are exactly the ones
//! violating the key. The engine computes entry sizes bottom-up and
//! reconstructs the minimum arc set top-down, so tables store one u32 per
//! key.
//!
//! Three instantiations for weights in {-1, 0, 1}: the single trivial
//! partition with range [0, w-], all ordered partitions with range [0, w+],
//! and the single partition with range [0, 2^td].

use crate::decomp::{
    compute_tree_decomposition, compute_treedepth, make_nice, validate_nice, DecompError,
    NiceNodeKind, NiceTreeDecomposition,
};
use crate::graph::{
    build_feasible_potential_in, strong_components_reverse_topological, ArcId, DeletionSet,
    VertexId, WeightedDigraph,
};
use crate::skew::level_assignments;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Which ordered partitions of the vertex set the DP may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionFamilySpec {
    /// Only the single partition holding all vertices.
    Singleton,
    /// Every ordered partition of the vertex set.
    AllOrderedPartitions,
}

#[derive(Debug, Clone)]
pub struct DpOptions {
    /// Upper bound on the total number of table entries across all nodes.
    pub max_table_entries: u128,
    /// Largest bag for which ordered partitions are enumerated.
    pub max_partition_bag: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { max_table_entries: 100_000_000, max_partition_bag: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpError {
    Decomposition(DecompError),
    BadRange { a: i64, b: i64 },
    Resource { entries: u128, budget: u128, max_bag: usize, partitions: u128, range: u128 },
    BagCapExceeded { bag: usize, cap: usize },
    WeightOutsideUnit { arc: ArcId, weight: i64 },
}

impl fmt::Display for DpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpError::Decomposition(e) => write!(f, "{e}"),
            DpError::BadRange { a, b } => write!(f, "empty potential range [{a}, {b}]"),
            DpError::Resource { entries, budget, max_bag, partitions, range } => write!(
                f,
                "table would need {entries} entries (budget {budget}): \
                 range^bagsize = {range}^{max_bag} times {partitions} bag partitions"
            ),
            DpError::BagCapExceeded { bag, cap } => {
                write!(f, "bag of size {bag} exceeds the partition enumeration cap {cap}")
            }
            DpError::WeightOutsideUnit { arc, weight } => {
                write!(f, "arc {arc} has weight {weight}; this solver needs weights in {{-1, 0, 1}}")
            }
        }
    }
}

impl std::error::Error for DpError {}

impl From<DecompError> for DpError {
    fn from(e: DecompError) -> Self {
        DpError::Decomposition(e)
    }
}

/// Minimum deletion set plus its witness: an ordered partition of the
/// vertices (blocks in order) and a potential, together making every kept
/// arc legal.
#[derive(Debug, Clone)]
pub struct DpSolution {
    pub deleted: DeletionSet,
    pub witness_blocks: Vec<Vec<VertexId>>,
    pub witness_potential: Vec<i64>,
}

/// Checks that `blocks` ordered-partition the vertex set and that every arc
/// outside `deleted` either crosses blocks forward or stays inside a block
/// with `pi(tail) - pi(head) + w >= 0`.
pub fn check_partition_potential_feasible(
    g: &WeightedDigraph,
    deleted: &DeletionSet,
    blocks: &[Vec<VertexId>],
    pi: &[i64],
) -> bool {
    let n = g.vertex_count();
    if pi.len() != n {
        return false;
    }
    let mut block_of = vec![usize::MAX; n];
    let mut covered = 0usize;
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return false;
        }
        for &v in block {
            if (v as usize) >= n || block_of[v as usize] != usize::MAX {
                return false;
            }
            block_of[v as usize] = b;
            covered += 1;
        }
    }
    if covered != n {
        return false;
    }
    g.arcs().iter().all(|a| {
        if deleted.contains(a.id) {
            return true;
        }
        let (bi, bj) = (block_of[a.tail as usize], block_of[a.head as usize]);
        bi < bj || (bi == bj && pi[a.tail as usize] - pi[a.head as usize] + a.weight >= 0)
    })
}

struct NodeCtx {
    bag: Vec<VertexId>,
    partitions: Vec<Vec<u8>>,
    partition_index: HashMap<Vec<u8>, u32>,
    pi_count: u64,
    pow: Vec<u64>,
    /// All arcs with both endpoints in the bag, as (arc, pos_tail, pos_head, w).
    bag_arcs: Vec<(ArcId, u8, u8, i64)>,
    /// Introduce nodes: the arcs between the new vertex and the rest.
    new_arcs: Vec<(ArcId, u8, u8, i64)>,
    /// Introduce/forget: position of the distinguished vertex in the larger
    /// bag (this node's bag for introduce, the child's for forget).
    pos_of_v: usize,
}

fn violated(levels: &[u8], digits: &[u64], a: i64, arcs: &[(ArcId, u8, u8, i64)]) -> Vec<ArcId> {
    arcs.iter()
        .filter_map(|&(id, pt, ph, w)| {
            let (bi, bj) = (levels[pt as usize], levels[ph as usize]);
            let bad = bj < bi
                || (bi == bj && {
                    let pi_t = a + digits[pt as usize] as i64;
                    let pi_h = a + digits[ph as usize] as i64;
                    pi_t - pi_h + w < 0
                });
            bad.then_some(id)
        })
        .collect()
}

fn decode_digits(idx: u64, pow: &[u64], r: u64, len: usize) -> Vec<u64> {
    (0..len).map(|i| (idx / pow[i]) % r).collect()
}

/// Removes one position from a level vector and renormalizes the remaining
/// levels onto a consecutive range, preserving order.
fn project_levels(levels: &[u8], remove_pos: usize) -> Vec<u8> {
    let rest: Vec<u8> = levels
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != remove_pos)
        .map(|(_, &l)| l)
        .collect();
    let mut present: Vec<u8> = rest.clone();
    present.sort_unstable();
    present.dedup();
    rest.iter().map(|l| present.binary_search(l).unwrap() as u8).collect()
}

fn project_key(
    levels: &[u8],
    digits: &[u64],
    remove_pos: usize,
    target: &NodeCtx,
) -> (u32, u64) {
    let proj_levels = project_levels(levels, remove_pos);
    let p_idx = *target
        .partition_index
        .get(&proj_levels)
        .expect("projection of a family partition stays in the family");
    let mut pi_idx = 0u64;
    let mut out_pos = 0usize;
    for (i, &d) in digits.iter().enumerate() {
        if i == remove_pos {
            continue;
        }
        pi_idx += d * target.pow[out_pos];
        out_pos += 1;
    }
    (p_idx, pi_idx)
}

/// Minimum-size arc set that is key-feasible for some partition in the
/// family (projected bag-wise) and some potential into [a, b], computed
/// bottom-up over the nice decomposition, with the witness rebuilt from the
/// residual graph afterwards.
pub fn dp_solve(
    g: &WeightedDigraph,
    nice: &NiceTreeDecomposition,
    family: PartitionFamilySpec,
    a: i64,
    b: i64,
) -> Result<DpSolution, DpError> {
    dp_solve_with(g, nice, family, a, b, &DpOptions::default())
}

pub fn dp_solve_with(
    g: &WeightedDigraph,
    nice: &NiceTreeDecomposition,
    family: PartitionFamilySpec,
    a: i64,
    b: i64,
    options: &DpOptions,
) -> Result<DpSolution, DpError> {
    if a > b {
        return Err(DpError::BadRange { a, b });
    }
    validate_nice(g, nice)?;
    let range = (b - a + 1) as u128;

    // Resource estimate before any allocation.
    let mut total: u128 = 0;
    let mut worst: (usize, u128) = (0, 1);
    for node in &nice.nodes {
        let z = node.bag.len();
        if family == PartitionFamilySpec::AllOrderedPartitions && z > options.max_partition_bag {
            return Err(DpError::BagCapExceeded { bag: z, cap: options.max_partition_bag });
        }
        let partitions: u128 = match family {
            PartitionFamilySpec::Singleton => 1,
            PartitionFamilySpec::AllOrderedPartitions => {
                crate::skew::ordered_partition_count(z)
            }
        };
        let keys = partitions.saturating_mul(range.saturating_pow(z as u32));
        total = total.saturating_add(keys);
        if keys > worst.1 {
            worst = (z, partitions);
        }
        if total > options.max_table_entries {
            return Err(DpError::Resource {
                entries: total,
                budget: options.max_table_entries,
                max_bag: worst.0,
                partitions: worst.1,
                range,
            });
        }
    }

    let r = range as u64;
    let contexts: Vec<NodeCtx> = nice
        .nodes
        .iter()
        .map(|node| build_ctx(g, node, nice, family, r))
        .collect();

    // Bottom-up sizes.
    let order = nice.postorder();
    let mut tables: Vec<Vec<u32>> = vec![Vec::new(); nice.nodes.len()];
    for &x in &order {
        let ctx = &contexts[x];
        let keys = (ctx.partitions.len() as u64 * ctx.pi_count) as usize;
        let node = &nice.nodes[x];
        let table = match node.kind {
            NiceNodeKind::Leaf => vec![0u32],
            NiceNodeKind::Introduce(_) => {
                let child = node.children[0];
                let child_ctx = &contexts[child];
                let child_table = &tables[child];
                let mut t = vec![0u32; keys];
                for (p_idx, levels) in ctx.partitions.iter().enumerate() {
                    for pi_idx in 0..ctx.pi_count {
                        let digits = decode_digits(pi_idx, &ctx.pow, r, ctx.bag.len());
                        let viol = violated(levels, &digits, a, &ctx.new_arcs).len() as u32;
                        let (cp, cpi) = project_key(levels, &digits, ctx.pos_of_v, child_ctx);
                        let child_key = (cp as u64 * child_ctx.pi_count + cpi) as usize;
                        t[p_idx * ctx.pi_count as usize + pi_idx as usize] =
                            viol + child_table[child_key];
                    }
                }
                t
            }
            NiceNodeKind::Forget(_) => {
                let child = node.children[0];
                let child_ctx = &contexts[child];
                let child_table = &tables[child];
                let mut t = vec![u32::MAX; keys];
                for (p_idx, levels) in child_ctx.partitions.iter().enumerate() {
                    for pi_idx in 0..child_ctx.pi_count {
                        let digits =
                            decode_digits(pi_idx, &child_ctx.pow, r, child_ctx.bag.len());
                        let (pp, ppi) = project_key(levels, &digits, ctx.pos_of_v, ctx);
                        let parent_key = (pp as u64 * ctx.pi_count + ppi) as usize;
                        let val = child_table[(p_idx as u64 * child_ctx.pi_count + pi_idx) as usize];
                        if val < t[parent_key] {
                            t[parent_key] = val;
                        }
                    }
                }
                t
            }
            NiceNodeKind::Join => {
                let (c1, c2) = (node.children[0], node.children[1]);
                let t1 = &tables[c1];
                let t2 = &tables[c2];
                let mut t = vec![0u32; keys];
                for (p_idx, levels) in ctx.partitions.iter().enumerate() {
                    for pi_idx in 0..ctx.pi_count {
                        let digits = decode_digits(pi_idx, &ctx.pow, r, ctx.bag.len());
                        let shared = violated(levels, &digits, a, &ctx.bag_arcs).len() as u32;
                        let key = (p_idx as u64 * ctx.pi_count + pi_idx) as usize;
                        t[key] = t1[key] + t2[key] - shared;
                    }
                }
                t
            }
        };
        tables[x] = table;
    }

    // Top-down reconstruction of the minimum set.
    let mut deleted: BTreeSet<ArcId> = BTreeSet::new();
    let mut stack: Vec<(usize, u32, u64)> = vec![(nice.root, 0, 0)];
    while let Some((x, p_idx, pi_idx)) = stack.pop() {
        let ctx = &contexts[x];
        let node = &nice.nodes[x];
        match node.kind {
            NiceNodeKind::Leaf => {}
            NiceNodeKind::Introduce(_) => {
                let levels = &ctx.partitions[p_idx as usize];
                let digits = decode_digits(pi_idx, &ctx.pow, r, ctx.bag.len());
                deleted.extend(violated(levels, &digits, a, &ctx.new_arcs));
                let child = node.children[0];
                let (cp, cpi) = project_key(levels, &digits, ctx.pos_of_v, &contexts[child]);
                stack.push((child, cp, cpi));
            }
            NiceNodeKind::Forget(_) => {
                let child = node.children[0];
                let child_ctx = &contexts[child];
                let child_table = &tables[child];
                let target = tables[x][(p_idx as u64 * ctx.pi_count + pi_idx) as usize];
                let mut chosen: Option<(u32, u64)> = None;
                'outer: for (cp_idx, levels) in child_ctx.partitions.iter().enumerate() {
                    for cpi_idx in 0..child_ctx.pi_count {
                        let digits =
                            decode_digits(cpi_idx, &child_ctx.pow, r, child_ctx.bag.len());
                        let (pp, ppi) = project_key(levels, &digits, ctx.pos_of_v, ctx);
                        if pp != p_idx || ppi != pi_idx {
                            continue;
                        }
                        let val =
                            child_table[(cp_idx as u64 * child_ctx.pi_count + cpi_idx) as usize];
                        if val == target {
                            chosen = Some((cp_idx as u32, cpi_idx));
                            break 'outer;
                        }
                    }
                }
                let (cp, cpi) = chosen.expect("forget entry must have a matching child key");
                stack.push((child, cp, cpi));
            }
            NiceNodeKind::Join => {
                stack.push((node.children[0], p_idx, pi_idx));
                stack.push((node.children[1], p_idx, pi_idx));
            }
        }
    }
    let root_value = tables[nice.root][0];
    assert_eq!(
        deleted.len() as u32,
        root_value,
        "reconstructed set size disagrees with the table"
    );

    let deleted = DeletionSet::from_ids(deleted);
    let (witness_blocks, witness_potential) = build_witness(g, &deleted, family, a, b);
    debug_assert!(check_partition_potential_feasible(
        g,
        &deleted,
        &witness_blocks,
        &witness_potential
    ));
    Ok(DpSolution { deleted, witness_blocks, witness_potential })
}

fn build_ctx(
    g: &WeightedDigraph,
    node: &crate::decomp::NiceNode,
    nice: &NiceTreeDecomposition,
    family: PartitionFamilySpec,
    r: u64,
) -> NodeCtx {
    let bag = node.bag.clone();
    let z = bag.len();
    let partitions: Vec<Vec<u8>> = match family {
        PartitionFamilySpec::Singleton => {
            if z == 0 {
                vec![Vec::new()]
            } else {
                vec![vec![0u8; z]]
            }
        }
        PartitionFamilySpec::AllOrderedPartitions => level_assignments(z),
    };
    let partition_index: HashMap<Vec<u8>, u32> = partitions
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect();
    let mut pow = vec![1u64; z + 1];
    for i in 1..=z {
        pow[i] = pow[i - 1] * r;
    }
    let pi_count = pow[z];
    let pos_in_bag = |v: VertexId| bag.binary_search(&v).ok();
    let mut bag_arcs = Vec::new();
    for arc in g.arcs() {
        if let (Some(pt), Some(ph)) = (pos_in_bag(arc.tail), pos_in_bag(arc.head)) {
            bag_arcs.push((arc.id, pt as u8, ph as u8, arc.weight));
        }
    }
    let (new_arcs, pos_of_v) = match node.kind {
        NiceNodeKind::Introduce(v) => {
            let pos = bag.binary_search(&v).expect("introduced vertex is in the bag");
            let arcs = bag_arcs
                .iter()
                .copied()
                .filter(|&(_, pt, ph, _)| pt as usize == pos || ph as usize == pos)
                .collect();
            (arcs, pos)
        }
        NiceNodeKind::Forget(v) => {
            let child = &nice.nodes[node.children[0]];
            let pos = child.bag.binary_search(&v).expect("forgotten vertex is in the child bag");
            (Vec::new(), pos)
        }
        _ => (Vec::new(), 0),
    };
    NodeCtx { bag, partitions, partition_index, pi_count, pow, bag_arcs, new_arcs, pos_of_v }
}

/// Witness from the residual graph: for the singleton family one block and a
/// shifted Gallai potential; otherwise the strong components of `G - S` in
/// topological order, each with its own shifted Gallai potential. Width
/// minimality of shortest-path potentials keeps the values inside [a, b].
fn build_witness(
    g: &WeightedDigraph,
    deleted: &DeletionSet,
    family: PartitionFamilySpec,
    a: i64,
    b: i64,
) -> (Vec<Vec<VertexId>>, Vec<i64>) {
    let n = g.vertex_count();
    let alive = g.mask_without(deleted);
    match family {
        PartitionFamilySpec::Singleton => {
            let pi = build_feasible_potential_in(g, &alive)
                .expect("key-feasible set leaves no negative cycle");
            let values = shift_into(pi.values(), a, b, (0..n).collect());
            let blocks = if n == 0 {
                Vec::new()
            } else {
                vec![(0..n as u32).collect::<Vec<_>>()]
            };
            (blocks, values)
        }
        PartitionFamilySpec::AllOrderedPartitions => {
            let mut comps = strong_components_reverse_topological(g, &alive);
            comps.reverse(); // topological order of the condensation
            for c in comps.iter_mut() {
                c.sort_unstable();
            }
            let mut values = vec![0i64; n];
            for comp in &comps {
                let members: BTreeSet<u32> = comp.iter().copied().collect();
                // Potential of the induced residual subgraph of this block.
                let mut comp_alive = alive.clone();
                for arc in g.arcs() {
                    if !members.contains(&arc.tail) || !members.contains(&arc.head) {
                        comp_alive[arc.id as usize] = false;
                    }
                }
                let pi = build_feasible_potential_in(g, &comp_alive)
                    .expect("block of a key-feasible residual graph has no negative cycle");
                let indices: Vec<usize> = comp.iter().map(|&v| v as usize).collect();
                let shifted = shift_into(pi.values(), a, b, indices.clone());
                for &i in &indices {
                    values[i] = shifted[i];
                }
            }
            (comps, values)
        }
    }
}

/// Shifts the values at `indices` so their minimum is `a`; their spread is
/// at most `b - a` by width minimality of shortest-path potentials.
fn shift_into(values: &[i64], a: i64, b: i64, indices: Vec<usize>) -> Vec<i64> {
    let mut out = values.to_vec();
    if indices.is_empty() {
        return out;
    }
    let min = indices.iter().map(|&i| values[i]).min().unwrap();
    let max = indices.iter().map(|&i| values[i]).max().unwrap();
    debug_assert!(max - min <= b - a, "potential spread {} exceeds range", max - min);
    for &i in &indices {
        out[i] = values[i] - min + a;
    }
    out
}

/// Total table entries the DP would allocate, saturating.
pub fn table_estimate(
    nice: &NiceTreeDecomposition,
    family: PartitionFamilySpec,
    a: i64,
    b: i64,
) -> u128 {
    if a > b {
        return 0;
    }
    let range = (b - a + 1) as u128;
    let mut total: u128 = 0;
    for node in &nice.nodes {
        let z = node.bag.len();
        let partitions: u128 = match family {
            PartitionFamilySpec::Singleton => 1,
            PartitionFamilySpec::AllOrderedPartitions => crate::skew::ordered_partition_count(z),
        };
        total = total.saturating_add(partitions.saturating_mul(range.saturating_pow(z as u32)));
    }
    total
}

fn require_unit_weights(g: &WeightedDigraph) -> Result<(), DpError> {
    for arc in g.arcs() {
        if !(-1..=1).contains(&arc.weight) {
            return Err(DpError::WeightOutsideUnit { arc: arc.id, weight: arc.weight });
        }
    }
    Ok(())
}

fn nice_of(g: &WeightedDigraph) -> Result<NiceTreeDecomposition, DpError> {
    let dec = compute_tree_decomposition(g);
    Ok(make_nice(g, &dec)?)
}

/// Weights in {-1, 0, 1}, singleton family, potentials in [0, w-]. Returns
/// the minimum set if it fits the budget.
pub fn solve_tw_wminus(g: &WeightedDigraph, k: usize) -> Result<Option<DeletionSet>, DpError> {
    solve_tw_wminus_with(g, k, &DpOptions::default())
}

pub fn solve_tw_wminus_with(
    g: &WeightedDigraph,
    k: usize,
    options: &DpOptions,
) -> Result<Option<DeletionSet>, DpError> {
    require_unit_weights(g)?;
    let nice = nice_of(g)?;
    let sol = dp_solve_with(g, &nice, PartitionFamilySpec::Singleton, 0, g.w_minus() as i64, options)?;
    Ok((sol.deleted.len() <= k).then_some(sol.deleted))
}

/// Weights in {-1, 0, 1}, all ordered partitions, potentials in [0, w+].
pub fn solve_tw_wplus(g: &WeightedDigraph, k: usize) -> Result<Option<DeletionSet>, DpError> {
    solve_tw_wplus_with(g, k, &DpOptions::default())
}

pub fn solve_tw_wplus_with(
    g: &WeightedDigraph,
    k: usize,
    options: &DpOptions,
) -> Result<Option<DeletionSet>, DpError> {
    require_unit_weights(g)?;
    let nice = nice_of(g)?;
    let sol = dp_solve_with(
        g,
        &nice,
        PartitionFamilySpec::AllOrderedPartitions,
        0,
        g.w_plus() as i64,
        options,
    )?;
    Ok((sol.deleted.len() <= k).then_some(sol.deleted))
}

/// Weights in {-1, 0, 1}, singleton family, potentials in [0, 2^td]. An
/// upper-bound treedepth only widens the range.
pub fn solve_td_potential(g: &WeightedDigraph, k: usize) -> Result<Option<DeletionSet>, DpError> {
    solve_td_potential_with(g, k, &DpOptions::default())
}

pub fn solve_td_potential_with(
    g: &WeightedDigraph,
    k: usize,
    options: &DpOptions,
) -> Result<Option<DeletionSet>, DpError> {
    require_unit_weights(g)?;
    let nice = nice_of(g)?;
    let td = compute_treedepth(g);
    let bound = 1i64.checked_shl(td.depth.min(62) as u32).unwrap_or(i64::MAX);
    let sol = dp_solve_with(g, &nice, PartitionFamilySpec::Singleton, 0, bound, options)?;
    Ok((sol.deleted.len() <= k).then_some(sol.deleted))
}

/// Full solution (with witness) variants used by tests and the portfolio.
pub fn dp_instantiation_solution(
    g: &WeightedDigraph,
    family: PartitionFamilySpec,
    b: i64,
    options: &DpOptions,
) -> Result<DpSolution, DpError> {
    require_unit_weights(g)?;
    let nice = nice_of(g)?;
    dp_solve_with(g, &nice, family, 0, b, options)
}
