//! Module invariants from the design contracts, checked on seeded random
//! instances against independent routes.

mod common;

use common::{pathwidth_by_subset_dp, random_digraph, rng, treewidth_by_ordering_search, weight_range};
use minfb::branching::{
    solve_bounded_cycle_branching_with, solve_td_plus_k, BranchConfig,
};
use minfb::decomp::{
    compute_tree_decomposition, compute_treedepth, make_nice, validate_nice,
};
use minfb::dp::table_estimate;
use minfb::generators::gen_partition_gadget;
use minfb::graph::{
    build_feasible_potential, verify_solution, DeletionSet, WeightedDigraph,
};
use minfb::linsys::{blocker_from_arcs, digraph_to_system, system_to_digraph};
use minfb::negcycle::shortest_negative_cycle;
use minfb::oracle::{
    brute_force_ndfas, brute_force_skew_cut, brute_force_subset_dfas, first_subset_where,
    undirected_cycle_lengths, undirected_longest_path,
};
use minfb::pmone::{
    nonneg_cycle_through_arc, nonneg_cycle_through_arc_with, solve_subset_dfas, PathSearchMode,
};
use minfb::skew::{build_zero_propagation_graph, enumerate_ordered_partitions};
use rand::Rng;

/// Feasibility blockers of a system and deletion sets of its graph are the
/// same thing: brute-force minima agree row-for-arc.
#[test]
fn system_and_graph_blockers_are_parameter_equivalent() {
    let mut rng = rng(0xE0);
    for _ in 0..120 {
        let g = random_digraph(&mut rng, 6, 10, &weight_range(-3, 3));
        let sys = digraph_to_system(&g);
        let (g2, map) = system_to_digraph(&sys);
        assert_eq!(g, g2, "round trip changed the graph");
        for k in 0..=3usize {
            // System side: remove row subsets, check feasibility through the
            // residual graph's potential.
            let mut alive = g2.full_mask();
            let system_min = first_subset_where(sys.rows().len(), k, |subset| {
                for &r in subset {
                    alive[r as usize] = false;
                }
                let (restricted, _) = g2.restrict_to(&alive);
                let feasible = build_feasible_potential(&restricted).is_some();
                for &r in subset {
                    alive[r as usize] = true;
                }
                feasible.then_some(subset.len())
            });
            let graph_min = brute_force_ndfas(&g2, k).map(|s| s.len());
            assert_eq!(system_min, graph_min, "parameter equivalence at k={k}");
        }
        // Blocker translation preserves cardinality through the row map.
        if let Some(s) = brute_force_ndfas(&g2, 3) {
            let rows = blocker_from_arcs(&s, &map).unwrap();
            assert_eq!(rows.len(), s.len());
        }
    }
    println!("[PASS] linsys parameter equivalence");
}

#[test]
fn verified_solutions_leave_no_negative_cycle() {
    let mut rng = rng(0xE1);
    for _ in 0..200 {
        let g = random_digraph(&mut rng, 7, 12, &weight_range(-3, 3));
        let k = rng.gen_range(0..=3usize);
        if let Some(s) = brute_force_ndfas(&g, k) {
            let report = verify_solution(&g, &s, k).unwrap();
            assert!(report.valid());
            let (residual, _) = g.restrict_to(&g.mask_without(&s));
            assert!(shortest_negative_cycle(&residual).is_none());
        }
    }
}

#[test]
fn oracle_monotone_and_self_consistent() {
    let mut rng = rng(0xE2);
    for _ in 0..150 {
        let g = random_digraph(&mut rng, 6, 10, &weight_range(-3, 3));
        let mut last: Option<usize> = None;
        for k in 0..=4usize {
            let s = brute_force_ndfas(&g, k);
            if let Some(ref s) = s {
                assert!(verify_solution(&g, s, k).unwrap().valid());
                if let Some(prev) = last {
                    assert_eq!(prev, s.len(), "minimum size changed with larger budget");
                }
                last = Some(s.len());
            } else {
                assert!(last.is_none(), "solvable at smaller k but not larger");
            }
        }
    }
}

#[test]
fn skew_cut_oracle_output_cuts_all_forbidden_pairs() {
    let mut rng = rng(0xE3);
    for _ in 0..100 {
        let g = random_digraph(&mut rng, 7, 10, &[0]);
        let n = g.vertex_count() as u32;
        if n < 4 {
            continue;
        }
        let sources = vec![vec![0], vec![1]];
        let sinks = vec![vec![2], vec![3]];
        if let Ok(Some(cut)) = brute_force_skew_cut(&g, &sources, &sinks, 3) {
            let alive = g.mask_without(&cut);
            let (residual, _) = g.restrict_to(&alive);
            for (i, xs) in sources.iter().enumerate() {
                for sink in sinks.iter().take(i + 1) {
                    for &x in xs {
                        for &y in sink {
                            assert!(!reaches(&residual, x, y), "forbidden path survives");
                        }
                    }
                }
            }
        }
    }
}

fn reaches(g: &WeightedDigraph, from: u32, to: u32) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![from];
    seen[from as usize] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &id in g.out_arcs(v) {
            let h = g.arcs()[id as usize].head;
            if !seen[h as usize] {
                seen[h as usize] = true;
                stack.push(h);
            }
        }
    }
    false
}

/// Branching solvers agree with the oracle up to m = 14, k = 3; the
/// monotone-id optimization stays sound on whatever it returns.
#[test]
fn branching_oracle_equivalence_and_monotone_soundness() {
    let mut rng = rng(0xE4);
    for _ in 0..150 {
        let g = random_digraph(&mut rng, 7, 14, &weight_range(-3, 3));
        let k = rng.gen_range(0..=3usize);
        let oracle = brute_force_ndfas(&g, k);
        let mine = solve_td_plus_k(&g, k);
        assert_eq!(mine.is_some(), oracle.is_some());
        if let Some(ref s) = mine {
            assert!(verify_solution(&g, s, k).unwrap().valid());
        }

        let monotone = BranchConfig { monotone_arc_ids: true, ..Default::default() };
        let (fast, _) = solve_bounded_cycle_branching_with(&g, k, g.vertex_count(), &monotone);
        if let Some(ref s) = fast {
            assert!(verify_solution(&g, s, k).unwrap().valid(), "monotone mode unsound");
        }
    }
}

/// Parallel first-level branching returns exactly the sequential answer.
#[test]
fn parallel_branching_is_deterministic() {
    let mut rng = rng(0xE5);
    for _ in 0..60 {
        let g = random_digraph(&mut rng, 7, 12, &weight_range(-2, 2));
        let k = rng.gen_range(0..=3usize);
        let seq = solve_bounded_cycle_branching_with(
            &g,
            k,
            g.vertex_count(),
            &BranchConfig::default(),
        )
        .0;
        let par = solve_bounded_cycle_branching_with(
            &g,
            k,
            g.vertex_count(),
            &BranchConfig { parallel: true, ..Default::default() },
        )
        .0;
        assert_eq!(seq, par);
    }
}

/// Testable direction of the zero-arc correspondence: when a solution inside
/// the zero arcs exists, some ordered partition of the non-zero endpoints
/// realizes it as a skew cut, and every skew cut at that budget verifies.
#[test]
fn zero_arc_solutions_match_skew_cuts() {
    let mut rng = rng(0xE6);
    let mut exercised = 0;
    'outer: for _ in 0..400 {
        if exercised >= 40 {
            break;
        }
        let g = random_digraph(&mut rng, 5, 9, &[-1, 0, 0, 1]);
        if g.arc_count() > 12 || g.w_plus() + g.w_minus() > 3 {
            continue;
        }
        // Smallest solution using zero arcs only.
        let zero_arcs = g.zero_arcs();
        let mut alive = g.full_mask();
        let solution = first_subset_where(zero_arcs.len(), 2, |subset| {
            let ids: Vec<u32> = subset.iter().map(|&i| zero_arcs[i as usize]).collect();
            for &id in &ids {
                alive[id as usize] = false;
            }
            let ok = build_feasible_potential(&g.restrict_to(&alive).0).is_some();
            for &id in &ids {
                alive[id as usize] = true;
            }
            ok.then(|| DeletionSet::from_ids(ids))
        });
        let Some(solution) = solution else { continue };
        let prop = build_zero_propagation_graph(&g);
        let z: Vec<u32> = prop.plus_of.keys().copied().collect();
        // The partition the correspondence constructs: group the non-zero
        // endpoints by their residual potential, ordered by decreasing value.
        let (residual, _) = g.restrict_to(&g.mask_without(&solution));
        let pi = build_feasible_potential(&residual).expect("solution leaves no negative cycle");
        let mut values: Vec<i64> = z.iter().map(|&v| pi.value(v)).collect();
        values.sort_unstable();
        values.dedup();
        values.reverse();
        let partition: Vec<Vec<u32>> = values
            .iter()
            .map(|&val| z.iter().copied().filter(|&v| pi.value(v) == val).collect())
            .collect();
        assert!(
            enumerate_ordered_partitions(&z, 10).unwrap().contains(&partition),
            "constructed partition must be among the enumerated ones"
        );
        let mut sources: Vec<Vec<u32>> = partition
            .iter()
            .map(|b| b.iter().map(|v| prop.plus_of[v]).collect())
            .collect();
        sources.push(Vec::new());
        let mut sinks: Vec<Vec<u32>> = vec![Vec::new()];
        sinks.extend(
            partition.iter().map(|b| b.iter().map(|v| prop.minus_of[v]).collect::<Vec<_>>()),
        );
        // Part 1: the solution, moved to the propagation graph, is a skew cut.
        let mut to_new = vec![None; g.arc_count()];
        for (new_id, &old_id) in prop.arc_back_map.iter().enumerate() {
            to_new[old_id as usize] = Some(new_id as u32);
        }
        let mut cut_mask = prop.graph.full_mask();
        for id in solution.iter() {
            cut_mask[to_new[id as usize].expect("zero arc maps") as usize] = false;
        }
        assert!(
            minfb::oracle::is_skew_cut(&prop.graph, &cut_mask, &sources, &sinks),
            "solution is not a skew cut for its own potential partition"
        );
        // Part 2: every skew cut at this budget verifies as a deletion set.
        let budget = solution.len();
        let mut alive = prop.graph.full_mask();
        first_subset_where::<()>(prop.graph.arc_count(), budget, |subset| {
            for &id in subset {
                alive[id as usize] = false;
            }
            if minfb::oracle::is_skew_cut(&prop.graph, &alive, &sources, &sinks) {
                let original: DeletionSet =
                    subset.iter().map(|&i| prop.arc_back_map[i as usize]).collect();
                assert!(
                    verify_solution(&g, &original, budget).unwrap().valid(),
                    "skew cut fails to verify as a deletion set"
                );
            }
            for &id in subset {
                alive[id as usize] = true;
            }
            None
        });
        exercised += 1;
        continue 'outer;
    }
    assert!(exercised >= 20, "correspondence exercised only {exercised} times");
    println!("[PASS] zero-arc skew correspondence on {exercised} instances");
}

/// Dichotomy behind the few-positive-arcs solver: without short negative
/// cycles, every negative cycle has an arc on no non-negative cycle.
#[test]
fn short_cycle_or_representative_arc() {
    let mut rng = rng(0xE7);
    let mut exercised = 0;
    for _ in 0..600 {
        let g = random_digraph(&mut rng, 8, 14, &[-1, 1]);
        let w_plus = g.w_plus();
        let threshold = 2 * w_plus * w_plus + 2 * w_plus;
        let cycles = minfb::oracle::enumerate_simple_cycles(&g);
        let negative: Vec<_> = cycles.iter().filter(|c| c.weight() < 0).collect();
        if negative.is_empty() || negative.iter().any(|c| c.len() <= threshold) {
            continue;
        }
        exercised += 1;
        for cycle in &negative {
            let has_representative = cycle
                .arc_ids()
                .iter()
                .any(|&a| !nonneg_cycle_through_arc(&g, a).unwrap());
            assert!(has_representative, "negative cycle without representative arc");
        }
    }
    assert!(exercised >= 3, "dichotomy premise exercised only {exercised} times");
}

#[test]
fn subset_dfas_matches_oracle() {
    let mut rng = rng(0xE8);
    for _ in 0..150 {
        let g = random_digraph(&mut rng, 6, 12, &[0]);
        let m = g.arc_count();
        if m == 0 {
            continue;
        }
        let u: Vec<u32> = (0..m as u32).filter(|_| rng.gen_bool(0.4)).collect();
        let k = rng.gen_range(0..=3usize);
        let mine = solve_subset_dfas(&g, &u, k).unwrap();
        let reference = brute_force_subset_dfas(&g, &u, k).unwrap();
        assert_eq!(mine.is_some(), reference.is_some());
        let min_mine = (0..=k).find_map(|b| solve_subset_dfas(&g, &u, b).unwrap().map(|s| s.len()));
        assert_eq!(min_mine, reference.map(|s| s.len()));
    }
}

#[test]
fn color_coding_agrees_with_exhaustive_search() {
    let mut rng = rng(0xE9);
    for _ in 0..40 {
        let g = random_digraph(&mut rng, 6, 10, &[-1, 1]);
        if g.w_plus() > 3 {
            continue; // keep trial counts reasonable
        }
        for arc in 0..g.arc_count() as u32 {
            let exact = nonneg_cycle_through_arc(&g, arc).unwrap();
            let cc = nonneg_cycle_through_arc_with(
                &g,
                &g.full_mask(),
                arc,
                PathSearchMode::ColorCoding { failure_prob: 1e-6, seed: 0xCC },
            )
            .unwrap();
            assert_eq!(exact, cc);
        }
    }
}

/// Decomposition widths cross-checked against an independent branch and
/// bound; nice conversion preserves width; treedepth sandwich holds.
#[test]
fn decomposition_cross_checks() {
    let mut rng = rng(0xEA);
    for _ in 0..60 {
        let g = random_digraph(&mut rng, 9, 16, &weight_range(-1, 1));
        let n = g.vertex_count();
        let edges = g.underlying_undirected_edges();
        let dec = compute_tree_decomposition(&g);
        let exact = treewidth_by_ordering_search(n, &edges);
        assert!(dec.width() >= exact, "width below treewidth is impossible");
        if n <= 14 {
            // The production path is exact up to 14 vertices.
            assert_eq!(dec.width(), exact, "exact-range width off");
        }
        let nice = make_nice(&g, &dec).unwrap();
        assert_eq!(nice.width(), dec.width(), "nice conversion changed width");
        assert!(validate_nice(&g, &nice).is_ok());

        let td = compute_treedepth(&g);
        assert!(td.exact);
        assert!(td.witnesses(n, &edges), "elimination forest misses an edge");
        let pw = pathwidth_by_subset_dp(n, &edges);
        assert!(exact <= pw, "tw <= pw violated");
        if n > 1 && !edges.is_empty() {
            assert!(pw <= td.depth - 1, "pw <= td - 1 violated");
        }
        // The dynamic program's table estimate is consistent with the bags.
        let est = table_estimate(&nice, minfb::dp::PartitionFamilySpec::Singleton, 0, 1);
        assert!(est >= nice.nodes.len() as u128);
    }
    println!("[PASS] decomposition cross-checks");
}

/// Undirected structure premise of the treedepth branching bound.
#[test]
fn treedepth_bounds_paths_and_cycles() {
    let mut rng = rng(0xEB);
    for _ in 0..80 {
        let g = random_digraph(&mut rng, 8, 12, &[0]);
        let n = g.vertex_count();
        let edges = g.underlying_undirected_edges();
        let td = compute_treedepth(&g).depth;
        let cycle_bound = 1usize << td.saturating_sub(1).min(32);
        let path_bound = (1usize << td.min(32)) - 1;
        for len in undirected_cycle_lengths(n, &edges) {
            assert!(len <= cycle_bound, "undirected cycle of length {len} exceeds 2^(td-1)");
        }
        assert!(
            undirected_longest_path(n, &edges) <= path_bound,
            "path longer than 2^td - 1"
        );
    }
}

/// Ordered-partition counts match the enumerator across small sizes.
#[test]
fn ordered_partition_counts() {
    let expected = [1u128, 1, 3, 13, 75, 541, 4683];
    for (n, &count) in expected.iter().enumerate() {
        let items: Vec<u32> = (0..n as u32).collect();
        assert_eq!(
            enumerate_ordered_partitions(&items, 10).unwrap().len() as u128,
            count,
            "ordered Bell number mismatch at {n}"
        );
        assert_eq!(minfb::skew::ordered_partition_count(n), count);
    }
}

/// Partition gadgets only ever carry one positive arc, whatever the input.
#[test]
fn partition_gadget_positive_arc_count() {
    let mut rng = rng(0xEC);
    for _ in 0..30 {
        let len = rng.gen_range(1..=5usize);
        let mut numbers: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=6u64)).collect();
        if numbers.iter().sum::<u64>() % 2 == 1 {
            numbers.push(1);
        }
        let inst = gen_partition_gadget(&numbers).unwrap();
        assert_eq!(inst.graph.positive_arcs().len(), 1);
    }
}

/// The text format round-trips arbitrary graphs and renders canonically.
#[test]
fn graph_text_format_round_trips() {
    let mut rng = rng(0xED);
    for _ in 0..200 {
        let g = random_digraph(&mut rng, 9, 20, &weight_range(-9, 9));
        let text = minfb::io::render_graph(&g);
        let back = minfb::io::parse_graph(&text).unwrap();
        assert_eq!(back, g, "parse(render(g)) changed the graph");
        assert_eq!(minfb::io::render_graph(&back), text, "rendering is not stable");
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }
}
