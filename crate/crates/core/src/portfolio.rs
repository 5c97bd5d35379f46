//! Algorithm selection and the solve entry point used by the CLI.
//!
//! Selection follows the tractability of the instance at hand: the trivial
//! case first, then the {-1, +1} branching solvers by estimated branch
//! count, then the decomposition DP with the smallest estimated table, then
//! treedepth branching, the skew-separator route, and finally the exhaustive
//! oracle, each gated by an explicit cost estimate against a resource cap.
//! Every answer is re-verified before it is reported.

use crate::branching::{
    cycle_length_bound_from_treedepth, solve_bounded_cycle_branching_with,
    solve_trivial_few_negative, BranchConfig, TrivialOutcome,
};
use crate::decomp::{compute_tree_decomposition, compute_treedepth, make_nice};
use crate::dp::{dp_solve_with, table_estimate, DpOptions, PartitionFamilySpec};
use crate::graph::{verify_solution, DeletionSet, Potential, WeightedDigraph};
use crate::oracle::brute_force_ndfas;
use crate::pmone::{solve_pm1_few_positive_with, PathSearchMode};
use crate::skew::{ordered_partition_count, solve_nonzero_count_with, SkewConfig};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Trivial,
    TdPlusK,
    Pm1WMinus,
    Pm1WPlus,
    DpTwWMinus,
    DpTwWPlus,
    DpTd,
    SkewNonzero,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Trivial,
        Algorithm::TdPlusK,
        Algorithm::Pm1WMinus,
        Algorithm::Pm1WPlus,
        Algorithm::DpTwWMinus,
        Algorithm::DpTwWPlus,
        Algorithm::DpTd,
        Algorithm::SkewNonzero,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Trivial => "trivial",
            Algorithm::TdPlusK => "td-k",
            Algorithm::Pm1WMinus => "pm1-wminus",
            Algorithm::Pm1WPlus => "pm1-wplus",
            Algorithm::DpTwWMinus => "dp-tw-wminus",
            Algorithm::DpTwWPlus => "dp-tw-wplus",
            Algorithm::DpTd => "dp-td",
            Algorithm::SkewNonzero => "skew-nonzero",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn parse(name: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ResourceCaps {
    /// Rough upper bound on table entries or branch leaves a solver may cost.
    pub max_cost: f64,
    /// Cap on the ground-set size for ordered-partition enumeration.
    pub partition_cap: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps { max_cost: 1e8, partition_cap: 10 }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Run exactly this solver instead of routing.
    pub algorithm: Option<Algorithm>,
    /// Report a minimum-size blocker instead of any blocker within budget.
    pub minimum: bool,
    /// Force sequential, reproducible execution.
    pub deterministic: bool,
    pub threads: usize,
    pub caps: ResourceCaps,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: None,
            minimum: false,
            deterministic: true,
            threads: 1,
            caps: ResourceCaps::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub blocker: Option<DeletionSet>,
    pub algorithm: Algorithm,
    /// Feasible potential of the residual graph, when solved.
    pub certificate: Option<Potential>,
    /// Whether the reported size is known to be minimum.
    pub minimal: bool,
}

#[derive(Debug, Clone)]
pub enum SolveFailure {
    Input(String),
    Resource { estimates: Vec<(&'static str, f64)> },
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveFailure::Input(msg) => write!(f, "input error: {msg}"),
            SolveFailure::Resource { estimates } => {
                write!(f, "no solver fits the resource cap; estimated costs:")?;
                for (name, cost) in estimates {
                    write!(f, " {name}={cost:.3e}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for SolveFailure {}

/// Per-solver cost estimates for an instance.
pub fn cost_estimates(g: &WeightedDigraph, k: usize) -> Vec<(&'static str, f64)> {
    let n = g.vertex_count() as f64;
    let m = g.arc_count() as f64;
    let wm = g.w_minus() as f64;
    let wp = g.w_plus() as f64;
    let kf = k as i32;
    let mut out = Vec::new();
    out.push(("trivial", m.max(1.0)));
    out.push(("pm1-wminus", (2.0 * wm).max(1.0).powi(kf) * n * n * m.max(1.0)));
    let threshold = 2.0 * wp * wp + 2.0 * wp + 1.0;
    out.push(("pm1-wplus", threshold.powi(kf) * n.powi(3).max(1.0)));
    let td = compute_treedepth(g);
    let l = cycle_length_bound_from_treedepth(td.depth) as f64;
    out.push(("td-k", l.powi(kf) * n.powi(3).max(1.0)));
    let dec = compute_tree_decomposition(g);
    if let Ok(nice) = make_nice(g, &dec) {
        let est_wm =
            table_estimate(&nice, PartitionFamilySpec::Singleton, 0, g.w_minus() as i64) as f64;
        let est_wp = table_estimate(
            &nice,
            PartitionFamilySpec::AllOrderedPartitions,
            0,
            g.w_plus() as i64,
        ) as f64;
        let td_range = 2f64.powi(td.depth.min(300) as i32);
        let est_td = nice
            .nodes
            .iter()
            .map(|node| (td_range + 1.0).powi(node.bag.len() as i32))
            .sum::<f64>();
        out.push(("dp-tw-wminus", est_wm));
        out.push(("dp-tw-wplus", est_wp));
        out.push(("dp-td", est_td));
    }
    let z = 2.0 * (wp + wm);
    let partitions = if z <= 20.0 { ordered_partition_count(z as usize) as f64 } else { f64::MAX };
    out.push((
        "skew-nonzero",
        2f64.powf(wp + wm).min(f64::MAX / 2.0) * partitions * 4f64.powi(kf) * n.powi(3).max(1.0),
    ));
    let mut oracle_cost = 1.0f64;
    for i in 0..k.min(g.arc_count()) {
        oracle_cost = oracle_cost * (m - i as f64) / (i as f64 + 1.0);
    }
    out.push(("oracle", oracle_cost * n * m.max(1.0)));
    out
}

fn weights_within(g: &WeightedDigraph, lo: i64, hi: i64) -> bool {
    g.arcs().iter().all(|a| a.weight >= lo && a.weight <= hi)
}

fn weights_pm1(g: &WeightedDigraph) -> bool {
    g.arcs().iter().all(|a| a.weight == -1 || a.weight == 1)
}

/// Solves the instance with the routed or requested algorithm. The returned
/// set always passes `verify_solution`.
pub fn solve_portfolio(
    g: &WeightedDigraph,
    k: usize,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolveFailure> {
    let algorithm = match opts.algorithm {
        Some(a) => a,
        None => route(g, k, opts)?,
    };
    let blocker = run_algorithm(g, k, algorithm, opts)?;
    let certificate = match &blocker {
        Some(s) => {
            let report = verify_solution(g, s, k)
                .map_err(|e| SolveFailure::Input(e.to_string()))?;
            assert!(report.valid(), "solver {algorithm} produced an invalid set");
            report.certificate
        }
        None => None,
    };
    let minimal = opts.minimum || matches!(algorithm, Algorithm::Oracle);
    Ok(SolveOutcome { blocker, algorithm, certificate, minimal })
}

fn route(g: &WeightedDigraph, k: usize, opts: &SolveOptions) -> Result<Algorithm, SolveFailure> {
    let cap = opts.caps.max_cost;
    let estimates = cost_estimates(g, k);
    let cost = |name: &str| {
        estimates
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, c)| c)
            .unwrap_or(f64::MAX)
    };
    if g.w_minus() <= k && !opts.minimum {
        return Ok(Algorithm::Trivial);
    }
    if weights_pm1(g) {
        let (minus, plus) = (cost("pm1-wminus"), cost("pm1-wplus"));
        let best = minus.min(plus);
        if best <= cap {
            return Ok(if minus <= plus { Algorithm::Pm1WMinus } else { Algorithm::Pm1WPlus });
        }
    }
    if weights_within(g, -1, 1) {
        let choices = [
            (Algorithm::DpTwWMinus, cost("dp-tw-wminus")),
            (Algorithm::DpTwWPlus, cost("dp-tw-wplus")),
            (Algorithm::DpTd, cost("dp-td")),
        ];
        let best = choices
            .into_iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .filter(|&(_, c)| c <= cap);
        if let Some((alg, _)) = best {
            return Ok(alg);
        }
    }
    if cost("td-k") <= cap {
        return Ok(Algorithm::TdPlusK);
    }
    if cost("skew-nonzero") <= cap {
        return Ok(Algorithm::SkewNonzero);
    }
    if cost("oracle") <= cap {
        return Ok(Algorithm::Oracle);
    }
    // Refusal lists only the solvers whose preconditions this instance meets.
    let pm1 = weights_pm1(g);
    let unit = weights_within(g, -1, 1);
    let applicable = estimates
        .into_iter()
        .filter(|(name, _)| match *name {
            "trivial" => g.w_minus() <= k,
            "pm1-wminus" | "pm1-wplus" => pm1,
            name if name.starts_with("dp-") => unit,
            _ => true,
        })
        .collect();
    Err(SolveFailure::Resource { estimates: applicable })
}

fn run_algorithm(
    g: &WeightedDigraph,
    k: usize,
    algorithm: Algorithm,
    opts: &SolveOptions,
) -> Result<Option<DeletionSet>, SolveFailure> {
    let branch_cfg = BranchConfig {
        monotone_arc_ids: false,
        parallel: opts.threads > 1 && !opts.deterministic,
    };
    let budgets = |solve: &mut dyn FnMut(usize) -> Result<Option<DeletionSet>, SolveFailure>|
     -> Result<Option<DeletionSet>, SolveFailure> {
        if opts.minimum {
            for b in 0..=k {
                if let Some(s) = solve(b)? {
                    return Ok(Some(s));
                }
            }
            Ok(None)
        } else {
            solve(k)
        }
    };
    match algorithm {
        Algorithm::Trivial => match solve_trivial_few_negative(g, k) {
            TrivialOutcome::Solved(s) => Ok(Some(s)),
            TrivialOutcome::NotApplicable => Err(SolveFailure::Input(format!(
                "trivial solver needs w- <= k, got w- = {} and k = {k}",
                g.w_minus()
            ))),
        },
        Algorithm::TdPlusK => {
            let td = compute_treedepth(g);
            let l = cycle_length_bound_from_treedepth(td.depth);
            budgets(&mut |b| Ok(solve_bounded_cycle_branching_with(g, b, l, &branch_cfg).0))
        }
        Algorithm::Pm1WMinus => budgets(&mut |b| {
            crate::branching::solve_pm1_few_negative_with(g, b, &branch_cfg)
                .map(|(r, _)| r)
                .map_err(|e| SolveFailure::Input(e.to_string()))
        }),
        Algorithm::Pm1WPlus => budgets(&mut |b| {
            solve_pm1_few_positive_with(g, b, PathSearchMode::Exhaustive)
                .map(|(r, _)| r)
                .map_err(|e| SolveFailure::Input(e.to_string()))
        }),
        Algorithm::DpTwWMinus => dp_route(g, k, PartitionFamilySpec::Singleton, g.w_minus() as i64, opts),
        Algorithm::DpTwWPlus => {
            dp_route(g, k, PartitionFamilySpec::AllOrderedPartitions, g.w_plus() as i64, opts)
        }
        Algorithm::DpTd => {
            let td = compute_treedepth(g);
            let bound = 1i64.checked_shl(td.depth.min(62) as u32).unwrap_or(i64::MAX);
            dp_route(g, k, PartitionFamilySpec::Singleton, bound, opts)
        }
        Algorithm::SkewNonzero => {
            let cfg = SkewConfig::default();
            budgets(&mut |b| {
                solve_nonzero_count_with(g, b, &cfg, opts.caps.partition_cap).map_err(|e| match e {
                    crate::skew::SkewError::PartitionCapExceeded { count, .. } => {
                        SolveFailure::Resource {
                            estimates: vec![("skew-nonzero", count as f64)],
                        }
                    }
                    other => SolveFailure::Input(other.to_string()),
                })
            })
        }
        Algorithm::Oracle => Ok(brute_force_ndfas(g, k)),
    }
}

fn dp_route(
    g: &WeightedDigraph,
    k: usize,
    family: PartitionFamilySpec,
    b: i64,
    opts: &SolveOptions,
) -> Result<Option<DeletionSet>, SolveFailure> {
    if !weights_within(g, -1, 1) {
        return Err(SolveFailure::Input(
            "decomposition DP needs weights in {-1, 0, 1}".into(),
        ));
    }
    let dec = compute_tree_decomposition(g);
    let nice = make_nice(g, &dec).map_err(|e| SolveFailure::Input(e.to_string()))?;
    let dp_opts = DpOptions {
        max_table_entries: opts.caps.max_cost as u128,
        ..DpOptions::default()
    };
    match dp_solve_with(g, &nice, family, 0, b, &dp_opts) {
        Ok(sol) => Ok((sol.deleted.len() <= k).then_some(sol.deleted)),
        Err(crate::dp::DpError::Resource { entries, .. }) => Err(SolveFailure::Resource {
            estimates: vec![("dp", entries as f64)],
        }),
        Err(e) => Err(SolveFailure::Input(e.to_string())),
    }
}
