//! Command-line front end: solve, generate, verify.
//!
//! Exit codes: 0 solved (or verified valid), 1 proven no-solution within k
//! (or invalid solution), 2 input error, 3 resource error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use minfb::generators::{
    gen_bedc_chain, gen_from_dfas, gen_multicolored_clique_gadget, gen_partition_gadget,
    subdivide_to_unit_weights, GeneratedInstance,
};
use minfb::graph::{verify_solution, DeletionSet, Potential, WeightedDigraph};
use minfb::io::{parse_graph, render_graph};
use minfb::linsys::{blocker_from_arcs, parse_system, system_to_digraph, RowArcMap};
use minfb::portfolio::{solve_portfolio, Algorithm, ResourceCaps, SolveFailure, SolveOptions};
use serde_json::json;
use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

const EXIT_SOLVED: u8 = 0;
const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_RESOURCE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "minfb", about = "Minimum feasibility blockers for difference constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a feasibility blocker / negative directed feedback arc set.
    Solve(SolveArgs),
    /// Emit a benchmark instance with known answer metadata.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Check a proposed solution against an instance.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Ndfas,
    MinfbJson,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: String,
    /// Input format; sniffed from the content when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Deletion budget; defaults to the `k` embedded in minfb-json inputs.
    #[arg(long)]
    k: Option<usize>,
    /// Force one algorithm: trivial | td-k | pm1-wminus | pm1-wplus |
    /// dp-tw-wminus | dp-tw-wplus | dp-td | skew-nonzero | oracle.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Sequential, reproducible execution.
    #[arg(long)]
    deterministic: bool,
    /// Report a minimum-size blocker instead of any within budget.
    #[arg(long)]
    minimum: bool,
    /// Refuse solvers whose estimated cost exceeds this.
    #[arg(long, default_value_t = 1e8)]
    resource_cap: f64,
    #[arg(long, conflicts_with = "human")]
    json: bool,
    #[arg(long)]
    human: bool,
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// All-weights -1 instance from a digraph (feedback arc set).
    Dfas {
        #[arg(long)]
        input: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: String,
    },
    /// Number-partition gadget chain (budget = number count).
    Partition {
        /// Comma-separated positive integers, e.g. 1,1,2.
        #[arg(long)]
        numbers: String,
        #[arg(long)]
        out: String,
    },
    /// Multicolored-clique gadget.
    Mcclique {
        /// Classes as label lists: "a,b|c".
        #[arg(long)]
        classes: String,
        /// Edges as label pairs: "a-c,b-c".
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        out: String,
    },
    /// Bounded-edge-cut chain over a DAG (vertices 1-indexed).
    BedcChain {
        #[arg(long)]
        input: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: String,
    },
    /// Unit-weight subdivision of an instance.
    Subdivide {
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: String,
    /// JSON file with "arc_ids", "blocker_arcs" or "blocker_rows" and
    /// optionally "k".
    #[arg(long)]
    solution: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Generate(cmd) => cmd_generate(cmd),
        Command::Verify(args) => cmd_verify(args),
    };
    ExitCode::from(code)
}

fn input_error(msg: &str) -> u8 {
    println!("{}", json!({ "status": "input_error", "message": msg }));
    EXIT_INPUT_ERROR
}

struct LoadedInstance {
    graph: WeightedDigraph,
    embedded_k: Option<usize>,
    /// Row translation and names when the input was a constraint system.
    system: Option<(RowArcMap, Vec<String>)>,
}

fn load_instance(path: &str, format: Option<InputFormat>) -> Result<LoadedInstance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let format = format.unwrap_or_else(|| {
        if text.trim_start().starts_with('{') {
            InputFormat::MinfbJson
        } else {
            InputFormat::Ndfas
        }
    });
    match format {
        InputFormat::Ndfas => {
            let graph = parse_graph(&text).map_err(|e| e.to_string())?;
            Ok(LoadedInstance { graph, embedded_k: None, system: None })
        }
        InputFormat::MinfbJson => {
            let sys = parse_system(&text).map_err(|e| e.to_string())?;
            let (graph, map) = system_to_digraph(&sys);
            Ok(LoadedInstance {
                graph,
                embedded_k: Some(sys.budget()),
                system: Some((map, sys.variable_names().to_vec())),
            })
        }
    }
}

fn potential_json(pi: &Potential, names: Option<&[String]>) -> serde_json::Value {
    let mut map = BTreeMap::new();
    for (i, &v) in pi.values().iter().enumerate() {
        let name = match names {
            Some(ns) => ns[i].clone(),
            None => format!("v{}", i + 1),
        };
        map.insert(name, v);
    }
    json!(map)
}

fn cmd_solve(args: SolveArgs) -> u8 {
    let loaded = match load_instance(&args.input, args.format) {
        Ok(l) => l,
        Err(e) => return input_error(&e),
    };
    let k = match args.k.or(loaded.embedded_k) {
        Some(k) => k,
        None => return input_error("no budget: pass --k or embed k in the system document"),
    };
    let algorithm = match args.algorithm.as_deref() {
        None => None,
        Some(name) => match Algorithm::parse(name) {
            Some(a) => Some(a),
            None => return input_error(&format!("unknown algorithm `{name}`")),
        },
    };
    if args.threads > 1 {
        // Build the global pool once; branching uses it when parallelism is on.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build_global();
    }
    let opts = SolveOptions {
        algorithm,
        minimum: args.minimum,
        deterministic: args.deterministic || args.threads <= 1,
        threads: args.threads,
        caps: ResourceCaps { max_cost: args.resource_cap, ..Default::default() },
    };
    let outcome = match solve_portfolio(&loaded.graph, k, &opts) {
        Ok(o) => o,
        Err(SolveFailure::Input(msg)) => return input_error(&msg),
        Err(SolveFailure::Resource { estimates }) => {
            let est: BTreeMap<&str, f64> = estimates.into_iter().collect();
            println!("{}", json!({ "status": "resource_error", "estimates": est }));
            return EXIT_RESOURCE_ERROR;
        }
    };
    let human = args.human;
    match outcome.blocker {
        Some(ref blocker) => {
            let arcs: Vec<u32> = blocker.iter().collect();
            let rows: Option<Vec<u32>> = loaded.system.as_ref().map(|(map, _)| {
                blocker_from_arcs(blocker, map)
                    .expect("solution arcs map to rows")
                    .into_iter()
                    .collect()
            });
            let names = loaded.system.as_ref().map(|(_, names)| names.as_slice());
            let potential = outcome
                .certificate
                .as_ref()
                .map(|pi| potential_json(pi, names))
                .unwrap_or(json!({}));
            if human {
                println!("solved with {} deletions using {}", blocker.len(), outcome.algorithm);
                println!("blocker arcs: {blocker}");
                if let Some(rows) = &rows {
                    println!("blocker rows: {rows:?}");
                }
            } else {
                let mut doc = json!({
                    "status": "solved",
                    "algorithm": outcome.algorithm.name(),
                    "size": blocker.len(),
                    "blocker_arcs": arcs,
                    "potential": potential,
                    "minimal": outcome.minimal,
                });
                if let Some(rows) = rows {
                    doc["blocker_rows"] = json!(rows);
                }
                println!("{doc}");
            }
            EXIT_SOLVED
        }
        None => {
            if human {
                println!("no solution of size at most {k} (algorithm {})", outcome.algorithm);
            } else {
                println!(
                    "{}",
                    json!({
                        "status": "no_solution",
                        "algorithm": outcome.algorithm.name(),
                        "k": k,
                    })
                );
            }
            EXIT_NO_SOLUTION
        }
    }
}

fn write_instance(out: &str, inst: &GeneratedInstance) -> Result<(), String> {
    let (text, meta) = inst.render();
    fs::write(out, text).map_err(|e| format!("cannot write {out}: {e}"))?;
    let meta_path = format!("{out}.meta.json");
    fs::write(&meta_path, meta).map_err(|e| format!("cannot write {meta_path}: {e}"))?;
    println!(
        "{}",
        json!({
            "status": "generated",
            "family": inst.meta.family,
            "out": out,
            "meta": meta_path,
            "n": inst.graph.vertex_count(),
            "m": inst.graph.arc_count(),
            "budget": inst.budget,
            "expected": inst.meta.expected,
        })
    );
    Ok(())
}

fn cmd_generate(cmd: GenerateCmd) -> u8 {
    let result: Result<(), String> = match cmd {
        GenerateCmd::Dfas { input, k, out } => {
            fs::read_to_string(&input)
                .map_err(|e| format!("cannot read {input}: {e}"))
                .and_then(|text| parse_graph(&text).map_err(|e| e.to_string()))
                .and_then(|g| write_instance(&out, &gen_from_dfas(&g, k)))
        }
        GenerateCmd::Partition { numbers, out } => parse_numbers(&numbers)
            .and_then(|ns| gen_partition_gadget(&ns).map_err(|e| e.to_string()))
            .and_then(|inst| write_instance(&out, &inst)),
        GenerateCmd::Mcclique { classes, edges, out } => {
            parse_classes_edges(&classes, &edges).and_then(|(cls, eds)| {
                gen_multicolored_clique_gadget(&cls, &eds)
                    .map_err(|e| e.to_string())
                    .and_then(|inst| write_instance(&out, &inst))
            })
        }
        GenerateCmd::BedcChain { input, s, t, k, l, out } => fs::read_to_string(&input)
            .map_err(|e| format!("cannot read {input}: {e}"))
            .and_then(|text| parse_graph(&text).map_err(|e| e.to_string()))
            .and_then(|g| {
                if s == 0 || t == 0 {
                    return Err("vertices are 1-indexed".into());
                }
                gen_bedc_chain(&g, s as u32 - 1, t as u32 - 1, k, l).map_err(|e| e.to_string())
            })
            .and_then(|inst| write_instance(&out, &inst)),
        GenerateCmd::Subdivide { input, out } => fs::read_to_string(&input)
            .map_err(|e| format!("cannot read {input}: {e}"))
            .and_then(|text| parse_graph(&text).map_err(|e| e.to_string()))
            .and_then(|g| {
                let (sub, _) = subdivide_to_unit_weights(&g);
                fs::write(&out, render_graph(&sub)).map_err(|e| format!("cannot write {out}: {e}"))?;
                println!(
                    "{}",
                    json!({
                        "status": "generated",
                        "family": "subdivide",
                        "out": out,
                        "n": sub.vertex_count(),
                        "m": sub.arc_count(),
                    })
                );
                Ok(())
            }),
    };
    match result {
        Ok(()) => EXIT_SOLVED,
        Err(e) => input_error(&e),
    }
}

fn parse_numbers(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("bad number `{p}`: {e}")))
        .collect()
}

fn parse_classes_edges(
    classes: &str,
    edges: &str,
) -> Result<(Vec<Vec<u32>>, Vec<(u32, u32)>), String> {
    let mut labels: BTreeMap<String, u32> = BTreeMap::new();
    let mut class_lists = Vec::new();
    for class in classes.split('|') {
        let mut list = Vec::new();
        for label in class.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let next = labels.len() as u32;
            if labels.insert(label.to_string(), next).is_some() {
                return Err(format!("label `{label}` appears twice"));
            }
            list.push(next);
        }
        if list.is_empty() {
            return Err("empty class".into());
        }
        class_lists.push(list);
    }
    let mut edge_list = Vec::new();
    for pair in edges.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = pair
            .split_once('-')
            .ok_or_else(|| format!("bad edge `{pair}`, expected `a-b`"))?;
        let &ua = labels.get(a.trim()).ok_or_else(|| format!("unknown label `{a}`"))?;
        let &ub = labels.get(b.trim()).ok_or_else(|| format!("unknown label `{b}`"))?;
        edge_list.push((ua, ub));
    }
    Ok((class_lists, edge_list))
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let loaded = match load_instance(&args.input, None) {
        Ok(l) => l,
        Err(e) => return input_error(&e),
    };
    let text = match fs::read_to_string(&args.solution) {
        Ok(t) => t,
        Err(e) => return input_error(&format!("cannot read {}: {e}", args.solution)),
    };
    let doc: serde_json::Value = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => return input_error(&format!("solution is not JSON: {e}")),
    };
    let ids: Vec<u32> = {
        let arr = doc
            .get("arc_ids")
            .or_else(|| doc.get("blocker_arcs"))
            .or_else(|| doc.get("blocker_rows"))
            .and_then(|v| v.as_array());
        match arr {
            Some(values) => {
                let mut ids = Vec::new();
                for v in values {
                    match v.as_u64() {
                        Some(id) => ids.push(id as u32),
                        None => return input_error("solution ids must be non-negative integers"),
                    }
                }
                ids
            }
            None => {
                return input_error(
                    "solution needs an `arc_ids`, `blocker_arcs` or `blocker_rows` array",
                )
            }
        }
    };
    let k = doc.get("k").and_then(|v| v.as_u64()).map(|v| v as usize).unwrap_or(ids.len());
    let set = DeletionSet::from_ids(ids);
    let report = match verify_solution(&loaded.graph, &set, k) {
        Ok(r) => r,
        Err(e) => return input_error(&e.to_string()),
    };
    let names = loaded.system.as_ref().map(|(_, names)| names.as_slice());
    println!(
        "{}",
        json!({
            "valid": report.valid(),
            "size_ok": report.size_ok,
            "acyclic_of_negatives": report.acyclic_of_negatives,
            "size": set.len(),
            "k": k,
            "potential": report.certificate.as_ref().map(|pi| potential_json(pi, names)),
        })
    );
    if report.valid() {
        EXIT_SOLVED
    } else {
        EXIT_NO_SOLUTION
    }
}
