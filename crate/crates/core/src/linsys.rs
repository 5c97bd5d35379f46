//! Difference-constraint systems and their graph view.
//!
//! A system is a list of rows `x_pos - x_neg <= rhs` with integer right-hand
//! sides plus a deletion budget `k`. Rows map one-to-one onto arcs
//! `(pos, neg)` of weight `rhs`, so feasibility blockers of the system and
//! negative directed feedback arc sets of the graph are in bijection.

use crate::graph::{ArcId, DeletionSet, Potential, WeightedDigraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// One normalized row: `x[pos] - x[neg] <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub id: u32,
    pub pos: u32,
    pub neg: u32,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    variable_names: Vec<String>,
    rows: Vec<Row>,
    budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemError {
    Json(String),
    UnknownVariable { row: usize, name: String },
    DuplicateVariableInRow { row: usize, name: String },
    DuplicateVariableName(String),
    BadOperator { row: usize, op: String },
    NegativeBudget(i64),
    UnmappedArc(ArcId),
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::Json(e) => write!(f, "malformed system document: {e}"),
            SystemError::UnknownVariable { row, name } => {
                write!(f, "constraint {row}: unknown variable `{name}`")
            }
            SystemError::DuplicateVariableInRow { row, name } => {
                write!(
                    f,
                    "constraint {row}: variable `{name}` appears with both signs; \
                     a difference constraint needs one +1 and one -1 on distinct variables"
                )
            }
            SystemError::DuplicateVariableName(name) => {
                write!(f, "variable `{name}` declared twice")
            }
            SystemError::BadOperator { row, op } => {
                write!(f, "constraint {row}: unsupported operator `{op}`")
            }
            SystemError::NegativeBudget(k) => write!(f, "budget k = {k} must be non-negative"),
            SystemError::UnmappedArc(id) => write!(f, "arc id {id} has no constraint row"),
        }
    }
}

impl std::error::Error for SystemError {}

#[derive(Deserialize)]
struct SystemDoc {
    variables: Vec<String>,
    constraints: Vec<ConstraintDoc>,
    k: i64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConstraintDoc {
    Le { pos: String, neg: String, rhs: i64 },
    Op { lhs_pos: String, lhs_neg: String, op: String, rhs: i64 },
}

impl ConstraintSystem {
    pub fn new(
        variable_names: Vec<String>,
        rows: Vec<(u32, u32, i64)>,
        budget: usize,
    ) -> Result<Self, SystemError> {
        let mut seen = BTreeSet::new();
        for name in &variable_names {
            if !seen.insert(name.clone()) {
                return Err(SystemError::DuplicateVariableName(name.clone()));
            }
        }
        let nv = variable_names.len() as u32;
        let mut stored = Vec::new();
        for (idx, (pos, neg, rhs)) in rows.into_iter().enumerate() {
            if pos >= nv || neg >= nv {
                return Err(SystemError::UnknownVariable {
                    row: idx,
                    name: format!("#{}", pos.max(neg)),
                });
            }
            if pos == neg {
                return Err(SystemError::DuplicateVariableInRow {
                    row: idx,
                    name: variable_names[pos as usize].clone(),
                });
            }
            stored.push(Row { id: idx as u32, pos, neg, rhs });
        }
        Ok(ConstraintSystem { variable_names, rows: stored, budget })
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variable_names
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

/// Parses the JSON system document. Rows are normalized into `<=` form in
/// input order: a `>=` row is negated, an `=` row becomes two rows.
pub fn parse_system(text: &str) -> Result<ConstraintSystem, SystemError> {
    let doc: SystemDoc = serde_json::from_str(text).map_err(|e| SystemError::Json(e.to_string()))?;
    if doc.k < 0 {
        return Err(SystemError::NegativeBudget(doc.k));
    }
    let mut index: HashMap<&str, u32> = HashMap::new();
    for (i, name) in doc.variables.iter().enumerate() {
        if index.insert(name.as_str(), i as u32).is_some() {
            return Err(SystemError::DuplicateVariableName(name.clone()));
        }
    }
    let lookup = |row: usize, name: &str| -> Result<u32, SystemError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| SystemError::UnknownVariable { row, name: name.to_string() })
    };
    let mut rows: Vec<(u32, u32, i64)> = Vec::new();
    for (ridx, c) in doc.constraints.iter().enumerate() {
        match c {
            ConstraintDoc::Le { pos, neg, rhs } => {
                let (p, n) = (lookup(ridx, pos)?, lookup(ridx, neg)?);
                if p == n {
                    return Err(SystemError::DuplicateVariableInRow { row: ridx, name: pos.clone() });
                }
                rows.push((p, n, *rhs));
            }
            ConstraintDoc::Op { lhs_pos, lhs_neg, op, rhs } => {
                let (p, n) = (lookup(ridx, lhs_pos)?, lookup(ridx, lhs_neg)?);
                if p == n {
                    return Err(SystemError::DuplicateVariableInRow {
                        row: ridx,
                        name: lhs_pos.clone(),
                    });
                }
                match op.as_str() {
                    "<=" => rows.push((p, n, *rhs)),
                    ">=" => rows.push((n, p, -rhs)),
                    "=" => {
                        rows.push((p, n, *rhs));
                        rows.push((n, p, -rhs));
                    }
                    other => {
                        return Err(SystemError::BadOperator { row: ridx, op: other.to_string() })
                    }
                }
            }
        }
    }
    ConstraintSystem::new(doc.variables, rows, doc.k as usize)
}

/// Bijection between constraint rows and arc ids. The conversion assigns arc
/// id `i` to row id `i`, so the map is the identity on indices; it is kept
/// explicit so callers never rely on that accidentally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowArcMap {
    arc_to_row: Vec<u32>,
}

impl RowArcMap {
    pub fn row_of(&self, arc: ArcId) -> Result<u32, SystemError> {
        self.arc_to_row.get(arc as usize).copied().ok_or(SystemError::UnmappedArc(arc))
    }

    pub fn len(&self) -> usize {
        self.arc_to_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arc_to_row.is_empty()
    }
}

/// One vertex per variable; per row one arc `(pos, neg)` of weight `rhs`.
pub fn system_to_digraph(sys: &ConstraintSystem) -> (WeightedDigraph, RowArcMap) {
    let arcs: Vec<(u32, u32, i64)> = sys.rows().iter().map(|r| (r.pos, r.neg, r.rhs)).collect();
    let g = WeightedDigraph::new(sys.variable_names().len(), arcs)
        .expect("valid system maps to a valid graph");
    let map = RowArcMap { arc_to_row: sys.rows().iter().map(|r| r.id).collect() };
    (g, map)
}

/// Inverse of `system_to_digraph` up to variable naming (`v1..vn`).
pub fn digraph_to_system(g: &WeightedDigraph) -> ConstraintSystem {
    let names = (1..=g.vertex_count()).map(|i| format!("v{i}")).collect();
    let rows = g.arcs().iter().map(|a| (a.tail, a.head, a.weight)).collect();
    ConstraintSystem::new(names, rows, 0).expect("valid graph maps to a valid system")
}

/// Translates a deletion set of arcs into the corresponding row indices.
pub fn blocker_from_arcs(s: &DeletionSet, map: &RowArcMap) -> Result<BTreeSet<u32>, SystemError> {
    s.iter().map(|id| map.row_of(id)).collect()
}

/// Machine-readable solve outcome for a constraint system.
#[derive(Debug, Clone, Serialize)]
pub struct BlockerReport {
    pub status: String,
    pub blocker_rows: Vec<u32>,
    pub size: usize,
    pub potential: BTreeMap<String, i64>,
}

impl BlockerReport {
    pub fn solved(sys: &ConstraintSystem, rows: &BTreeSet<u32>, pi: &Potential) -> Self {
        let potential = sys
            .variable_names()
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), pi.value(i as u32)))
            .collect();
        BlockerReport {
            status: "solved".into(),
            blocker_rows: rows.iter().copied().collect(),
            size: rows.len(),
            potential,
        }
    }

    pub fn no_solution() -> Self {
        BlockerReport {
            status: "no_solution".into(),
            blocker_rows: Vec::new(),
            size: 0,
            potential: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_feasible_potential;

    #[test]
    fn parses_single_row() {
        let sys = parse_system(
            r#"{"variables": ["x", "y"], "constraints": [{"pos": "x", "neg": "y", "rhs": -1}], "k": 0}"#,
        )
        .unwrap();
        assert_eq!(sys.variable_names(), &["x", "y"]);
        assert_eq!(sys.rows().len(), 1);
        assert_eq!(sys.rows()[0], Row { id: 0, pos: 0, neg: 1, rhs: -1 });
        assert_eq!(sys.budget(), 0);
    }

    #[test]
    fn rejects_same_variable_twice() {
        let err = parse_system(
            r#"{"variables": ["x"], "constraints": [{"pos": "x", "neg": "x", "rhs": 0}], "k": 0}"#,
        )
        .unwrap_err();
        assert!(matches!(err, SystemError::DuplicateVariableInRow { row: 0, .. }));
    }

    #[test]
    fn normalizes_ge_and_eq() {
        let sys = parse_system(
            r#"{"variables": ["x", "y"],
                "constraints": [
                  {"lhs_pos": "x", "lhs_neg": "y", "op": ">=", "rhs": 2},
                  {"lhs_pos": "x", "lhs_neg": "y", "op": "=", "rhs": 5}
                ],
                "k": 1}"#,
        )
        .unwrap();
        // x - y >= 2 becomes y - x <= -2; the equation becomes two rows.
        assert_eq!(sys.rows().len(), 3);
        assert_eq!((sys.rows()[0].pos, sys.rows()[0].neg, sys.rows()[0].rhs), (1, 0, -2));
        assert_eq!((sys.rows()[1].pos, sys.rows()[1].neg, sys.rows()[1].rhs), (0, 1, 5));
        assert_eq!((sys.rows()[2].pos, sys.rows()[2].neg, sys.rows()[2].rhs), (1, 0, -5));
    }

    #[test]
    fn infeasible_pair_maps_to_negative_two_cycle() {
        let sys = parse_system(
            r#"{"variables": ["x", "y"],
                "constraints": [{"pos": "x", "neg": "y", "rhs": -1},
                                 {"pos": "y", "neg": "x", "rhs": -1}],
                "k": 1}"#,
        )
        .unwrap();
        let (g, _) = system_to_digraph(&sys);
        assert!(build_feasible_potential(&g).is_none());
    }

    #[test]
    fn round_trips() {
        let sys = parse_system(
            r#"{"variables": ["a", "b", "c"],
                "constraints": [{"pos": "a", "neg": "b", "rhs": -1},
                                 {"pos": "b", "neg": "c", "rhs": 3},
                                 {"pos": "a", "neg": "c", "rhs": 0}],
                "k": 2}"#,
        )
        .unwrap();
        let (g, _) = system_to_digraph(&sys);
        let back = digraph_to_system(&g);
        let rows_a: Vec<_> = sys.rows().iter().map(|r| (r.pos, r.neg, r.rhs)).collect();
        let rows_b: Vec<_> = back.rows().iter().map(|r| (r.pos, r.neg, r.rhs)).collect();
        assert_eq!(rows_a, rows_b);

        let (g2, _) = system_to_digraph(&back);
        assert_eq!(g, g2);
    }

    #[test]
    fn parallel_arcs_become_duplicate_rows() {
        let g = WeightedDigraph::new(2, [(0, 1, -1), (0, 1, -1)]).unwrap();
        let sys = digraph_to_system(&g);
        assert_eq!(sys.rows().len(), 2);
        assert_eq!(sys.rows()[0].pos, sys.rows()[1].pos);
    }

    #[test]
    fn blocker_translation_is_identity_on_indices() {
        let sys = parse_system(
            r#"{"variables": ["x", "y"],
                "constraints": [{"pos": "x", "neg": "y", "rhs": -1},
                                 {"pos": "y", "neg": "x", "rhs": -1}],
                "k": 1}"#,
        )
        .unwrap();
        let (_, map) = system_to_digraph(&sys);
        let rows = blocker_from_arcs(&DeletionSet::from_ids([1]), &map).unwrap();
        assert_eq!(rows.into_iter().collect::<Vec<_>>(), vec![1]);
        assert!(blocker_from_arcs(&DeletionSet::from_ids([9]), &map).is_err());
    }
}
