//! Graph text format.
//!
//! ```text
//! c optional comment lines
//! p ndfas <n> <m>
//! a <tail> <head> <weight>
//! ```
//!
//! Vertices are 1-indexed in the file. Arc ids are assigned `0..m-1` in file
//! order. Fields are whitespace-separated, integers in decimal with an
//! optional leading minus, lines end with LF.

use crate::graph::{GraphError, WeightedDigraph};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    MissingHeader,
    DuplicateHeader { line: usize },
    BadHeader { line: usize, reason: String },
    BadArcLine { line: usize, reason: String },
    ArcBeforeHeader { line: usize },
    UnknownLine { line: usize },
    ArcCountMismatch { declared: usize, found: usize },
    Graph(GraphError),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::MissingHeader => write!(f, "missing `p ndfas <n> <m>` header"),
            FormatError::DuplicateHeader { line } => write!(f, "line {line}: second header line"),
            FormatError::BadHeader { line, reason } => write!(f, "line {line}: bad header: {reason}"),
            FormatError::BadArcLine { line, reason } => {
                write!(f, "line {line}: bad arc line: {reason}")
            }
            FormatError::ArcBeforeHeader { line } => {
                write!(f, "line {line}: arc line before header")
            }
            FormatError::UnknownLine { line } => write!(f, "line {line}: unknown line type"),
            FormatError::ArcCountMismatch { declared, found } => {
                write!(f, "header declares {declared} arcs but {found} were given")
            }
            FormatError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<GraphError> for FormatError {
    fn from(e: GraphError) -> Self {
        FormatError::Graph(e)
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedDigraph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs: Vec<(u32, u32, i64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match fields.next().unwrap() {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(FormatError::DuplicateHeader { line });
                }
                let kind = fields.next().unwrap_or("");
                if kind != "ndfas" {
                    return Err(FormatError::BadHeader {
                        line,
                        reason: format!("expected problem type `ndfas`, got `{kind}`"),
                    });
                }
                let n = parse_field::<usize>(fields.next(), line, "vertex count")?;
                let m = parse_field::<usize>(fields.next(), line, "arc count")?;
                if fields.next().is_some() {
                    return Err(FormatError::BadHeader { line, reason: "trailing fields".into() });
                }
                header = Some((n, m));
            }
            "a" => {
                let (n, _) = header.ok_or(FormatError::ArcBeforeHeader { line })?;
                let tail = parse_arc_field::<u64>(fields.next(), line, "tail")?;
                let head = parse_arc_field::<u64>(fields.next(), line, "head")?;
                let weight = parse_arc_field::<i64>(fields.next(), line, "weight")?;
                if fields.next().is_some() {
                    return Err(FormatError::BadArcLine { line, reason: "trailing fields".into() });
                }
                for (name, v) in [("tail", tail), ("head", head)] {
                    if v < 1 || v > n as u64 {
                        return Err(FormatError::BadArcLine {
                            line,
                            reason: format!("{name} {v} outside 1..={n}"),
                        });
                    }
                }
                arcs.push((tail as u32 - 1, head as u32 - 1, weight));
            }
            _ => return Err(FormatError::UnknownLine { line }),
        }
    }
    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if arcs.len() != m {
        return Err(FormatError::ArcCountMismatch { declared: m, found: arcs.len() });
    }
    Ok(WeightedDigraph::new(n, arcs)?)
}

/// Canonical rendering: header, then arcs in id order, LF line endings, no
/// comment lines.
pub fn render_graph(g: &WeightedDigraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p ndfas {} {}\n", g.vertex_count(), g.arc_count()));
    for a in g.arcs() {
        out.push_str(&format!("a {} {} {}\n", a.tail + 1, a.head + 1, a.weight));
    }
    out
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    name: &str,
) -> Result<T, FormatError> {
    field
        .ok_or_else(|| FormatError::BadHeader { line, reason: format!("missing {name}") })?
        .parse()
        .map_err(|_| FormatError::BadHeader { line, reason: format!("unparsable {name}") })
}

fn parse_arc_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    name: &str,
) -> Result<T, FormatError> {
    field
        .ok_or_else(|| FormatError::BadArcLine { line, reason: format!("missing {name}") })?
        .parse()
        .map_err(|_| FormatError::BadArcLine { line, reason: format!("unparsable {name}") })
}
