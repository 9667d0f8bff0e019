//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! vertices: 4
//! A -> B
//! B -- C
//! C <-> D
//! E
//! ```
//!
//! Vertices are numbered in order of first appearance. A line holding a single
//! name declares an (possibly isolated) vertex. The optional `vertices: N`
//! header fixes the vertex count; unnamed slots get `X<i>` names.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::dag::default_names;
use super::{Dag, EdgeKind, GraphError, MixedGraph};

/// A graph together with its vertex names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub graph: MixedGraph,
    pub names: Vec<String>,
}

impl EdgeList {
    pub fn new(graph: MixedGraph, names: Vec<String>) -> Result<Self, GraphError> {
        if names.len() != graph.n_vertices() {
            return Err(GraphError::SizeMismatch {
                left: graph.n_vertices(),
                right: names.len(),
            });
        }
        Ok(Self { graph, names })
    }

    pub fn from_dag(dag: &Dag) -> Self {
        Self {
            graph: MixedGraph::from_dag(dag),
            names: dag.names(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Interprets the graph as a DAG; every edge must be directed.
    pub fn to_dag(&self) -> Result<Dag, GraphError> {
        let mut edges = Vec::new();
        for (x, y, kind) in self.graph.edges() {
            match kind {
                EdgeKind::Forward => edges.push((x, y)),
                EdgeKind::Backward => edges.push((y, x)),
                _ => {
                    return Err(GraphError::NotDirected(
                        self.names[x].clone(),
                        self.names[y].clone(),
                    ))
                }
            }
        }
        Dag::new(self.graph.n_vertices(), edges)?.with_labels(self.names.clone())
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        parse_edge_list(text)
    }

    pub fn to_text(&self) -> String {
        write_edge_list(&self.graph, &self.names)
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, GraphError> {
    let mut forced: Option<usize> = None;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, EdgeKind, usize)> = Vec::new();

    let mut intern = |name: &str, line: usize| -> Result<usize, GraphError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(GraphError::Parse {
                line,
                message: format!("invalid vertex name {name:?}"),
            });
        }
        Ok(*index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        }))
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            if forced.is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: "duplicate vertices header".into(),
                });
            }
            forced = Some(rest.trim().parse().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("bad vertex count {:?}", rest.trim()),
            })?);
            continue;
        }
        match split_edge(line) {
            Some((a, kind, b)) => {
                let x = intern(a, line_no)?;
                let y = intern(b, line_no)?;
                edges.push((x, y, kind, line_no));
            }
            None => {
                intern(line, line_no)?;
            }
        }
    }

    if let Some(n) = forced {
        if names.len() > n {
            return Err(GraphError::Parse {
                line: 0,
                message: format!("{} distinct vertices exceed declared count {n}", names.len()),
            });
        }
        for (slot, default) in default_names(n).into_iter().enumerate().skip(names.len()) {
            let name = if index.contains_key(&default) {
                format!("{default}_{slot}")
            } else {
                default
            };
            names.push(name);
        }
    }

    let mut graph = MixedGraph::new(names.len());
    for (x, y, kind, line) in edges {
        graph.add_edge(x, y, kind).map_err(|e| GraphError::Parse {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(EdgeList { graph, names })
}

fn split_edge(line: &str) -> Option<(&str, EdgeKind, &str)> {
    for (op, kind) in [
        ("<->", EdgeKind::Bidirected),
        ("->", EdgeKind::Forward),
        ("<-", EdgeKind::Backward),
        ("--", EdgeKind::Undirected),
    ] {
        if let Some(p) = line.find(op) {
            return Some((line[..p].trim(), kind, line[p + op.len()..].trim()));
        }
    }
    None
}

/// Serialises `graph`. Reading the output back reproduces the same indices.
pub fn write_edge_list(graph: &MixedGraph, names: &[String]) -> String {
    let n = graph.n_vertices();
    let mut out = String::new();
    writeln!(out, "vertices: {n}").unwrap();

    let mut lines = Vec::new();
    let mut appearance = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for (x, y, kind) in graph.edges() {
        let (a, op, b) = match kind {
            EdgeKind::Forward => (x, "->", y),
            EdgeKind::Backward => (y, "->", x),
            EdgeKind::Undirected => (x, "--", y),
            EdgeKind::Bidirected => (x, "<->", y),
        };
        for v in [a, b] {
            if !seen[v] {
                seen[v] = true;
                appearance.push(v);
            }
        }
        lines.push(format!("{} {op} {}", names[a], names[b]));
    }
    let in_order = appearance.iter().enumerate().all(|(i, &v)| i == v);
    let default = default_names(n);
    if in_order {
        for l in lines {
            writeln!(out, "{l}").unwrap();
        }
        // trailing isolated vertices only need naming up to the last
        // non-default name; the header fills in the rest
        let first = appearance.len();
        if let Some(last) = (first..n).rev().find(|&v| names[v] != default[v]) {
            for name in &names[first..=last] {
                writeln!(out, "{name}").unwrap();
            }
        }
    } else {
        for name in names {
            writeln!(out, "{name}").unwrap();
        }
        for l in lines {
            writeln!(out, "{l}").unwrap();
        }
    }
    out
}
