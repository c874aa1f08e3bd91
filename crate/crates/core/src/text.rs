//! Text forms of a graph: the two-column file format and inline literals.
//!
//! File format: a header line `V E`, then `E` lines `s t`. Blank lines and
//! lines starting with `#` are ignored. Literal: `V;s>t,s>t,…`.

use crate::error::GraphError;
use crate::graph::{OrientedGraph, Vertex};

fn parse_number<T: std::str::FromStr>(token: &str, what: &str) -> Result<T, GraphError> {
    token
        .parse()
        .map_err(|_| GraphError::Parse(format!("bad {what} `{token}`")))
}

/// Parses the file format.
pub fn parse_graph_text(text: &str) -> Result<OrientedGraph, GraphError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| GraphError::Parse("empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [v, e] = fields[..] else {
        return Err(GraphError::Parse(format!("header `{header}` is not `V E`")));
    };
    let vertex_count: u32 = parse_number(v, "vertex count")?;
    let edge_count: usize = parse_number(e, "edge count")?;
    let mut edges = Vec::with_capacity(edge_count);
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [s, t] = fields[..] else {
            return Err(GraphError::Parse(format!("edge line `{line}` is not `s t`")));
        };
        edges.push((parse_number::<Vertex>(s, "vertex")?, parse_number::<Vertex>(t, "vertex")?));
    }
    if edges.len() != edge_count {
        return Err(GraphError::Parse(format!(
            "header announces {edge_count} edges, found {}",
            edges.len()
        )));
    }
    OrientedGraph::new(vertex_count, edges)
}

/// Parses a literal `V;s>t,…`.
pub fn parse_literal(literal: &str) -> Result<OrientedGraph, GraphError> {
    let (v, rest) = literal
        .trim()
        .split_once(';')
        .ok_or_else(|| GraphError::Parse(format!("literal `{literal}` lacks `;`")))?;
    let vertex_count: u32 = parse_number(v.trim(), "vertex count")?;
    let mut edges = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (s, t) = item
            .split_once('>')
            .ok_or_else(|| GraphError::Parse(format!("edge `{item}` is not `s>t`")))?;
        edges.push((parse_number(s.trim(), "vertex")?, parse_number(t.trim(), "vertex")?));
    }
    OrientedGraph::new(vertex_count, edges)
}

pub fn to_graph_text(g: &OrientedGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (s, t) in g.edges() {
        out.push_str(&format!("{s} {t}\n"));
    }
    out
}
