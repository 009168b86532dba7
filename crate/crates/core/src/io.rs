//! Graph file formats.
//!
//! * Text: first line `n m`, then `m` lines `u v` with 0-based ids.
//! * JSON: `{"n":…,"edges":[[u,v],…],"coords":[[…],…]}`, `coords` optional.
//!
//! Writers emit edges as `u < v`, sorted lexicographically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Text,
    Json,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Vec<i64>>>,
}

pub fn parse_text(input: &str) -> Result<Graph> {
    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        edges.push(parse_pair(line, i + 2)?);
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header declares {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, edges).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!("line {lineno}: expected two integers, got {line:?}"))),
    }
}

pub fn write_text(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.num_edges());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_json(input: &str) -> Result<Graph> {
    let raw: JsonGraph = serde_json::from_str(input)?;
    let g = Graph::from_edges(raw.n, raw.edges.iter().map(|e| (e[0], e[1])))
        .map_err(|e| Error::Parse(e.to_string()))?;
    match raw.coords {
        Some(c) => g.with_coords(c).map_err(|e| Error::Parse(e.to_string())),
        None => Ok(g),
    }
}

pub fn write_json(g: &Graph) -> String {
    let raw = JsonGraph {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        coords: g.coords().map(<[_]>::to_vec),
    };
    let mut s = serde_json::to_string(&raw).expect("graph serialization cannot fail");
    s.push('\n');
    s
}

/// Parses either format; `None` sniffs JSON by a leading `{`.
pub fn parse_graph(input: &str, format: Option<GraphFormat>) -> Result<Graph> {
    let format = format.unwrap_or_else(|| {
        if input.trim_start().starts_with('{') {
            GraphFormat::Json
        } else {
            GraphFormat::Text
        }
    });
    match format {
        GraphFormat::Text => parse_text(input),
        GraphFormat::Json => parse_json(input),
    }
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Text => write_text(g),
        GraphFormat::Json => write_json(g),
    }
}
