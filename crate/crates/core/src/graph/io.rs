//! Text and DOT formats for graphs.
//!
//! ```text
//! graph <name> <n> <m>
//! <u> <v>            (m lines, 0-based vertex indices)
//! ```
//! `#` starts a comment. Graphs with dead vertices are compacted on output.

use std::fmt::Write as _;

use super::{GraphError, MultiGraph, VertexId};

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

/// Strips comments and blank lines, keeping 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn write_graph(g: &MultiGraph) -> String {
    write_graph_with_comments(g, &[])
}

/// Writes the graph; `comments` are emitted as `# ...` lines after the header.
pub fn write_graph_with_comments(g: &MultiGraph, comments: &[String]) -> String {
    let (c, _, _) = g.compact();
    let name = g.name().unwrap_or("g");
    let mut out = format!("graph {} {} {}\n", name, c.vertex_count(), c.edge_count());
    for line in comments {
        let _ = writeln!(out, "# {line}");
    }
    for (_, u, v) in c.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<MultiGraph, GraphError> {
    let mut graphs = parse_graphs(text)?;
    match graphs.len() {
        1 => Ok(graphs.pop().unwrap()),
        0 => Err(parse_err(0, "no graph header")),
        n => Err(parse_err(0, format!("expected one graph, found {n}"))),
    }
}

/// Parses a concatenation of graphs (used for forbidden-minor lists).
pub fn parse_graphs(text: &str) -> Result<Vec<MultiGraph>, GraphError> {
    let mut out = Vec::new();
    let mut lines = content_lines(text).peekable();
    while let Some((ln, header)) = lines.next() {
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "graph" {
            return Err(parse_err(ln, "expected `graph <name> <n> <m>`"));
        }
        let n: usize = parts[2].parse().map_err(|_| parse_err(ln, "bad vertex count"))?;
        let m: usize = parts[3].parse().map_err(|_| parse_err(ln, "bad edge count"))?;
        let mut g = MultiGraph::with_vertices(n).named(parts[1]);
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or_else(|| parse_err(ln, "missing edge lines"))?;
            let uv: Vec<&str> = l.split_whitespace().collect();
            if uv.len() != 2 {
                return Err(parse_err(ln, "expected `<u> <v>`"));
            }
            let u: u32 = uv[0].parse().map_err(|_| parse_err(ln, "bad vertex"))?;
            let v: u32 = uv[1].parse().map_err(|_| parse_err(ln, "bad vertex"))?;
            if u as usize >= n || v as usize >= n {
                return Err(parse_err(ln, "vertex index out of range"));
            }
            g.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
        out.push(g);
    }
    Ok(out)
}

/// Comment lines (without the leading `#`) in order of appearance.
pub fn comments(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#').map(|c| c.trim().to_string()))
        .collect()
}

/// DOT export. `color` optionally assigns a colour class to each vertex id
/// (used for cover fibres).
pub fn to_dot(g: &MultiGraph, color: Option<&dyn Fn(VertexId) -> usize>) -> String {
    const PALETTE: [&str; 10] = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
        "#17becf",
    ];
    let name: String = g
        .name()
        .unwrap_or("g")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let mut out = format!("graph {name} {{\n");
    for v in g.vertices() {
        match color {
            Some(f) => {
                let c = f(v);
                let _ = writeln!(
                    out,
                    "  {v} [style=filled, fillcolor=\"{}\", label=\"{v}/{c}\"];",
                    PALETTE[c % PALETTE.len()]
                );
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (_, u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
