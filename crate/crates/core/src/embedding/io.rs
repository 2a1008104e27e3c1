//! Text format for embeddings.
//!
//! ```text
//! embedding <graphname>
//! rot <v> <e>.<side> ...     (cyclic order)
//! sig <e> <+1|-1>
//! ```
//! Vertex and edge ids refer to the graph the embedding is read against.

use std::fmt::Write as _;

use super::{Dart, EmbeddedGraph, EmbeddingError};
use crate::graph::io::content_lines;
use crate::graph::{EdgeId, MultiGraph, VertexId};

pub fn write_embedding(eg: &EmbeddedGraph) -> String {
    let g = eg.graph();
    let mut out = format!("embedding {}\n", g.name().unwrap_or("g"));
    for v in g.vertices() {
        let _ = write!(out, "rot {v}");
        for d in eg.rotation(v) {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
    }
    for e in g.edge_ids() {
        let _ = writeln!(out, "sig {e} {}", if eg.signature(e) > 0 { "+1" } else { "-1" });
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> EmbeddingError {
    EmbeddingError::Parse { line, msg: msg.into() }
}

fn parse_dart(line: usize, s: &str) -> Result<Dart, EmbeddingError> {
    let (e, side) = s.split_once('.').ok_or_else(|| err(line, format!("bad dart `{s}`")))?;
    let e: u32 = e.parse().map_err(|_| err(line, format!("bad dart `{s}`")))?;
    let side = match side {
        "0" => 0,
        "1" => 1,
        _ => return Err(err(line, format!("bad dart side in `{s}`"))),
    };
    Ok(Dart::new(EdgeId(e), side))
}

/// Reads an embedding of `g`. Vertices without a `rot` line must be
/// isolated; edges without a `sig` line are positive.
pub fn parse_embedding(g: &MultiGraph, text: &str) -> Result<EmbeddedGraph, EmbeddingError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty embedding"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 || parts[0] != "embedding" {
        return Err(err(ln, "expected `embedding <graphname>`"));
    }
    let mut rotation: Vec<Option<Vec<Dart>>> = vec![None; g.vertex_bound()];
    let mut signature = vec![1i8; g.edge_bound()];
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        match parts[0] {
            "rot" => {
                let v: u32 = parts.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| err(ln, "bad vertex"))?;
                if !g.has_vertex(VertexId(v)) {
                    return Err(err(ln, format!("unknown vertex {v}")));
                }
                let darts = parts[2..].iter().map(|s| parse_dart(ln, s)).collect::<Result<Vec<_>, _>>()?;
                if rotation[v as usize].replace(darts).is_some() {
                    return Err(err(ln, format!("second rotation for vertex {v}")));
                }
            }
            "sig" => {
                if parts.len() != 3 {
                    return Err(err(ln, "expected `sig <e> <+1|-1>`"));
                }
                let e: u32 = parts[1].parse().map_err(|_| err(ln, "bad edge"))?;
                if !g.has_edge_id(EdgeId(e)) {
                    return Err(err(ln, format!("unknown edge {e}")));
                }
                signature[e as usize] = match parts[2] {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    s => return Err(err(ln, format!("bad signature `{s}`"))),
                };
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let rotation = rotation.into_iter().map(Option::unwrap_or_default).collect();
    EmbeddedGraph::new(g.clone(), rotation, signature)
}

#[cfg(test)]
mod tests {
    use crate::embedding::tests_support::{planar_k4, projective_loop};
    use super::*;

    #[test]
    fn round_trip() {
        for eg in [planar_k4(), projective_loop()] {
            let text = write_embedding(&eg);
            assert_eq!(parse_embedding(eg.graph(), &text).unwrap(), eg);
        }
        let text = write_embedding(&planar_k4());
        assert!(text.starts_with("embedding K4\nrot 0 0.0 1.0 2.0\n"), "{text}");
        assert!(text.contains("sig 5 +1"));
    }

    #[test]
    fn rejects_bad_input() {
        let g = planar_k4().graph().clone();
        assert!(matches!(parse_embedding(&g, "graph x"), Err(EmbeddingError::Parse { line: 1, .. })));
        assert!(matches!(parse_embedding(&g, "embedding k\nrot 0 0.2"), Err(EmbeddingError::Parse { line: 2, .. })));
        assert!(matches!(parse_embedding(&g, "embedding k\nrot 0 0.0"), Err(EmbeddingError::Malformed(_))));
        assert!(matches!(parse_embedding(&g, "embedding k\nsig 0 0"), Err(EmbeddingError::Parse { line: 2, .. })));
    }
}
