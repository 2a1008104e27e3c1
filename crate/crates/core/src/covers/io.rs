//! Text formats for covers and voltage assignments.
//!
//! ```text
//! cover <name> over <basename> ply <p>
//! map <cover-vertex> <base-vertex>
//! edge <u> <v> [<base-edge>]
//!
//! voltage <basename> p <p>
//! perm <edge> <image of 0> ... <image of p-1>
//! ```
//! Covers are written with both graphs compacted; the base edge of every
//! cover edge is written so that parallel edges stay unambiguous.

use std::fmt::Write as _;

use super::{CoverError, CoverMap, VoltageAssignment};
use crate::graph::io::content_lines;
use crate::graph::{EdgeId, MultiGraph, VertexId};

fn err(line: usize, msg: impl Into<String>) -> CoverError {
    CoverError::Parse { line, msg: msg.into() }
}

/// Writes the cover. The base must be written with `write_graph` alongside,
/// which compacts it the same way.
pub fn write_cover(c: &CoverMap, ply: usize) -> String {
    let (cover, cv, ce) = c.cover.compact();
    let (_, bv, be) = c.base.compact();
    let mut out = format!(
        "cover {} over {} ply {ply}\n",
        c.cover.name().unwrap_or("cover"),
        c.base.name().unwrap_or("base")
    );
    for w in c.cover.vertices() {
        let img = c.image(w).and_then(|v| bv[v.index()]);
        if let (Some(nw), Some(nv)) = (cv[w.index()], img) {
            let _ = writeln!(out, "map {nw} {nv}");
        }
    }
    for (f, _, _) in c.cover.edges() {
        let (x, y) = cover.endpoints(ce[f.index()].unwrap()).unwrap();
        match c.edge_image(f).and_then(|e| be[e.index()]) {
            Some(e) => writeln!(out, "edge {x} {y} {e}"),
            None => writeln!(out, "edge {x} {y}"),
        }
        .unwrap();
    }
    out
}

fn num<T: std::str::FromStr>(line: usize, s: Option<&&str>, what: &str) -> Result<T, CoverError> {
    s.and_then(|s| s.parse().ok()).ok_or_else(|| err(line, format!("bad {what}")))
}

/// Reads a cover of `base` (as compacted on output). Edges without an
/// explicit base edge are mapped through the vertex map. Returns the map and
/// the ply stated in the header.
pub fn parse_cover(base: &MultiGraph, text: &str) -> Result<(CoverMap, usize), CoverError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty cover file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 6 || h[0] != "cover" || h[2] != "over" || h[4] != "ply" {
        return Err(err(ln, "expected `cover <name> over <basename> ply <p>`"));
    }
    let ply: usize = num(ln, h.get(5), "ply")?;
    let mut vmap: Vec<Option<VertexId>> = Vec::new();
    let mut edges: Vec<(usize, u32, u32, Option<u32>)> = Vec::new();
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        match parts[0] {
            "map" if parts.len() == 3 => {
                let w: usize = num(ln, parts.get(1), "cover vertex")?;
                let v: u32 = num(ln, parts.get(2), "base vertex")?;
                if !base.has_vertex(VertexId(v)) {
                    return Err(err(ln, format!("unknown base vertex {v}")));
                }
                if vmap.len() <= w {
                    vmap.resize(w + 1, None);
                }
                if vmap[w].replace(VertexId(v)).is_some() {
                    return Err(err(ln, format!("cover vertex {w} mapped twice")));
                }
            }
            "edge" if parts.len() == 3 || parts.len() == 4 => {
                let x: u32 = num(ln, parts.get(1), "endpoint")?;
                let y: u32 = num(ln, parts.get(2), "endpoint")?;
                let e = match parts.get(3) {
                    Some(s) => Some(num::<u32>(ln, Some(s), "base edge")?),
                    None => None,
                };
                edges.push((ln, x, y, e));
            }
            _ => return Err(err(ln, format!("unrecognised line `{l}`"))),
        }
    }
    if let Some(w) = vmap.iter().position(Option::is_none) {
        return Err(err(0, format!("cover vertex {w} has no map line")));
    }
    let mut cover = MultiGraph::with_vertices(vmap.len()).named(h[1]);
    let mut emap = Vec::new();
    for (ln, x, y, e) in edges {
        if x as usize >= vmap.len() || y as usize >= vmap.len() {
            return Err(err(ln, "endpoint has no map line"));
        }
        cover.add_edge(VertexId(x), VertexId(y)).unwrap();
        let image = match e {
            Some(e) if base.has_edge_id(EdgeId(e)) => EdgeId(e),
            Some(e) => return Err(err(ln, format!("unknown base edge {e}"))),
            None => {
                let (a, b) = (vmap[x as usize].unwrap(), vmap[y as usize].unwrap());
                match base.edges_between(a, b).as_slice() {
                    [f] => *f,
                    [] => return Err(err(ln, format!("no base edge between {a} and {b}"))),
                    _ => return Err(err(ln, "several base edges fit; name one")),
                }
            }
        };
        emap.push(Some(image));
    }
    Ok((CoverMap::new(base.clone(), cover, vmap, emap), ply))
}

pub fn write_voltage(va: &VoltageAssignment) -> String {
    let mut out = format!("voltage {} p {}\n", va.base.name().unwrap_or("base"), va.ply);
    for e in va.assigned() {
        let imgs: Vec<String> = va.get(e).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "perm {e} {}", imgs.join(" "));
    }
    out
}

pub fn parse_voltage(base: &MultiGraph, text: &str) -> Result<VoltageAssignment, CoverError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty voltage file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "voltage" || h[2] != "p" {
        return Err(err(ln, "expected `voltage <basename> p <p>`"));
    }
    let p: usize = num(ln, h.get(3), "ply")?;
    if p == 0 {
        return Err(err(ln, "ply must be positive"));
    }
    let mut va = VoltageAssignment::identity(base.clone(), p);
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts[0] != "perm" || parts.len() < 2 {
            return Err(err(ln, "expected `perm <edge> <images>`"));
        }
        let e: u32 = num(ln, parts.get(1), "edge")?;
        let imgs = parts[2..].iter().map(|s| s.parse::<u32>().map_err(|_| err(ln, "bad image"))).collect::<Result<_, _>>()?;
        va.set(EdgeId(e), imgs).map_err(|e| err(ln, e.to_string()))?;
    }
    Ok(va)
}

#[cfg(test)]
mod tests {
    use super::super::{derived_cover, verify_cover};
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn cover_round_trip() {
        let mut va = VoltageAssignment::identity(complete(4), 2);
        va.set(EdgeId(5), vec![1, 0]).unwrap();
        let c = derived_cover(&va);
        let text = write_cover(&c, 2);
        assert!(text.starts_with("cover K4x2 over K4 ply 2\nmap 0 0\nmap 1 0\n"), "{text}");
        let (back, ply) = parse_cover(&c.base, &text).unwrap();
        assert_eq!(ply, 2);
        assert_eq!(back, c);
        assert_eq!(verify_cover(&back), Ok(2));
        // the base edge column is optional for simple bases
        let bare: String =
            text.lines().map(|l| if l.starts_with("edge") { l.rsplit_once(' ').unwrap().0 } else { l }).collect::<Vec<_>>().join("\n");
        assert_eq!(parse_cover(&c.base, &bare).unwrap().0, c);
    }

    #[test]
    fn voltage_round_trip() {
        let mut va = VoltageAssignment::identity(cycle(4).named("c4"), 3);
        va.set(EdgeId(2), vec![2, 0, 1]).unwrap();
        let text = write_voltage(&va);
        assert_eq!(text, "voltage c4 p 3\nperm 2 2 0 1\n");
        assert_eq!(parse_voltage(&va.base, &text).unwrap(), va);
    }

    #[test]
    fn parse_errors() {
        let g = cycle(3);
        assert!(matches!(parse_cover(&g, "cover a over b"), Err(CoverError::Parse { line: 1, .. })));
        assert!(matches!(parse_cover(&g, "cover a over b ply 1\nmap 0 7"), Err(CoverError::Parse { line: 2, .. })));
        assert!(matches!(parse_voltage(&g, "voltage g p 2\nperm 0 0 0"), Err(CoverError::Parse { line: 2, .. })));
    }
}
