use super::{CoverError, CoverMap};
use crate::embedding::{Dart, EmbeddedGraph, EmbeddingError};
use crate::graph::{is_connected, MultiGraph, VertexId};

/// A two-sheeted cover together with its orientable embedding.
#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub map: CoverMap,
    pub embedding: EmbeddedGraph,
}

/// Orientation double cover of an embedded graph. After normalising the
/// signatures on a spanning tree, sheet 0 keeps each rotation and sheet 1
/// reverses it; positive edges stay within a sheet and negative edges cross.
/// Vertex `(v, s)` is `2 rank(v) + s`; edge copy `s` of `e` leaves sheet `s`
/// at its first end and is `2 rank(e) + s`.
pub fn orientation_double_cover(eg: &EmbeddedGraph) -> Result<DoubleCover, CoverError> {
    let g = eg.graph();
    if !is_connected(g) {
        return Err(EmbeddingError::Disconnected.into());
    }
    let mut eg = eg.clone();
    eg.normalize();
    let mut vrank = vec![0u32; g.vertex_bound()];
    let mut erank = vec![0u32; g.edge_bound()];
    let verts: Vec<VertexId> = g.vertices().collect();
    for (r, v) in verts.iter().enumerate() {
        vrank[v.index()] = r as u32;
    }
    let mut cover = MultiGraph::with_vertices(2 * verts.len());
    let mut vmap = Vec::new();
    for &v in &verts {
        vmap.extend([Some(v), Some(v)]);
    }
    let mut emap = Vec::new();
    for (r, (e, u, v)) in g.edges().enumerate() {
        erank[e.index()] = r as u32;
        let cross = u32::from(eg.signature(e) < 0);
        for s in 0..2 {
            cover.add_edge(VertexId(2 * vrank[u.index()] + s), VertexId(2 * vrank[v.index()] + (s ^ cross))).unwrap();
            emap.push(Some(e));
        }
    }
    let lift = |d: Dart, sheet: u32| {
        let cross = u32::from(eg.signature(d.edge) < 0);
        let copy = if d.side == 0 { sheet } else { sheet ^ cross };
        Dart::new(crate::graph::EdgeId(2 * erank[d.edge.index()] + copy), d.side)
    };
    let mut rotation = vec![Vec::new(); cover.vertex_bound()];
    for &v in &verts {
        let r = eg.rotation(v);
        rotation[2 * vrank[v.index()] as usize] = r.iter().map(|&d| lift(d, 0)).collect();
        rotation[2 * vrank[v.index()] as usize + 1] = r.iter().rev().map(|&d| lift(d, 1)).collect();
    }
    if let Some(name) = g.name() {
        cover.set_name(format!("{name}~"));
    }
    let signature = vec![1; cover.edge_bound()];
    let embedding = EmbeddedGraph::new(cover.clone(), rotation, signature)?;
    Ok(DoubleCover { map: CoverMap::new(g.clone(), cover, vmap, emap), embedding })
}
