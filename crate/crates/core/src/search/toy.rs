//! Brute-force decision pipeline for tiny graphs: list every connected graph
//! up to a vertex bound, keep those embeddable at a given genus, and report
//! the ones covering a graph from a supplied list.

use std::collections::HashMap;

use rayon::prelude::*;

use super::SearchError;
use crate::covers::{verify_cover, CoverMap};
use crate::embedding::{is_planar_fast, min_euler_genus_with, GenusOptions};
use crate::graph::{is_connected, is_isomorphic, MultiGraph, VertexId};

type Key = (usize, Vec<(usize, Vec<usize>)>);

fn invariant(g: &MultiGraph) -> Key {
    let mut v: Vec<(usize, Vec<usize>)> = g
        .vertices()
        .map(|x| {
            let mut nd: Vec<usize> = g.neighbors(x).into_iter().map(|y| g.degree(y)).collect();
            nd.sort_unstable();
            (g.degree(x), nd)
        })
        .collect();
    v.sort();
    (g.edge_count(), v)
}

/// Connected simple graphs on `1..=max_n` vertices, one per isomorphism
/// class, ordered by vertex count. Each graph on `n + 1` vertices arises
/// from one on `n` by adding a vertex joined to a non-empty subset, since
/// every connected graph has a vertex whose removal keeps it connected.
pub fn connected_graphs(max_n: usize) -> Result<Vec<MultiGraph>, SearchError> {
    if max_n > 10 {
        return Err(SearchError::TooManyVertices(max_n));
    }
    if max_n == 0 {
        return Ok(Vec::new());
    }
    let mut all = vec![MultiGraph::with_vertices(1)];
    let mut layer = all.clone();
    for n in 1..max_n {
        let candidates: Vec<MultiGraph> = layer
            .par_iter()
            .flat_map_iter(|g| {
                (1u32..1 << n).map(move |mask| {
                    let mut h = g.clone();
                    let x = h.add_vertex();
                    for i in 0..n as u32 {
                        if mask >> i & 1 == 1 {
                            h.add_edge(VertexId(i), x).unwrap();
                        }
                    }
                    h
                })
            })
            .collect();
        let mut buckets: HashMap<Key, Vec<MultiGraph>> = HashMap::new();
        let mut next = Vec::new();
        for h in candidates {
            let bucket = buckets.entry(invariant(&h)).or_default();
            if !bucket.iter().any(|o| is_isomorphic(o, &h).unwrap().is_some()) {
                bucket.push(h.clone());
                next.push(h);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}

/// A covering map from `g` onto `h`, if one exists. Both graphs must be
/// connected and simple. Vertices of `g` are assigned in BFS order; each new
/// vertex goes to an unused neighbour of its parent's image.
pub fn covers_graph(g: &MultiGraph, h: &MultiGraph) -> Result<Option<CoverMap>, SearchError> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    if nh == 0 || ng % nh != 0 || g.edge_count() * nh != h.edge_count() * ng || !is_connected(g) || !is_connected(h) {
        return Ok(None);
    }
    let mut order = Vec::with_capacity(ng);
    let mut parent = vec![None; g.vertex_bound()];
    let mut seen = vec![false; g.vertex_bound()];
    let root = g.vertices().next().unwrap();
    seen[root.index()] = true;
    order.push(root);
    let mut i = 0;
    while i < order.len() {
        let w = order[i];
        for x in g.neighbors(w) {
            if !seen[x.index()] {
                seen[x.index()] = true;
                parent[x.index()] = Some(w);
                order.push(x);
            }
        }
        i += 1;
    }
    let mut image: Vec<Option<VertexId>> = vec![None; g.vertex_bound()];
    if !assign(g, h, &order, &parent, 0, &mut image) {
        return Ok(None);
    }
    let c = CoverMap::from_vertex_map(h.clone(), g.clone(), image)?;
    verify_cover(&c)?;
    Ok(Some(c))
}

fn locally_injective(g: &MultiGraph, h: &MultiGraph, u: VertexId, image: &[Option<VertexId>]) -> bool {
    let Some(hu) = image[u.index()] else { return true };
    let mut used = Vec::new();
    for x in g.neighbors(u) {
        if let Some(hx) = image[x.index()] {
            if !h.has_edge(hu, hx) || used.contains(&hx) {
                return false;
            }
            used.push(hx);
        }
    }
    true
}

fn assign(
    g: &MultiGraph,
    h: &MultiGraph,
    order: &[VertexId],
    parent: &[Option<VertexId>],
    at: usize,
    image: &mut Vec<Option<VertexId>>,
) -> bool {
    let Some(&w) = order.get(at) else { return true };
    let candidates: Vec<VertexId> = match parent[w.index()] {
        None => h.vertices().collect(),
        Some(p) => h.neighbors(image[p.index()].unwrap()),
    };
    for v in candidates {
        if h.degree(v) != g.degree(w) {
            continue;
        }
        image[w.index()] = Some(v);
        let ok = locally_injective(g, h, w, image) && g.neighbors(w).into_iter().all(|x| locally_injective(g, h, x, image));
        if ok && assign(g, h, order, parent, at + 1, image) {
            return true;
        }
    }
    image[w.index()] = None;
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyHit {
    pub graph: MultiGraph,
    /// Position of the covered graph in the supplied list.
    pub target: usize,
    pub ply: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyReport {
    pub genus: usize,
    pub max_n: usize,
    pub graphs: usize,
    pub embeddable: usize,
    pub hits: Vec<ToyHit>,
}

fn embeds_within(g: &MultiGraph, genus: usize, opts: &GenusOptions) -> Result<bool, SearchError> {
    if is_planar_fast(g) {
        return Ok(true);
    }
    if genus == 0 {
        return Ok(false);
    }
    let r = min_euler_genus_with(g, opts)?;
    if r.genus <= genus {
        Ok(true)
    } else if r.lower_bound > genus {
        Ok(false)
    } else {
        Err(SearchError::Inconclusive { index: 0 })
    }
}

/// Every connected graph on at most `max_n` vertices that embeds with Euler
/// genus at most `genus` and covers some graph of `targets`.
pub fn decide_toy(genus: usize, targets: &[MultiGraph], max_n: usize, opts: &GenusOptions) -> Result<ToyReport, SearchError> {
    let graphs = connected_graphs(max_n)?;
    let per_graph: Vec<Result<(bool, Vec<ToyHit>), SearchError>> = graphs
        .par_iter()
        .map(|g| {
            if !embeds_within(g, genus, &GenusOptions { jobs: None, ..opts.clone() })? {
                return Ok((false, Vec::new()));
            }
            let mut hits = Vec::new();
            for (target, h) in targets.iter().enumerate() {
                if covers_graph(g, h)?.is_some() {
                    hits.push(ToyHit { graph: g.clone(), target, ply: g.vertex_count() / h.vertex_count() });
                }
            }
            Ok((true, hits))
        })
        .collect();
    let mut report = ToyReport { genus, max_n, graphs: graphs.len(), embeddable: 0, hits: Vec::new() };
    for r in per_graph {
        let (ok, hits) = r?;
        report.embeddable += usize::from(ok);
        report.hits.extend(hits);
    }
    Ok(report)
}
