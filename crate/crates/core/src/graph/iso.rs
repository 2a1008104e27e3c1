//! Exact isomorphism for small simple graphs by backtracking.

use super::{GraphError, MultiGraph, VertexId};

/// Largest vertex count accepted by [`is_isomorphic`].
pub const ISO_VERTEX_LIMIT: usize = 14;

struct Dense {
    ids: Vec<VertexId>,
    adj: Vec<u64>,
    deg: Vec<u32>,
}

impl Dense {
    fn new(g: &MultiGraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let mut pos = vec![usize::MAX; g.vertex_bound()];
        for (i, v) in ids.iter().enumerate() {
            pos[v.index()] = i;
        }
        let mut adj = vec![0u64; ids.len()];
        for (_, u, v) in g.edges() {
            let (a, b) = (pos[u.index()], pos[v.index()]);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let deg = adj.iter().map(|m| m.count_ones()).collect();
        Dense { ids, adj, deg }
    }

    // multiset of neighbour degrees, a cheap refinement invariant
    fn signature(&self, i: usize) -> (u32, Vec<u32>) {
        let mut nd: Vec<u32> = (0..self.ids.len())
            .filter(|&j| self.adj[i] >> j & 1 == 1)
            .map(|j| self.deg[j])
            .collect();
        nd.sort_unstable();
        (self.deg[i], nd)
    }
}

/// Adjacency-preserving bijection `g1 → g2` as (g1 vertex, g2 vertex) pairs, or
/// `None` when the graphs are not isomorphic. Both graphs must be simple with
/// at most [`ISO_VERTEX_LIMIT`] vertices.
pub fn is_isomorphic(
    g1: &MultiGraph,
    g2: &MultiGraph,
) -> Result<Option<Vec<(VertexId, VertexId)>>, GraphError> {
    find_isomorphism_with(g1, g2, &[])
}

pub fn find_isomorphism(
    g1: &MultiGraph,
    g2: &MultiGraph,
) -> Result<Option<Vec<(VertexId, VertexId)>>, GraphError> {
    find_isomorphism_with(g1, g2, &[])
}

/// Like [`is_isomorphic`] but with some pairs prescribed.
pub fn find_isomorphism_with(
    g1: &MultiGraph,
    g2: &MultiGraph,
    fixed: &[(VertexId, VertexId)],
) -> Result<Option<Vec<(VertexId, VertexId)>>, GraphError> {
    for g in [g1, g2] {
        if !g.is_simple() {
            return Err(GraphError::NotSimple("isomorphism needs simple graphs".into()));
        }
        if g.vertex_count() > ISO_VERTEX_LIMIT {
            return Err(GraphError::IsoBudget(g.vertex_count()));
        }
    }
    if g1.vertex_count() != g2.vertex_count()
        || g1.edge_count() != g2.edge_count()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        return Ok(None);
    }
    let a = Dense::new(g1);
    let b = Dense::new(g2);
    let n = a.ids.len();
    let sa: Vec<_> = (0..n).map(|i| a.signature(i)).collect();
    let sb: Vec<_> = (0..n).map(|i| b.signature(i)).collect();
    let mut forced = vec![None; n];
    for &(x, y) in fixed {
        let i = a.ids.iter().position(|&v| v == x);
        let j = b.ids.iter().position(|&v| v == y);
        match (i, j) {
            (Some(i), Some(j)) if sa[i] == sb[j] => forced[i] = Some(j),
            _ => return Ok(None),
        }
    }
    // forced vertices first, then high degree first for early pruning
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (forced[i].is_none(), std::cmp::Reverse(a.deg[i])));
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend(&a, &b, &sa, &sb, &order, &forced, 0, &mut map, &mut used) {
        Ok(Some((0..n).map(|i| (a.ids[i], b.ids[map[i]])).collect()))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Dense,
    b: &Dense,
    sa: &[(u32, Vec<u32>)],
    sb: &[(u32, Vec<u32>)],
    order: &[usize],
    forced: &[Option<usize>],
    depth: usize,
    map: &mut [usize],
    used: &mut u64,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let i = order[depth];
    let candidates: Vec<usize> = match forced[i] {
        Some(j) => vec![j],
        None => (0..b.ids.len()).collect(),
    };
    for j in candidates {
        if *used >> j & 1 == 1 || sa[i] != sb[j] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&k| {
            let ak = a.adj[i] >> k & 1;
            let bk = b.adj[j] >> map[k] & 1;
            ak == bk
        });
        if !consistent {
            continue;
        }
        map[i] = j;
        *used |= 1 << j;
        if extend(a, b, sa, sb, order, forced, depth + 1, map, used) {
            return true;
        }
        *used &= !(1 << j);
        map[i] = usize::MAX;
    }
    false
}

/// Injective map `pattern → host` sending edges to edges (subgraph
/// monomorphism). Works for any size; `budget` bounds the number of search
/// nodes.
pub fn find_subgraph_embedding(
    pattern: &MultiGraph,
    host: &MultiGraph,
    budget: u64,
) -> Result<Option<Vec<(VertexId, VertexId)>>, GraphError> {
    let (p, pv, _) = pattern.compact();
    let (h, hv, _) = host.compact();
    let np = p.vertex_count();
    let nh = h.vertex_count();
    if np > nh || p.edge_count() > h.edge_count() {
        return Ok(None);
    }
    let hadj: Vec<Vec<bool>> = (0..nh)
        .map(|i| {
            let mut row = vec![false; nh];
            for w in h.neighbors(VertexId(i as u32)) {
                row[w.index()] = true;
            }
            row
        })
        .collect();
    let pn: Vec<Vec<usize>> = (0..np)
        .map(|i| {
            let mut s: Vec<usize> = p.neighbor_set(VertexId(i as u32)).iter().map(|v| v.index()).collect();
            s.sort();
            s
        })
        .collect();
    // BFS-ish order so each vertex after the first has a mapped neighbour when possible
    let mut order = Vec::with_capacity(np);
    let mut placed = vec![false; np];
    while order.len() < np {
        let start = (0..np)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| pn[i].len())
            .unwrap();
        placed[start] = true;
        order.push(start);
        let mut k = order.len() - 1;
        while k < order.len() {
            let v = order[k];
            for &w in &pn[v] {
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
            k += 1;
        }
    }
    let hdeg: Vec<usize> = (0..nh).map(|i| h.neighbor_set(VertexId(i as u32)).len()).collect();
    let mut map = vec![usize::MAX; np];
    let mut used = vec![false; nh];
    let mut nodes = 0u64;
    let found = mono(&pn, &hadj, &hdeg, &order, 0, &mut map, &mut used, &mut nodes, budget)?;
    if !found {
        return Ok(None);
    }
    let inv_p: Vec<VertexId> = invert(&pv, np);
    let inv_h: Vec<VertexId> = invert(&hv, nh);
    Ok(Some((0..np).map(|i| (inv_p[i], inv_h[map[i]])).collect()))
}

fn invert(map: &[Option<VertexId>], n: usize) -> Vec<VertexId> {
    let mut out = vec![VertexId(0); n];
    for (old, new) in map.iter().enumerate() {
        if let Some(nw) = new {
            out[nw.index()] = VertexId(old as u32);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn mono(
    pn: &[Vec<usize>],
    hadj: &[Vec<bool>],
    hdeg: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
    nodes: &mut u64,
    budget: u64,
) -> Result<bool, GraphError> {
    if depth == order.len() {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return Err(GraphError::SearchBudget(budget));
    }
    let i = order[depth];
    let anchor = pn[i].iter().find(|&&w| map[w] != usize::MAX).copied();
    let candidates: Vec<usize> = match anchor {
        Some(w) => (0..hadj.len()).filter(|&j| hadj[map[w]][j]).collect(),
        None => (0..hadj.len()).collect(),
    };
    for j in candidates {
        if used[j] || hdeg[j] < pn[i].len() {
            continue;
        }
        if !pn[i].iter().all(|&w| map[w] == usize::MAX || hadj[map[w]][j]) {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if mono(pn, hadj, hdeg, order, depth + 1, map, used, nodes, budget)? {
            return Ok(true);
        }
        used[j] = false;
        map[i] = usize::MAX;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::graph::EdgeId;

    fn check_bijection(g1: &MultiGraph, g2: &MultiGraph, pairs: &[(VertexId, VertexId)]) {
        let f: std::collections::HashMap<_, _> = pairs.iter().copied().collect();
        for (_, u, v) in g1.edges() {
            assert!(g2.has_edge(f[&u], f[&v]));
        }
    }

    #[test]
    fn k5_is_self_isomorphic() {
        let k5 = complete(5);
        let m = is_isomorphic(&k5, &k5).unwrap().unwrap();
        check_bijection(&k5, &k5, &m);
    }

    #[test]
    fn k33_is_not_k5_minus_edge() {
        let k5e = complete(5).delete_edge(EdgeId(0)).unwrap();
        let k33 = complete_bipartite(3, 3);
        assert_eq!(k33.edge_count(), 9);
        assert_eq!(is_isomorphic(&k33, &k5e).unwrap(), None);
    }

    #[test]
    fn cube_is_bipartite_double_cover_of_k4() {
        // bipartite double cover of K4: (v, s) ~ (w, 1-s) for vw in K4
        let mut dc = MultiGraph::with_vertices(8);
        for u in 0..4u32 {
            for w in 0..4u32 {
                if u != w {
                    dc.add_edge(VertexId(u), VertexId(4 + w)).unwrap();
                }
            }
        }
        let q3 = cube();
        let m = is_isomorphic(&q3, &dc).unwrap().expect("Q3 ≅ K4 × K2");
        check_bijection(&q3, &dc, &m);
        // brute-force oracle over all 8! vertex maps
        let mut perm: Vec<u32> = (0..8).collect();
        let mut hits = 0;
        loop {
            if q3.edges().all(|(_, u, v)| dc.has_edge(VertexId(perm[u.index()]), VertexId(perm[v.index()]))) {
                hits += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        // |Aut(Q3)| = 48
        assert_eq!(hits, 48);
    }

    fn next_permutation(p: &mut [u32]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn refuses_large_inputs() {
        let big = complete(15);
        assert_eq!(is_isomorphic(&big, &big), Err(GraphError::IsoBudget(15)));
    }

    #[test]
    fn prescribed_pairs_are_respected() {
        let k33 = complete_bipartite(3, 3);
        // 0 and 1 are on the same side, so 0 -> 0 and 1 -> 3 is impossible
        let none = find_isomorphism_with(&k33, &k33, &[(VertexId(0), VertexId(0)), (VertexId(1), VertexId(3))]).unwrap();
        assert!(none.is_none());
        let some = find_isomorphism_with(&k33, &k33, &[(VertexId(0), VertexId(4)), (VertexId(3), VertexId(1))]).unwrap();
        let m = some.unwrap();
        assert!(m.contains(&(VertexId(0), VertexId(4))));
        check_bijection(&k33, &k33, &m);
    }

    #[test]
    fn subgraph_embedding() {
        let k5 = complete(5);
        let omega = crate::families::generate(&crate::families::FamilySpec::new(crate::families::Family::Omega1, 2)).unwrap();
        let m = find_subgraph_embedding(&k5, &omega.graph, 1_000_000).unwrap().unwrap();
        check_bijection(&k5, &omega.graph, &m);
        assert!(find_subgraph_embedding(&k5, &petersen(), 1_000_000).unwrap().is_none());
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        fn random_graph() -> impl Strategy<Value = MultiGraph> {
            (2usize..9).prop_flat_map(|n| {
                proptest::collection::vec(proptest::bool::ANY, n * (n - 1) / 2).prop_map(move |bits| {
                    let mut g = MultiGraph::with_vertices(n);
                    let mut k = 0;
                    for i in 0..n {
                        for j in i + 1..n {
                            if bits[k] {
                                g.add_edge(VertexId(i as u32), VertexId(j as u32)).unwrap();
                            }
                            k += 1;
                        }
                    }
                    g
                })
            })
        }

        fn relabel(g: &MultiGraph, perm: &[usize]) -> MultiGraph {
            let mut h = MultiGraph::with_vertices(g.vertex_count());
            for (_, u, v) in g.edges() {
                h.add_edge(VertexId(perm[u.index()] as u32), VertexId(perm[v.index()] as u32)).unwrap();
            }
            h
        }

        proptest! {
            #[test]
            fn reflexive_and_symmetric(g in random_graph(), seed in any::<u64>()) {
                prop_assert!(is_isomorphic(&g, &g).unwrap().is_some());
                let n = g.vertex_count();
                let mut perm: Vec<usize> = (0..n).collect();
                let mut s = seed;
                for i in (1..n).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    perm.swap(i, (s >> 33) as usize % (i + 1));
                }
                let h = relabel(&g, &perm);
                prop_assert!(is_isomorphic(&g, &h).unwrap().is_some());
                prop_assert!(is_isomorphic(&h, &g).unwrap().is_some());
            }
        }
    }
}
