use std::collections::BTreeSet;

use super::{CoverError, CoverMap};
use crate::embedding::spanning_forest;
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// Permutation voltages on a base graph. Edges without a permutation carry
/// the identity. The permutation of edge `e = (u, v)` sends sheet `i` at `u`
/// to sheet `perm[i]` at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageAssignment {
    pub base: MultiGraph,
    pub ply: usize,
    perms: Vec<Option<Vec<u32>>>,
}

impl VoltageAssignment {
    pub fn identity(base: MultiGraph, ply: usize) -> Self {
        let perms = vec![None; base.edge_bound()];
        VoltageAssignment { base, ply, perms }
    }

    pub fn set(&mut self, e: EdgeId, perm: Vec<u32>) -> Result<(), CoverError> {
        self.base.check_edge(e)?;
        if perm.len() != self.ply {
            return Err(CoverError::Voltage(format!("edge {e}: {} images for ply {}", perm.len(), self.ply)));
        }
        let distinct: BTreeSet<u32> = perm.iter().copied().collect();
        if distinct.len() != self.ply || distinct.iter().any(|&x| x as usize >= self.ply) {
            return Err(CoverError::Voltage(format!("edge {e}: not a permutation of 0..{}", self.ply)));
        }
        self.perms[e.index()] = Some(perm);
        Ok(())
    }

    pub fn get(&self, e: EdgeId) -> Vec<u32> {
        self.perms[e.index()].clone().unwrap_or_else(|| (0..self.ply as u32).collect())
    }

    /// Edges carrying a non-identity permutation.
    pub fn assigned(&self) -> Vec<EdgeId> {
        self.base
            .edge_ids()
            .filter(|e| self.perms[e.index()].as_ref().is_some_and(|p| p.iter().enumerate().any(|(i, &x)| x as usize != i)))
            .collect()
    }
}

/// Edges outside the BFS spanning forest, in id order. Voltage search
/// assigns permutations to these only.
pub fn cotree_edges(g: &MultiGraph) -> Vec<EdgeId> {
    let tree: BTreeSet<EdgeId> = spanning_forest(g).into_iter().collect();
    g.edge_ids().filter(|e| !tree.contains(e)).collect()
}

/// The `idx`-th permutation of `0..p` in lexicographic order.
pub fn permutation_from_index(p: usize, mut idx: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..p as u32).collect();
    let mut out = Vec::with_capacity(p);
    let mut f: u64 = (1..p as u64).product();
    for k in (0..p).rev() {
        let j = (idx / f) as usize;
        idx %= f;
        out.push(pool.remove(j));
        if k > 0 {
            f /= k as u64;
        }
    }
    out
}

/// Derived graph: sheet `i` of vertex `v` is cover vertex `rank(v) * p + i`,
/// and sheet `i` of edge `e` is cover edge `rank(e) * p + i`.
pub fn derived_cover(va: &VoltageAssignment) -> CoverMap {
    let p = va.ply;
    let g = &va.base;
    let mut vrank = vec![0u32; g.vertex_bound()];
    let base_vertices: Vec<VertexId> = g.vertices().collect();
    for (r, v) in base_vertices.iter().enumerate() {
        vrank[v.index()] = r as u32;
    }
    let mut cover = MultiGraph::with_vertices(base_vertices.len() * p);
    let mut vmap = Vec::with_capacity(base_vertices.len() * p);
    for &v in &base_vertices {
        vmap.extend(std::iter::repeat_n(Some(v), p));
    }
    let mut emap = Vec::new();
    for (e, u, v) in g.edges() {
        let perm = va.get(e);
        for (i, &j) in perm.iter().enumerate() {
            let a = VertexId(vrank[u.index()] * p as u32 + i as u32);
            let b = VertexId(vrank[v.index()] * p as u32 + j);
            cover.add_edge(a, b).unwrap();
            emap.push(Some(e));
        }
    }
    if let Some(name) = g.name() {
        cover.set_name(format!("{name}x{p}"));
    }
    CoverMap::new(g.clone(), cover, vmap, emap)
}

/// Whether the group generated by the permutations acts transitively on
/// the sheets. With identity voltages on a spanning tree of a connected base
/// this holds exactly when the derived cover is connected.
pub fn is_transitive(va: &VoltageAssignment) -> bool {
    if va.ply == 0 {
        return false;
    }
    let perms: Vec<Vec<u32>> = va.base.edge_ids().map(|e| va.get(e)).collect();
    let mut seen = vec![false; va.ply];
    seen[0] = true;
    let mut stack = vec![0u32];
    while let Some(i) = stack.pop() {
        for p in &perms {
            let fwd = p[i as usize];
            let back = p.iter().position(|&x| x == i).unwrap() as u32;
            for j in [fwd, back] {
                if !std::mem::replace(&mut seen[j as usize], true) {
                    stack.push(j);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::super::verify_cover;
    use super::*;
    use crate::graph::named::*;
    use crate::graph::{connected_components, is_connected, is_isomorphic};

    #[test]
    fn permutations_in_order() {
        let all: Vec<Vec<u32>> = (0..6).map(|i| permutation_from_index(3, i)).collect();
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 2, 1]);
        assert_eq!(all[5], vec![2, 1, 0]);
        assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 6);
        assert_eq!(permutation_from_index(1, 0), vec![0]);
    }

    #[test]
    fn triangle_double_covers() {
        let mut va = VoltageAssignment::identity(cycle(3), 2);
        let cot = cotree_edges(&va.base);
        assert_eq!(cot.len(), 1);
        let c = derived_cover(&va);
        assert_eq!(verify_cover(&c), Ok(2));
        assert_eq!(connected_components(&c.cover).len(), 2);
        va.set(cot[0], vec![1, 0]).unwrap();
        let c = derived_cover(&va);
        assert_eq!(verify_cover(&c), Ok(2));
        assert!(is_isomorphic(&c.cover, &cycle(6)).unwrap().is_some());
    }

    #[test]
    fn k4_connected_double_cover() {
        let mut va = VoltageAssignment::identity(complete(4), 2);
        for e in cotree_edges(&va.base) {
            va.set(e, vec![1, 0]).unwrap();
        }
        let c = derived_cover(&va);
        assert_eq!(verify_cover(&c), Ok(2));
        assert!(is_connected(&c.cover));
        assert!(is_transitive(&va));
    }

    #[test]
    fn bad_voltages() {
        let mut va = VoltageAssignment::identity(cycle(3), 3);
        assert!(va.set(EdgeId(0), vec![0, 0, 1]).is_err());
        assert!(va.set(EdgeId(0), vec![0, 1]).is_err());
        assert!(va.set(EdgeId(7), vec![0, 1, 2]).is_err());
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        pub(crate) fn voltage_case() -> impl Strategy<Value = VoltageAssignment> {
            (2usize..8, proptest::collection::vec((0u32..8, 0u32..8), 0..12), 1usize..4, any::<u64>()).prop_map(
                |(n, extra, p, seed)| {
                    let mut g = path(n);
                    for (a, b) in extra {
                        g.add_edge(VertexId(a % n as u32), VertexId(b % n as u32)).unwrap();
                    }
                    let mut va = VoltageAssignment::identity(g, p);
                    let fact: u64 = (1..=p as u64).product();
                    let mut s = seed;
                    for e in cotree_edges(&va.base) {
                        va.set(e, permutation_from_index(p, s % fact)).unwrap();
                        s = s.rotate_left(7) ^ 0x9e37_79b9;
                    }
                    va
                },
            )
        }

        proptest! {
            #[test]
            fn derived_covers_verify(va in voltage_case()) {
                let c = derived_cover(&va);
                prop_assert_eq!(verify_cover(&c), Ok(va.ply));
                for v in va.base.vertices() {
                    prop_assert_eq!(c.fiber(v).len(), va.ply);
                }
                prop_assert_eq!(is_connected(&c.cover), is_transitive(&va));
            }
        }
    }
    pub(crate) use prop::voltage_case;
}
