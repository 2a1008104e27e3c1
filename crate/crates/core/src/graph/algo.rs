use std::collections::{BTreeSet, VecDeque};

use super::{EdgeId, GraphError, MultiGraph, VertexId};

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(g: &MultiGraph) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; g.vertex_bound()];
    let mut comps = Vec::new();
    for s in g.vertices() {
        if seen[s.index()] {
            continue;
        }
        seen[s.index()] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps
}

pub fn is_connected(g: &MultiGraph) -> bool {
    connected_components(g).len() <= 1
}

/// BFS spanning tree rooted at the smallest live vertex.
pub fn spanning_tree(g: &MultiGraph) -> Result<Vec<EdgeId>, GraphError> {
    let Some(root) = g.vertices().next() else {
        return Ok(Vec::new());
    };
    let mut seen = vec![false; g.vertex_bound()];
    seen[root.index()] = true;
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &e in g.incident(v) {
            let w = g.opposite(e, v).unwrap();
            if !seen[w.index()] {
                seen[w.index()] = true;
                tree.push(e);
                queue.push_back(w);
            }
        }
    }
    if tree.len() + 1 != g.vertex_count() {
        return Err(GraphError::Disconnected);
    }
    tree.sort();
    Ok(tree)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    /// `side[v]` for every live vertex, indexed by vertex id (dead slots are `false`).
    Coloring(Vec<bool>),
    /// Vertices of an odd closed walk, in order.
    OddCycle(Vec<VertexId>),
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Coloring(_))
    }
}

pub fn bipartition(g: &MultiGraph) -> Bipartition {
    let n = g.vertex_bound();
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut depth = vec![0usize; n];
    for s in g.vertices() {
        if color[s.index()].is_some() {
            continue;
        }
        color[s.index()] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                match color[w.index()] {
                    None => {
                        color[w.index()] = Some(!color[v.index()].unwrap());
                        parent[w.index()] = Some(v);
                        depth[w.index()] = depth[v.index()] + 1;
                        queue.push_back(w);
                    }
                    Some(c) if c == color[v.index()].unwrap() => {
                        return Bipartition::OddCycle(odd_cycle(v, w, &parent, &depth));
                    }
                    _ => {}
                }
            }
        }
    }
    Bipartition::Coloring(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

fn odd_cycle(
    mut a: VertexId,
    mut b: VertexId,
    parent: &[Option<VertexId>],
    depth: &[usize],
) -> Vec<VertexId> {
    if a == b {
        return vec![a];
    }
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a.index()] > depth[b.index()] {
        a = parent[a.index()].unwrap();
        left.push(a);
    }
    while depth[b.index()] > depth[a.index()] {
        b = parent[b.index()].unwrap();
        right.push(b);
    }
    while a != b {
        a = parent[a.index()].unwrap();
        b = parent[b.index()].unwrap();
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// Length of a shortest cycle (loops count 1, parallel pairs 2); `None` for forests.
pub fn girth(g: &MultiGraph) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut pairs = BTreeSet::new();
    for (_, u, v) in g.edges() {
        if u == v {
            return Some(1);
        }
        if !pairs.insert((u.min(v), u.max(v))) {
            best = Some(2);
        }
    }
    if best.is_some() {
        return best;
    }
    for s in g.vertices() {
        let mut dist = vec![usize::MAX; g.vertex_bound()];
        let mut via = vec![None; g.vertex_bound()];
        dist[s.index()] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                if via[v.index()] == Some(e) {
                    continue;
                }
                let w = g.opposite(e, v).unwrap();
                if dist[w.index()] == usize::MAX {
                    dist[w.index()] = dist[v.index()] + 1;
                    via[w.index()] = Some(e);
                    queue.push_back(w);
                } else {
                    let len = dist[v.index()] + dist[w.index()] + 1;
                    best = Some(best.map_or(len, |b: usize| b.min(len)));
                }
            }
        }
    }
    best
}

/// Biconnected components as edge sets. Every loop forms its own block; an
/// isolated vertex has no block.
pub fn blocks(g: &MultiGraph) -> Vec<Vec<EdgeId>> {
    let n = g.vertex_bound();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0usize;
    let mut out = Vec::new();
    let mut edge_stack: Vec<EdgeId> = Vec::new();

    for (e, u, v) in g.edges() {
        if u == v {
            out.push(vec![e]);
        }
    }

    for root in g.vertices() {
        if disc[root.index()] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, edge used to enter, next incidence index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        disc[root.index()] = time;
        low[root.index()] = time;
        time += 1;
        while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
            let inc = g.incident(v);
            if *idx < inc.len() {
                let e = inc[*idx];
                *idx += 1;
                if Some(e) == via || g.is_loop(e) {
                    continue;
                }
                let w = g.opposite(e, v).unwrap();
                if disc[w.index()] == usize::MAX {
                    edge_stack.push(e);
                    disc[w.index()] = time;
                    low[w.index()] = time;
                    time += 1;
                    stack.push((w, Some(e), 0));
                } else if disc[w.index()] < disc[v.index()] {
                    edge_stack.push(e);
                    low[v.index()] = low[v.index()].min(disc[w.index()]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p.index()] = low[p.index()].min(low[v.index()]);
                    if low[v.index()] >= disc[p.index()] {
                        let enter = via.unwrap();
                        let mut block = Vec::new();
                        while let Some(f) = edge_stack.pop() {
                            block.push(f);
                            if f == enter {
                                break;
                            }
                        }
                        block.sort();
                        out.push(block);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, Family, FamilySpec};
    use crate::graph::named::*;

    #[test]
    fn components() {
        let lambda = generate(&FamilySpec::new(Family::Lambda1, 3)).unwrap();
        assert_eq!(connected_components(&lambda.graph).len(), 3);
        assert_eq!(connected_components(&complete(4)).len(), 1);
        assert!(connected_components(&MultiGraph::new()).is_empty());
    }

    #[test]
    fn spanning_trees() {
        let t = spanning_tree(&cycle(4)).unwrap();
        assert_eq!(t.len(), 3);
        let p = path(6);
        assert_eq!(spanning_tree(&p).unwrap(), p.edge_ids().collect::<Vec<_>>());
        let k4 = complete(4);
        let t = spanning_tree(&k4).unwrap();
        let tree = k4.edge_subgraph(&t.iter().copied().collect());
        assert_eq!(tree.edge_count(), 3);
        assert_eq!(connected_components(&tree).len(), 1);
        let two = MultiGraph::with_vertices(2);
        assert_eq!(spanning_tree(&two), Err(GraphError::Disconnected));
    }

    #[test]
    fn bipartitions() {
        assert!(bipartition(&cycle(4)).is_bipartite());
        match bipartition(&cycle(5)) {
            Bipartition::OddCycle(c) => {
                assert_eq!(c.len() % 2, 1);
                assert_eq!(c.len(), 5);
            }
            _ => panic!("C5 is not bipartite"),
        }
        match bipartition(&complete_bipartite(3, 7)) {
            Bipartition::Coloring(side) => {
                let ones = side.iter().filter(|&&s| s).count();
                assert_eq!(ones.min(10 - ones), 3);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn girths() {
        assert_eq!(girth(&complete(5)), Some(3));
        assert_eq!(girth(&complete_bipartite(3, 3)), Some(4));
        assert_eq!(girth(&petersen()), Some(5));
        assert_eq!(girth(&path(4)), None);
    }

    #[test]
    fn block_decomposition() {
        let omega = generate(&FamilySpec::new(Family::Omega1, 3)).unwrap();
        let b = blocks(&omega.graph);
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|blk| blk.len() == 10));
        assert_eq!(blocks(&path(5)).len(), 4);
        assert_eq!(blocks(&complete(4)).len(), 1);
    }
}
