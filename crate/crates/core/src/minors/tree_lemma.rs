use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{is_connected, MultiGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeLemmaError {
    #[error("marked set has {have} vertices, need at least k^2 = {need}")]
    TooFewMarked { have: usize, need: usize },
    #[error("marked vertex {0} is not in the tree")]
    NotInTree(VertexId),
    #[error("input is not a tree")]
    NotATree,
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeOutcome {
    /// A path (in order) containing at least k marked vertices.
    Path(Vec<VertexId>),
    /// A subtree whose leaves all lie in the marked set, with at least k leaves.
    Subtree { vertices: Vec<VertexId>, leaves: Vec<VertexId> },
}

/// Either a path through at least `k` marked vertices or a subtree with at
/// least `k` marked leaves. Requires `|marked| >= k^2`.
pub fn tree_path_or_subtree(
    tree: &MultiGraph,
    marked: &BTreeSet<VertexId>,
    k: usize,
) -> Result<TreeOutcome, TreeLemmaError> {
    if k == 0 {
        return Err(TreeLemmaError::ZeroK);
    }
    if marked.len() < k * k {
        return Err(TreeLemmaError::TooFewMarked { have: marked.len(), need: k * k });
    }
    if let Some(&v) = marked.iter().find(|v| !tree.has_vertex(**v)) {
        return Err(TreeLemmaError::NotInTree(v));
    }
    if tree.edge_count() + 1 != tree.vertex_count() || !is_connected(tree) {
        return Err(TreeLemmaError::NotATree);
    }

    // strip unmarked leaves until every leaf is marked
    let mut alive = vec![false; tree.vertex_bound()];
    let mut deg = vec![0usize; tree.vertex_bound()];
    for v in tree.vertices() {
        alive[v.index()] = true;
        deg[v.index()] = tree.degree(v);
    }
    let mut queue: VecDeque<VertexId> =
        tree.vertices().filter(|v| deg[v.index()] <= 1 && !marked.contains(v)).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v.index()] {
            continue;
        }
        alive[v.index()] = false;
        for w in tree.neighbors(v) {
            if alive[w.index()] {
                deg[w.index()] -= 1;
                if deg[w.index()] <= 1 && !marked.contains(&w) {
                    queue.push_back(w);
                }
            }
        }
    }
    let vertices: Vec<VertexId> = tree.vertices().filter(|v| alive[v.index()]).collect();
    let leaves: Vec<VertexId> = vertices.iter().copied().filter(|v| deg[v.index()] <= 1).collect();
    if leaves.len() >= k {
        return Ok(TreeOutcome::Subtree { vertices, leaves });
    }

    // few leaves: the paths from the first leaf to the others cover the tree
    let first = leaves[0];
    let mut parent = vec![None; tree.vertex_bound()];
    let mut seen = vec![false; tree.vertex_bound()];
    seen[first.index()] = true;
    let mut bfs = VecDeque::from([first]);
    while let Some(v) = bfs.pop_front() {
        for w in tree.neighbors(v) {
            if alive[w.index()] && !seen[w.index()] {
                seen[w.index()] = true;
                parent[w.index()] = Some(v);
                bfs.push_back(w);
            }
        }
    }
    let path_to = |mut v: VertexId| {
        let mut p = vec![v];
        while let Some(u) = parent[v.index()] {
            p.push(u);
            v = u;
        }
        p.reverse();
        p
    };
    let best = leaves
        .iter()
        .map(|&l| path_to(l))
        .max_by_key(|p| (p.iter().filter(|v| marked.contains(v)).count(), std::cmp::Reverse(p.len())))
        .expect("at least one leaf");
    Ok(TreeOutcome::Path(best))
}
