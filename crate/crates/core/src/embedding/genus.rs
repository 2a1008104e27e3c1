//! Minimum Euler genus.
//!
//! Euler genus is additive over blocks, so each block is handled on its own:
//! planar blocks by path addition, the others by a seeded local search that
//! stops as soon as it meets the Euler-formula lower bound, and otherwise by
//! exhaustive enumeration of rotations and cotree signatures. Block
//! witnesses are glued at cut vertices.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::planarity::planar_rotation;
use super::{count_faces, dart_vertex, spanning_forest, Dart, EmbeddedGraph, EmbeddingError};
use crate::graph::{blocks, girth, is_connected, EdgeId, MultiGraph, VertexId};

pub const DEFAULT_TRACE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct GenusOptions {
    /// Maximum number of face traces across all blocks.
    pub budget: u64,
    pub seed: u64,
    /// Worker threads for the exhaustive phase; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Local-search moves per block before falling back to enumeration.
    pub local_steps: u64,
    /// Skip the local search and the lower-bound shortcut; enumerate every
    /// non-planar block completely.
    pub exhaustive: bool,
}

impl Default for GenusOptions {
    fn default() -> Self {
        GenusOptions { budget: DEFAULT_TRACE_BUDGET, seed: 0, jobs: None, local_steps: 200_000, exhaustive: false }
    }
}

#[derive(Clone, Debug)]
pub struct GenusResult {
    /// Euler genus of `witness`: the minimum when `exact`, an upper bound otherwise.
    pub genus: usize,
    pub lower_bound: usize,
    pub exact: bool,
    pub witness: EmbeddedGraph,
    pub traces: u64,
}

pub fn min_euler_genus(g: &MultiGraph, budget: u64) -> Result<GenusResult, EmbeddingError> {
    min_euler_genus_with(g, &GenusOptions { budget, ..GenusOptions::default() })
}

pub fn min_euler_genus_with(g: &MultiGraph, opts: &GenusOptions) -> Result<GenusResult, EmbeddingError> {
    if !is_connected(g) {
        return Err(EmbeddingError::Disconnected);
    }
    let run = || -> Result<GenusResult, EmbeddingError> {
        let mut traces = 0u64;
        let mut parts = Vec::new();
        let mut lower = 0usize;
        let mut exact = true;
        for block in blocks(g) {
            let bg = g.edge_subgraph(&block.iter().copied().collect());
            let core = simple_core(&bg);
            let r = block_genus(&core, opts, opts.budget.saturating_sub(traces), &mut traces)?;
            lower += r.lower_bound;
            exact &= r.exact;
            parts.push((r.genus, r.witness));
        }
        let target: usize = parts.iter().map(|p| p.0).sum();
        let merged = merge_blocks(g, parts);
        let genus = merged.euler_genus()?;
        if genus != target {
            exact = false;
        }
        Ok(GenusResult { genus, lower_bound: lower.min(genus), exact, witness: merged, traces })
    };
    match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| EmbeddingError::Malformed(e.to_string()))?
            .install(run),
        None => run(),
    }
}

fn simple_core(g: &MultiGraph) -> MultiGraph {
    let mut s = g.clone();
    for (e, u, v) in g.edges() {
        if u == v {
            s.remove_edge(e).unwrap();
        }
    }
    s.simplify_in_place();
    s
}

/// Euler-formula lower bound for a 2-connected block: every face has length
/// at least the girth.
fn euler_lower_bound(g: &MultiGraph) -> usize {
    let n = g.vertex_count() as i64;
    let m = g.edge_count() as i64;
    match girth(g) {
        Some(gi) => (2 - n + m - (2 * m) / gi as i64).max(0) as usize,
        None => 0,
    }
}

struct BlockResult {
    genus: usize,
    lower_bound: usize,
    exact: bool,
    witness: EmbeddedGraph,
}

fn block_genus(core: &MultiGraph, opts: &GenusOptions, budget: u64, traces: &mut u64) -> Result<BlockResult, EmbeddingError> {
    if !opts.exhaustive {
        if let Some(rot) = planar_rotation(core) {
            let w = EmbeddedGraph::new(core.clone(), rot, vec![1; core.edge_bound()])?;
            return Ok(BlockResult { genus: 0, lower_bound: 0, exact: true, witness: w });
        }
    }
    let space = Space::new(core, true);
    let mut lb = euler_lower_bound(core);
    if !opts.exhaustive {
        lb = lb.max(1);
    }
    let mut best: Option<(usize, EmbeddedGraph)> = None;
    if !opts.exhaustive {
        let steps = opts.local_steps.min(budget);
        let (gen, w, used) = local_search(core, &space, lb, steps, opts.seed);
        *traces += used;
        if gen <= lb {
            return Ok(BlockResult { genus: gen, lower_bound: lb, exact: true, witness: w });
        }
        best = Some((gen, w));
    }
    let remaining = budget.saturating_sub(*traces);
    if space.size > remaining as u128 {
        let (gen, w) = match best {
            Some(b) => b,
            None => {
                let (gen, w, used) = local_search(core, &space, lb, opts.local_steps.min(remaining), opts.seed);
                *traces += used;
                (gen, w)
            }
        };
        return Ok(BlockResult { genus: gen, lower_bound: lb, exact: false, witness: w });
    }
    let stop_at = if opts.exhaustive { 0 } else { lb };
    let (gen, idx, used) = space.exhaust(stop_at);
    *traces += used;
    let witness = space.embedding(idx).expect("best index decodes");
    Ok(BlockResult { genus: gen, lower_bound: gen, exact: true, witness })
}

/// Mixed-radix index space over rotations (one vertex fixed up to reversal)
/// and signatures of cotree edges.
pub(crate) struct Space {
    graph: MultiGraph,
    vertices: Vec<VertexId>,
    /// incident darts per listed vertex, in incidence order
    darts_at: Vec<Vec<Dart>>,
    radix: Vec<u128>,
    fixed: Option<usize>,
    cotree: Vec<EdgeId>,
    all_darts: Vec<usize>,
    pub(crate) size: u128,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl Space {
    pub(crate) fn new(g: &MultiGraph, reduce: bool) -> Self {
        let vertices: Vec<VertexId> = g.vertices().collect();
        let mut darts_at: Vec<Vec<Dart>> = vec![Vec::new(); vertices.len()];
        let pos: Vec<usize> = {
            let mut p = vec![usize::MAX; g.vertex_bound()];
            for (i, v) in vertices.iter().enumerate() {
                p[v.index()] = i;
            }
            p
        };
        for (e, u, v) in g.edges() {
            darts_at[pos[u.index()]].push(Dart::new(e, 0));
            darts_at[pos[v.index()]].push(Dart::new(e, 1));
        }
        let radix: Vec<u128> = darts_at.iter().map(|d| factorial(d.len().saturating_sub(1))).collect();
        let fixed = if reduce {
            (0..vertices.len()).filter(|&i| darts_at[i].len() >= 3).max_by_key(|&i| (darts_at[i].len(), std::cmp::Reverse(i)))
        } else {
            None
        };
        let tree: BTreeSet<EdgeId> = if reduce { spanning_forest(g).into_iter().collect() } else { BTreeSet::new() };
        let cotree: Vec<EdgeId> = g.edge_ids().filter(|e| !tree.contains(e)).collect();
        let all_darts: Vec<usize> = g.edge_ids().flat_map(|e| [2 * e.index(), 2 * e.index() + 1]).collect();
        let size = radix.iter().product::<u128>() << cotree.len();
        Space { graph: g.clone(), vertices, darts_at, radix, fixed, cotree, all_darts, size }
    }

    /// Rotation lists and signatures for an index; `None` for the mirrored
    /// half of the fixed vertex's orders.
    fn decode(&self, mut idx: u128, rot: &mut [Vec<Dart>], sig: &mut [i8]) -> bool {
        for s in sig.iter_mut() {
            *s = 1;
        }
        for &e in &self.cotree {
            sig[e.index()] = if idx & 1 == 1 { -1 } else { 1 };
            idx >>= 1;
        }
        for (i, darts) in self.darts_at.iter().enumerate() {
            let code = idx % self.radix[i];
            idx /= self.radix[i];
            let r = &mut rot[i];
            r.clear();
            if darts.is_empty() {
                continue;
            }
            r.push(darts[0]);
            let mut pool: Vec<Dart> = darts[1..].to_vec();
            let mut c = code;
            for k in (0..pool.len()).rev() {
                let f = factorial(k);
                let j = (c / f) as usize;
                c %= f;
                r.push(pool.remove(j));
            }
            if Some(i) == self.fixed && r[1] > r[r.len() - 1] {
                return false;
            }
        }
        true
    }

    fn tables(&self, rot: &[Vec<Dart>], succ: &mut [u32], pred: &mut [u32]) {
        for r in rot {
            let k = r.len();
            for j in 0..k {
                let d = r[j].index();
                let nx = r[(j + 1) % k].index();
                succ[d] = nx as u32;
                pred[nx] = d as u32;
            }
        }
    }

    fn genus_of_faces(&self, f: usize) -> usize {
        let n = self.graph.vertex_count() as i64;
        let m = self.graph.edge_count() as i64;
        (2 - n + m - f as i64) as usize
    }

    pub(crate) fn embedding(&self, idx: u128) -> Option<EmbeddedGraph> {
        let mut rot = vec![Vec::new(); self.vertices.len()];
        let mut sig = vec![1i8; self.graph.edge_bound()];
        if !self.decode(idx, &mut rot, &mut sig) {
            return None;
        }
        let mut full = vec![Vec::new(); self.graph.vertex_bound()];
        for (i, v) in self.vertices.iter().enumerate() {
            full[v.index()] = std::mem::take(&mut rot[i]);
        }
        Some(EmbeddedGraph::new(self.graph.clone(), full, sig).expect("decoded rotation is valid"))
    }

    /// Minimum genus over the whole space (stopping early once `stop_at` is
    /// reached). Returns `(genus, smallest index achieving it, traces)`.
    pub(crate) fn exhaust(&self, stop_at: usize) -> (usize, u128, u64) {
        const CHUNK: u128 = 1 << 12;
        let chunks = self.size.div_ceil(CHUNK);
        let wave = (rayon::current_num_threads() as u128 * 8).max(1);
        let mut best = (usize::MAX, 0u128);
        let mut traces = 0u64;
        let mut start = 0u128;
        while start < chunks {
            let end = (start + wave).min(chunks);
            let results: Vec<(usize, u128, u64)> = (start..end)
                .into_par_iter()
                .map(|c| self.scan(c * CHUNK, ((c + 1) * CHUNK).min(self.size)))
                .collect();
            for (gen, idx, t) in results {
                traces += t;
                if (gen, idx) < best {
                    best = (gen, idx);
                }
            }
            if best.0 <= stop_at {
                break;
            }
            start = end;
        }
        (best.0, best.1, traces)
    }

    fn scan(&self, lo: u128, hi: u128) -> (usize, u128, u64) {
        let nd = 2 * self.graph.edge_bound();
        let mut rot = vec![Vec::new(); self.vertices.len()];
        let mut sig = vec![1i8; self.graph.edge_bound()];
        let mut succ = vec![0u32; nd];
        let mut pred = vec![0u32; nd];
        let mut seen = vec![0u8; nd];
        let mut best = (usize::MAX, u128::MAX);
        let mut traces = 0;
        for idx in lo..hi {
            if !self.decode(idx, &mut rot, &mut sig) {
                continue;
            }
            self.tables(&rot, &mut succ, &mut pred);
            let f = count_faces(&self.all_darts, &succ, &pred, &sig, &mut seen);
            traces += 1;
            let gen = self.genus_of_faces(f);
            if gen < best.0 {
                best = (gen, idx);
            }
        }
        (best.0, best.1, traces)
    }
}

/// Seeded local search: swap darts within a rotation or flip a cotree
/// signature, accepting non-worsening moves and occasional uphill ones.
fn local_search(g: &MultiGraph, space: &Space, target: usize, steps: u64, seed: u64) -> (usize, EmbeddedGraph, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nd = 2 * g.edge_bound();
    let mut rot: Vec<Vec<Dart>> = space.darts_at.clone();
    for r in rot.iter_mut() {
        r.shuffle(&mut rng);
    }
    let mut sig = vec![1i8; g.edge_bound()];
    let (mut succ, mut pred, mut seen) = (vec![0u32; nd], vec![0u32; nd], vec![0u8; nd]);
    let mut eval = |rot: &[Vec<Dart>], sig: &[i8]| {
        space.tables(rot, &mut succ, &mut pred);
        space.genus_of_faces(count_faces(&space.all_darts, &succ, &pred, sig, &mut seen))
    };
    let mut cur = eval(&rot, &sig);
    let mut best = (cur, rot.clone(), sig.clone());
    let mut used = 1u64;
    let movable: Vec<usize> = (0..rot.len()).filter(|&i| rot[i].len() >= 3).collect();
    while used < steps && best.0 > target {
        let flip = space.cotree.is_empty() || movable.is_empty() || rng.gen_bool(0.25);
        let undo: Box<dyn Fn(&mut Vec<Vec<Dart>>, &mut Vec<i8>)>;
        if flip && !space.cotree.is_empty() {
            let e = space.cotree[rng.gen_range(0..space.cotree.len())];
            sig[e.index()] = -sig[e.index()];
            undo = Box::new(move |_, s| s[e.index()] = -s[e.index()]);
        } else if !movable.is_empty() {
            let v = movable[rng.gen_range(0..movable.len())];
            let k = rot[v].len();
            let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
            rot[v].swap(a, b);
            undo = Box::new(move |r, _| r[v].swap(a, b));
        } else {
            break;
        }
        let next = eval(&rot, &sig);
        used += 1;
        let temperature = 0.6 * (1.0 - used as f64 / steps as f64) + 0.02;
        if next <= cur || rng.gen_bool((-((next - cur) as f64) / temperature).exp().min(1.0)) {
            cur = next;
            if cur < best.0 {
                best = (cur, rot.clone(), sig.clone());
            }
        } else {
            undo(&mut rot, &mut sig);
        }
    }
    let mut full = vec![Vec::new(); g.vertex_bound()];
    for (i, v) in space.vertices.iter().enumerate() {
        full[v.index()] = best.1[i].clone();
    }
    let w = EmbeddedGraph::new(g.clone(), full, best.2).expect("search keeps rotations valid");
    (best.0, w, used)
}

/// Glues block embeddings at cut vertices and puts back loops and parallel
/// edges. Each block is inserted at the position (and in the mirror image)
/// that keeps the genus additive.
fn merge_blocks(g: &MultiGraph, parts: Vec<(usize, EmbeddedGraph)>) -> EmbeddedGraph {
    let vb = g.vertex_bound();
    let mut remaining: Vec<(usize, EmbeddedGraph)> = parts;
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); vb];
    let mut sig = vec![1i8; g.edge_bound()];
    let mut in_union = vec![false; vb];
    let mut edges: BTreeSet<EdgeId> = BTreeSet::new();
    let mut genus = 0usize;

    if let Some((gen, first)) = (!remaining.is_empty()).then(|| remaining.remove(0)) {
        for v in first.graph().vertices() {
            rot[v.index()] = first.rotation(v).to_vec();
            in_union[v.index()] = true;
        }
        for e in first.graph().edge_ids() {
            sig[e.index()] = first.signature(e);
            edges.insert(e);
        }
        genus = gen;
    } else if let Some(v) = g.vertices().next() {
        in_union[v.index()] = true;
    }

    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .position(|(_, b)| b.graph().vertices().any(|v| in_union[v.index()]))
            .expect("blocks of a connected graph form a tree");
        let (bgen, block) = remaining.remove(pick);
        let cut = block.graph().vertices().find(|v| in_union[v.index()]).unwrap();
        let union_edges: BTreeSet<EdgeId> = edges.iter().copied().chain(block.graph().edge_ids()).collect();
        let sub = g.edge_subgraph(&union_edges);
        let mut best: Option<(usize, Vec<Vec<Dart>>)> = None;
        'search: for mirror in [false, true] {
            let brot_at = |v: VertexId| {
                let mut r = block.rotation(v).to_vec();
                if mirror {
                    r.reverse();
                }
                r
            };
            let bc = brot_at(cut);
            let host_len = rot[cut.index()].len();
            for shift in 0..bc.len().max(1) {
                for at in 0..host_len.max(1) {
                    let mut trial = rot.clone();
                    for v in block.graph().vertices() {
                        if v != cut {
                            trial[v.index()] = brot_at(v);
                        }
                    }
                    let mut piece = bc.clone();
                    piece.rotate_left(shift);
                    let host = &mut trial[cut.index()];
                    let pos = if host.is_empty() { 0 } else { at + 1 };
                    host.splice(pos..pos, piece);
                    let mut tsig = sig.clone();
                    for e in block.graph().edge_ids() {
                        tsig[e.index()] = block.signature(e);
                    }
                    let restricted: Vec<Vec<Dart>> = (0..vb)
                        .map(|v| if sub.has_vertex(VertexId(v as u32)) { trial[v].clone() } else { Vec::new() })
                        .collect();
                    let eg = EmbeddedGraph::new(sub.clone(), restricted, tsig).expect("glued rotation is valid");
                    let gen = eg.euler_genus().expect("union is connected");
                    if best.as_ref().is_none_or(|b| gen < b.0) {
                        best = Some((gen, trial));
                    }
                    if gen == genus + bgen {
                        break 'search;
                    }
                }
            }
        }
        let (gen, trial) = best.unwrap();
        rot = trial;
        for e in block.graph().edge_ids() {
            sig[e.index()] = block.signature(e);
            edges.insert(e);
        }
        for v in block.graph().vertices() {
            in_union[v.index()] = true;
        }
        genus = gen;
    }

    // parallels next to their sibling, loops as a consecutive pair
    for (e, u, v) in g.edges() {
        if edges.contains(&e) {
            continue;
        }
        if u == v {
            rot[u.index()].extend([Dart::new(e, 0), Dart::new(e, 1)]);
            continue;
        }
        let sib = *edges
            .iter()
            .find(|&&f| g.endpoints(f).is_some_and(|(a, b)| (a == u && b == v) || (a == v && b == u)))
            .expect("parallel class has a kept representative");
        let a = if dart_vertex(g, Dart::new(sib, 0)) == u { Dart::new(sib, 0) } else { Dart::new(sib, 1) };
        let b = a.other();
        let s = sig[sib.index()];
        sig[e.index()] = s;
        let ru = &mut rot[u.index()];
        let i = ru.iter().position(|&d| d == a).unwrap();
        ru.insert(i + 1, Dart::new(e, 0));
        let rv = &mut rot[v.index()];
        let j = rv.iter().position(|&d| d == b).unwrap();
        rv.insert(if s > 0 { j } else { j + 1 }, Dart::new(e, 1));
    }
    EmbeddedGraph::new(g.clone(), rot, sig).expect("merged rotation is valid")
}

/// Calls `visit` for every embedding in the rotation/signature space of a
/// connected graph: the full space, or the reduced one searched by
/// [`min_euler_genus`]. Returns the number visited.
pub fn enumerate_embeddings(
    g: &MultiGraph,
    reduced: bool,
    limit: u64,
    mut visit: impl FnMut(&EmbeddedGraph),
) -> Result<u64, EmbeddingError> {
    if !is_connected(g) {
        return Err(EmbeddingError::Disconnected);
    }
    let space = Space::new(g, reduced);
    if space.size > limit as u128 {
        return Err(EmbeddingError::Budget { space: space.size, budget: limit });
    }
    let mut count = 0;
    for idx in 0..space.size {
        if let Some(eg) = space.embedding(idx) {
            visit(&eg);
            count += 1;
        }
    }
    Ok(count)
}
