//! Minor models, Y-minor certificates and the constructive lemmas that
//! produce sum-Kuratowski minors.

mod extract;
mod tree_lemma;
mod ycert;

pub use extract::{extract_family_minor, ExtractError, Extraction};
pub use tree_lemma::{tree_path_or_subtree, TreeLemmaError, TreeOutcome};
pub use ycert::{replay_certificate, verify_yminor_certificate, CertError, YCertificate, YOp};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{io::content_lines, MultiGraph, VertexId};

pub const MINOR_PATTERN_LIMIT: usize = 14;
pub const DEFAULT_MINOR_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinorError {
    #[error("pattern has {0} vertices (limit {MINOR_PATTERN_LIMIT})")]
    PatternTooLarge(usize),
    #[error("minor search exhausted its budget of {0} nodes; result inconclusive")]
    Budget(u64),
    #[error("invalid witness: {0}")]
    Invalid(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A minor model: disjoint connected branch sets, one per pattern vertex,
/// plus one host edge realising each pattern edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub branch: BTreeMap<VertexId, Vec<VertexId>>,
    /// `(pattern u, pattern v, host u, host v)` for every simple pattern edge.
    pub realization: Vec<(VertexId, VertexId, VertexId, VertexId)>,
}

impl MinorWitness {
    /// Builds the realisation list for the given branch sets and validates the model.
    pub fn from_branches(
        host: &MultiGraph,
        pattern: &MultiGraph,
        branch: BTreeMap<VertexId, Vec<VertexId>>,
    ) -> Result<Self, MinorError> {
        let mut owner = vec![None; host.vertex_bound()];
        for (&p, set) in &branch {
            for &h in set {
                if !host.has_vertex(h) {
                    return Err(MinorError::Invalid(format!("branch set of {p} uses missing vertex {h}")));
                }
                owner[h.index()] = Some(p);
            }
        }
        let mut realization = Vec::new();
        for (pu, pv) in simple_pairs(pattern) {
            let found = branch.get(&pu).into_iter().flatten().find_map(|&hu| {
                host.neighbors(hu)
                    .into_iter()
                    .find(|&hv| owner[hv.index()] == Some(pv))
                    .map(|hv| (pu, pv, hu, hv))
            });
            match found {
                Some(r) => realization.push(r),
                None => return Err(MinorError::Invalid(format!("pattern edge {pu}-{pv} is not realised"))),
            }
        }
        let w = MinorWitness { branch, realization };
        validate_minor_witness(host, pattern, &w)?;
        Ok(w)
    }

    pub fn to_text(&self, pattern_name: &str, host_name: &str) -> String {
        let mut out = format!("minor {pattern_name} in {host_name}\n");
        for (p, set) in &self.branch {
            let list: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "branch {p} {}", list.join(" "));
        }
        for (pu, pv, hu, hv) in &self.realization {
            let _ = writeln!(out, "edge {pu} {pv} {hu} {hv}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, MinorError> {
        let err = |line, msg: &str| MinorError::Parse { line, msg: msg.into() };
        let num = |line, s: &str| s.parse::<u32>().map(VertexId).map_err(|_| err(line, "bad vertex"));
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| err(0, "empty witness"))?;
        if !header.starts_with("minor ") {
            return Err(err(ln, "expected `minor <pattern> in <host>`"));
        }
        let mut w = MinorWitness { branch: BTreeMap::new(), realization: Vec::new() };
        for (ln, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["branch", p, rest @ ..] => {
                    let set = rest.iter().map(|s| num(ln, s)).collect::<Result<Vec<_>, _>>()?;
                    w.branch.insert(num(ln, p)?, set);
                }
                ["edge", a, b, c, d] => {
                    w.realization.push((num(ln, a)?, num(ln, b)?, num(ln, c)?, num(ln, d)?));
                }
                _ => return Err(err(ln, "expected `branch` or `edge` line")),
            }
        }
        Ok(w)
    }
}

fn simple_pairs(g: &MultiGraph) -> BTreeSet<(VertexId, VertexId)> {
    g.edges().filter(|(_, u, v)| u != v).map(|(_, u, v)| (u.min(v), u.max(v))).collect()
}

/// Independent check of a minor model: every pattern vertex has a non-empty
/// connected branch set, branch sets are disjoint, and every pattern edge is
/// realised by a host edge between the right branch sets.
pub fn validate_minor_witness(host: &MultiGraph, pattern: &MultiGraph, w: &MinorWitness) -> Result<(), MinorError> {
    let bad = |m: String| Err(MinorError::Invalid(m));
    let mut owner: Vec<Option<VertexId>> = vec![None; host.vertex_bound()];
    for p in pattern.vertices() {
        let Some(set) = w.branch.get(&p).filter(|s| !s.is_empty()) else {
            return bad(format!("pattern vertex {p} has no branch set"));
        };
        for &h in set {
            if !host.has_vertex(h) {
                return bad(format!("host vertex {h} does not exist"));
            }
            if let Some(q) = owner[h.index()] {
                return bad(format!("host vertex {h} is in branch sets of {q} and {p}"));
            }
            owner[h.index()] = Some(p);
        }
        let keep: BTreeSet<VertexId> = set.iter().copied().collect();
        if crate::graph::connected_components(&host.induced(&keep)).len() != 1 {
            return bad(format!("branch set of {p} is not connected"));
        }
    }
    if w.branch.keys().any(|p| !pattern.has_vertex(*p)) {
        return bad("branch set for a vertex outside the pattern".into());
    }
    let realized: BTreeSet<(VertexId, VertexId)> = w
        .realization
        .iter()
        .filter(|&&(pu, pv, hu, hv)| {
            owner.get(hu.index()) == Some(&Some(pu)) && owner.get(hv.index()) == Some(&Some(pv)) && host.has_edge(hu, hv)
        })
        .map(|&(pu, pv, _, _)| (pu.min(pv), pu.max(pv)))
        .collect();
    for (pu, pv) in simple_pairs(pattern) {
        if !realized.contains(&(pu, pv)) {
            return bad(format!("pattern edge {pu}-{pv} has no valid realisation"));
        }
    }
    Ok(())
}

struct Search<'a> {
    adj: Vec<Vec<usize>>,
    pat_adj: Vec<Vec<usize>>,
    order: Vec<usize>,
    owner: Vec<Option<usize>>,
    sets: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
    _host: &'a MultiGraph,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), MinorError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(MinorError::Budget(self.budget))
        } else {
            Ok(())
        }
    }

    /// Connected sets of free vertices up to `max` in size, each generated once
    /// (rooted at its smallest member), sorted by size then members.
    fn connected_sets(&mut self, max: usize) -> Result<Vec<Vec<usize>>, MinorError> {
        let n = self.adj.len();
        let mut out = Vec::new();
        for root in 0..n {
            if self.owner[root].is_some() {
                continue;
            }
            let mut sub = vec![root];
            let ext: Vec<usize> =
                self.adj[root].iter().copied().filter(|&u| u > root && self.owner[u].is_none()).collect();
            self.extend(&mut sub, ext, root, max, &mut out)?;
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn extend(
        &mut self,
        sub: &mut Vec<usize>,
        mut ext: Vec<usize>,
        root: usize,
        max: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), MinorError> {
        self.tick()?;
        let mut s = sub.clone();
        s.sort_unstable();
        out.push(s);
        if sub.len() == max {
            return Ok(());
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in &self.adj[w] {
                if u > root
                    && self.owner[u].is_none()
                    && !sub.contains(&u)
                    && !ext.contains(&u)
                    && !next.contains(&u)
                    && !sub.iter().any(|&x| self.adj[x].contains(&u))
                {
                    next.push(u);
                }
            }
            sub.push(w);
            self.extend(sub, next, root, max, out)?;
            sub.pop();
        }
        Ok(())
    }

    fn run(&mut self, level: usize) -> Result<bool, MinorError> {
        if level == self.order.len() {
            return Ok(true);
        }
        let p = self.order[level];
        let free = self.owner.iter().filter(|o| o.is_none()).count();
        let remaining = self.order.len() - level - 1;
        if free < remaining + 1 {
            return Ok(false);
        }
        let placed: Vec<usize> = self.pat_adj[p].iter().copied().filter(|&q| !self.sets[q].is_empty()).collect();
        let unplaced = self.pat_adj[p].len() - placed.len();
        for set in self.connected_sets(free - remaining)? {
            self.tick()?;
            let touches = |q: usize, s: &Search| set.iter().any(|&h| s.adj[h].iter().any(|&x| s.owner[x] == Some(q)));
            if !placed.iter().all(|&q| touches(q, self)) {
                continue;
            }
            let mut frontier: BTreeSet<usize> = BTreeSet::new();
            for &h in &set {
                for &x in &self.adj[h] {
                    if self.owner[x].is_none() && !set.contains(&x) {
                        frontier.insert(x);
                    }
                }
            }
            if frontier.len() < unplaced {
                continue;
            }
            for &h in &set {
                self.owner[h] = Some(p);
            }
            self.sets[p] = set.clone();
            if self.run(level + 1)? {
                return Ok(true);
            }
            for &h in &set {
                self.owner[h] = None;
            }
            self.sets[p].clear();
        }
        Ok(false)
    }
}

/// Exact minor test by backtracking over connected branch sets.
///
/// Pattern vertices are placed one at a time (most constrained first); each
/// gets a connected set of unused host vertices that touches the sets of its
/// already placed neighbours and leaves enough free neighbours for the rest.
pub fn contains_minor(host: &MultiGraph, pattern: &MultiGraph, budget: u64) -> Result<Option<MinorWitness>, MinorError> {
    let (pc, pmap, _) = pattern.compact();
    let k = pc.vertex_count();
    if k > MINOR_PATTERN_LIMIT {
        return Err(MinorError::PatternTooLarge(k));
    }
    let (hc, hmap, _) = host.compact();
    let n = hc.vertex_count();
    let pairs = simple_pairs(&pc);
    if k > n || pairs.len() > simple_pairs(&hc).len() {
        return Ok(None);
    }
    let dense = |g: &MultiGraph| -> Vec<Vec<usize>> {
        g.vertices().map(|v| g.neighbor_set(v).into_iter().map(|w| w.index()).collect()).collect()
    };
    let adj = dense(&hc);
    let pat_adj = dense(&pc);

    // most constrained first: maximise placed neighbours, then degree
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let next = (0..k)
            .filter(|&p| !placed[p])
            .max_by_key(|&p| {
                let back = pat_adj[p].iter().filter(|&&q| placed[q]).count();
                (back, pat_adj[p].len(), std::cmp::Reverse(p))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }

    let mut s = Search {
        adj,
        pat_adj,
        order,
        owner: vec![None; n],
        sets: vec![Vec::new(); k],
        budget,
        nodes: 0,
        _host: host,
    };
    if !s.run(0)? {
        return Ok(None);
    }
    // map back to the caller's identifiers
    let p_back: Vec<VertexId> = {
        let mut v = vec![VertexId(0); k];
        for (old, new) in pmap.iter().enumerate() {
            if let Some(new) = new {
                v[new.index()] = VertexId(old as u32);
            }
        }
        v
    };
    let h_back: Vec<VertexId> = {
        let mut v = vec![VertexId(0); n];
        for (old, new) in hmap.iter().enumerate() {
            if let Some(new) = new {
                v[new.index()] = VertexId(old as u32);
            }
        }
        v
    };
    let branch = s
        .sets
        .iter()
        .enumerate()
        .map(|(p, set)| (p_back[p], set.iter().map(|&h| h_back[h]).collect()))
        .collect();
    MinorWitness::from_branches(host, pattern, branch).map(Some)
}
