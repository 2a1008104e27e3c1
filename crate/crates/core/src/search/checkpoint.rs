use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::SearchError;
use crate::graph::io::content_lines;

/// Progress of a search: the spec digest, completed index ranges
/// (half-open, disjoint, sorted) and the indices that passed the filter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Checkpoint {
    pub digest: String,
    done: Vec<(u64, u64)>,
    pub hits: BTreeSet<u64>,
}

impl Checkpoint {
    pub fn new(digest: impl Into<String>) -> Self {
        Checkpoint { digest: digest.into(), done: Vec::new(), hits: BTreeSet::new() }
    }

    pub fn done(&self) -> &[(u64, u64)] {
        &self.done
    }

    /// Marks `[lo, hi)` as done, merging with adjacent or overlapping ranges.
    pub fn mark_done(&mut self, lo: u64, hi: u64) {
        if lo >= hi {
            return;
        }
        self.done.push((lo, hi));
        self.done.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(self.done.len());
        for &(a, b) in &self.done {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        self.done = merged;
    }

    /// Number of indices in `[lo, hi)` already done.
    pub fn covered(&self, lo: u64, hi: u64) -> u64 {
        self.done.iter().map(|&(a, b)| b.min(hi).saturating_sub(a.max(lo))).sum()
    }

    /// Sub-ranges of `[lo, hi)` not yet done.
    pub fn pending(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut at = lo;
        for &(a, b) in &self.done {
            if b <= at {
                continue;
            }
            if a >= hi {
                break;
            }
            if a > at {
                out.push((at, a));
            }
            at = at.max(b);
        }
        if at < hi {
            out.push((at, hi));
        }
        out
    }

    /// Union with another checkpoint of the same spec.
    pub fn merge(&mut self, other: &Checkpoint) -> Result<(), SearchError> {
        if other.digest != self.digest {
            return Err(SearchError::DigestMismatch { expected: self.digest.clone(), found: other.digest.clone() });
        }
        for &(a, b) in &other.done {
            self.mark_done(a, b);
        }
        self.hits.extend(other.hits.iter().copied());
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("spec {}\n", self.digest);
        for &(a, b) in &self.done {
            let _ = writeln!(out, "done {a} {b}");
        }
        for h in &self.hits {
            let _ = writeln!(out, "hit {h}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Checkpoint, SearchError> {
        let bad = |line: usize, msg: &str| SearchError::Checkpoint { line, msg: msg.to_string() };
        let mut lines = content_lines(text);
        let (ln, first) = lines.next().ok_or_else(|| bad(0, "empty checkpoint"))?;
        let digest = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["spec", d] => d.to_string(),
            _ => return Err(bad(ln, "expected `spec <digest>`")),
        };
        let mut cp = Checkpoint::new(digest);
        for (ln, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| bad(ln, "bad index"));
            match parts.as_slice() {
                ["done", a, b] => {
                    let (a, b) = (num(a)?, num(b)?);
                    if a > b {
                        return Err(bad(ln, "empty range"));
                    }
                    if cp.covered(a, b) > 0 {
                        return Err(bad(ln, "overlapping ranges"));
                    }
                    cp.mark_done(a, b);
                }
                ["hit", h] => {
                    cp.hits.insert(num(h)?);
                }
                _ => return Err(bad(ln, "expected `done <lo> <hi>` or `hit <index>`")),
            }
        }
        Ok(cp)
    }

    pub fn load(path: &Path) -> Result<Option<Checkpoint>, SearchError> {
        match fs::read_to_string(path) {
            Ok(text) => Checkpoint::parse(&text).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes to a sibling temporary file and renames it into place.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, self.to_text())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
