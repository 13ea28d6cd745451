//! Label-anchored index for repeat-free graphs.
//!
//! Repeat-freeness makes every full node label that shows up inside a query
//! a fixed anchor: the query can only occur with that stretch lying exactly
//! on that node. So one anchored candidate is checked by walking the
//! remaining prefix backwards over in-neighbor tries and the remaining
//! suffix forwards over out-neighbor tries, both walks deterministic.
//! Queries without any full label inside span at most two nodes and are
//! answered from the two-node window text.

use super::{
    check_repeat_structure, IndexKind, LabelAutomaton, OccursIndex, Trie, WindowText, Witness,
};
use crate::efg::Efg;
use crate::validity::{RepeatViolation, ValidityMode};

pub struct ClassicIndex {
    pub(crate) g: Efg,
    pub(crate) ac: LabelAutomaton,
    /// Per node: reversed labels of its in-neighbors, leaf = neighbor id.
    pub(crate) back_tries: Vec<Trie>,
    /// Per node: labels of its out-neighbors, leaf = neighbor id.
    pub(crate) fwd_tries: Vec<Trie>,
    pub(crate) windows: WindowText,
}

impl ClassicIndex {
    pub fn build(g: &Efg) -> Result<ClassicIndex, RepeatViolation> {
        if let Some(bad) = check_repeat_structure(g, ValidityMode::RepeatFree) {
            return Err(bad);
        }
        let back_tries = (0..g.n_nodes() as u32)
            .map(|v| {
                Trie::build(g.in_neighbors(v).iter().map(|&u| {
                    let mut rev = g.label(u).to_vec();
                    rev.reverse();
                    (rev, u)
                }))
            })
            .collect();
        let fwd_tries = (0..g.n_nodes() as u32)
            .map(|v| {
                Trie::build(g.out_neighbors(v).iter().map(|&w| (g.label(w).to_vec(), w)))
            })
            .collect();
        Ok(ClassicIndex {
            g: g.clone(),
            ac: LabelAutomaton::new(g),
            back_tries,
            fwd_tries,
            windows: WindowText::build(g),
        })
    }

    /// Matches `prefix` right to left against paths ending where `v` starts.
    /// Returns the start position. In a repeat-free graph no in-label is a
    /// suffix of another, so the walk never has to branch.
    fn walk_left(&self, v: u32, prefix: &[u8]) -> Option<Witness> {
        let mut node = v;
        let mut trie = &self.back_tries[v as usize];
        let mut state = 0u32;
        let mut depth = 0usize;
        for &c in prefix.iter().rev() {
            state = trie.child(state, c)?;
            depth += 1;
            if let Some(u) = trie.leaf[state as usize] {
                debug_assert!(trie.children[state as usize].is_empty());
                node = u;
                trie = &self.back_tries[u as usize];
                state = 0;
                depth = 0;
            }
        }
        if state == 0 {
            Some(Witness { node, offset: 0 })
        } else {
            // stopped inside a partially consumed in-label; any leaf below
            // witnesses a real predecessor
            let u = trie.repr[state as usize];
            Some(Witness { node: u, offset: self.g.label(u).len() - depth })
        }
    }

    /// Matches `suffix` left to right along out-labels starting after `v`.
    /// Out-labels of a repeat-free graph are prefix-free, so this walk is
    /// deterministic too.
    fn walk_right(&self, v: u32, suffix: &[u8]) -> bool {
        let mut trie = &self.fwd_tries[v as usize];
        let mut state = 0u32;
        for &c in suffix {
            match trie.child(state, c) {
                Some(next) => state = next,
                None => return false,
            }
            if let Some(w) = trie.leaf[state as usize] {
                debug_assert!(trie.children[state as usize].is_empty());
                trie = &self.fwd_tries[w as usize];
                state = 0;
            }
        }
        true
    }
}

impl OccursIndex for ClassicIndex {
    fn kind(&self) -> IndexKind {
        IndexKind::Classic
    }

    fn graph(&self) -> &Efg {
        &self.g
    }

    fn occurs_with_witness(&self, q: &[u8]) -> Option<Witness> {
        if q.is_empty() {
            return Some(Witness { node: 0, offset: 0 });
        }
        let mut anchor: Option<(usize, u32)> = None;
        self.ac.scan(q, |end, v| {
            anchor = Some((end, v));
            true
        });
        match anchor {
            None => {
                let (lo, hi) = self.windows.gss.find(q);
                if lo >= hi {
                    return None;
                }
                Some(self.windows.locate(self.windows.gss.sa[lo] as usize))
            }
            Some((end, v)) => {
                let s = end + 1 - self.g.label(v).len();
                let start = self.walk_left(v, &q[..s])?;
                if self.walk_right(v, &q[end + 1..]) {
                    Some(start)
                } else {
                    None
                }
            }
        }
    }
}
