//! Index for semi-repeat-free graphs built on three-node path windows.
//!
//! Documents are the reversed spells of all paths of up to three nodes:
//! every edge pair, every edge whose tail has no predecessor or whose head
//! has no successor, and every isolated node. An occurrence touching at
//! most three nodes lies wholly inside such a window, so growing the query
//! one prepended character at a time (which matches reversed prefixes)
//! answers it. Longer occurrences leave the windows, but their first three
//! nodes still fill a whole window suffix; refining with the separator
//! recovers that window, pins its unique last node, and the rest of the
//! query is walked over out-labels directly.

use super::{check_repeat_structure, IndexKind, OccursIndex, Witness};
use crate::efg::Efg;
use crate::stringds::GeneralizedSuffixStructure;
use crate::validity::{RepeatViolation, ValidityMode};
use std::collections::HashSet;

pub(crate) const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct PathWindow {
    /// One to three nodes in forward path order.
    pub nodes: Vec<u32>,
}

pub struct TripleIndex {
    pub(crate) g: Efg,
    /// Document 0 is empty so every window document has a separator on both
    /// sides; document `i + 1` holds window `i` reversed.
    pub(crate) gss: GeneralizedSuffixStructure,
    pub(crate) windows: Vec<PathWindow>,
    /// Per text position: the window's first node when the suffix at that
    /// position spans its two leading labels completely, else `NO_NODE`.
    pub(crate) ann: Vec<u32>,
}

impl TripleIndex {
    pub fn build(g: &Efg) -> Result<TripleIndex, RepeatViolation> {
        if let Some(bad) = check_repeat_structure(g, ValidityMode::SemiRepeatFree) {
            return Err(bad);
        }
        let mut windows = Vec::new();
        for &(v, w) in &g.edges {
            for &u in g.out_neighbors(w) {
                windows.push(PathWindow { nodes: vec![v, w, u] });
            }
        }
        for &(v, w) in &g.edges {
            if g.in_neighbors(v).is_empty() || g.out_neighbors(w).is_empty() {
                windows.push(PathWindow { nodes: vec![v, w] });
            }
        }
        for v in 0..g.n_nodes() as u32 {
            if g.in_neighbors(v).is_empty() && g.out_neighbors(v).is_empty() {
                windows.push(PathWindow { nodes: vec![v] });
            }
        }
        let mut docs = vec![Vec::new()];
        for w in &windows {
            let mut t: Vec<u8> =
                w.nodes.iter().flat_map(|&v| g.label(v).iter().copied()).collect();
            t.reverse();
            docs.push(t);
        }
        let gss = GeneralizedSuffixStructure::from_docs(&docs);
        let mut ann = vec![NO_NODE; gss.len()];
        for (i, w) in windows.iter().enumerate() {
            if w.nodes.len() < 2 {
                continue;
            }
            let total: usize = w.nodes.iter().map(|&v| g.label(v).len()).sum();
            let head2 = g.label(w.nodes[0]).len() + g.label(w.nodes[1]).len();
            let start = gss.doc_starts[i + 1];
            for off in 0..=(total - head2) {
                ann[start + off] = w.nodes[0];
            }
        }
        Ok(TripleIndex { g: g.clone(), gss, windows, ann })
    }

    /// Window index owning text position `pos`, with the offset of `pos`
    /// inside the window's reversed document.
    fn window_at(&self, pos: usize) -> (usize, usize) {
        let doc = self.gss.doc_of(pos);
        debug_assert!(doc >= 1, "position {pos} is in the padding document");
        (doc - 1, pos - self.gss.doc_starts[doc])
    }

    fn window_len(&self, w: usize) -> usize {
        self.windows[w].nodes.iter().map(|&v| self.g.label(v).len()).sum()
    }

    /// Graph position of forward offset `off` within window `w`.
    fn in_window(&self, w: usize, off: usize) -> Witness {
        let mut acc = 0usize;
        for &v in &self.windows[w].nodes {
            let l = self.g.label(v).len();
            if off < acc + l {
                return Witness { node: v, offset: off - acc };
            }
            acc += l;
        }
        unreachable!("offset {off} outside window {w}")
    }

    /// Can `rest` be spelled starting exactly at the first successor of `u`?
    /// `dead` memoizes failed (node, remaining length) states; every `rest`
    /// is a suffix of the same query, so the length identifies it.
    fn spells_from(&self, u: u32, rest: &[u8], dead: &mut HashSet<(u32, usize)>) -> bool {
        debug_assert!(!rest.is_empty());
        for &w in self.g.out_neighbors(u) {
            let lab = self.g.label(w);
            if rest.len() <= lab.len() {
                if &lab[..rest.len()] == rest {
                    return true;
                }
            } else if rest.starts_with(lab) {
                let next = &rest[lab.len()..];
                if !dead.contains(&(w, next.len())) && self.spells_from(w, next, dead) {
                    return true;
                }
            }
        }
        dead.insert((u, rest.len()));
        false
    }
}

impl OccursIndex for TripleIndex {
    fn kind(&self) -> IndexKind {
        IndexKind::Triple
    }

    fn graph(&self) -> &Efg {
        &self.g
    }

    fn occurs_with_witness(&self, q: &[u8]) -> Option<Witness> {
        if q.is_empty() {
            return Some(Witness { node: 0, offset: 0 });
        }
        let gss = &self.gss;
        // Prepending q[i] matches rev(q[..=i]), i.e. aligns q[..=i] ending
        // anywhere inside a window. Keep each step's interval.
        let mut ranges = Vec::with_capacity(q.len());
        let (mut lo, mut hi) = gss.full_range();
        for &c in q {
            let (l, h) = gss.backward_step(lo, hi, c);
            if l >= h {
                break;
            }
            lo = l;
            hi = h;
            ranges.push((lo, hi));
        }
        if ranges.len() == q.len() {
            // the whole query sits inside one window
            let (w, off) = self.window_at(gss.sa[lo] as usize);
            let end = self.window_len(w) - off;
            return Some(self.in_window(w, end - q.len()));
        }
        if ranges.is_empty() {
            return None;
        }
        // An occurrence through four or more nodes fills a whole window
        // suffix with some prefix q[..t], covering the window's last label
        // completely. Refining with the separator keeps the windows having
        // q[..t] as a full suffix; those whose last label fits inside the
        // suffix all end in the same node, which anchors the rest.
        let mut dead = HashSet::new();
        for t in (1..=ranges.len()).rev() {
            let (l, h) = ranges[t - 1];
            let (zl, zh) = gss.backward_step(l, h, 0);
            if zl >= zh {
                continue;
            }
            // each hit is the separator right before a qualifying window
            let mut anchor: Option<(usize, u32)> = None;
            for z in zl..zh {
                let pos = gss.sa[z] as usize;
                let w = gss.doc_of(pos);
                debug_assert!(w < self.windows.len());
                let last = *self.windows[w].nodes.last().unwrap();
                if self.g.label(last).len() > t {
                    // the suffix ends inside this label; a longer
                    // occurrence cannot leave the window here
                    continue;
                }
                match anchor {
                    None => {
                        anchor = Some((w, last));
                        if !cfg!(debug_assertions) {
                            break;
                        }
                    }
                    Some((_, u)) => debug_assert_eq!(
                        u, last,
                        "windows whose last label fits the suffix must end in the same node"
                    ),
                }
            }
            let Some((w, last)) = anchor else { continue };
            if self.spells_from(last, &q[t..], &mut dead) {
                let start = self.window_len(w) - t;
                return Some(self.in_window(w, start));
            }
        }
        None
    }
}
