//! Pattern indexes over segmented founder graphs.
//!
//! Three interchangeable structures answer "does `q` occur as a path
//! substring": [`ClassicIndex`] (label automaton plus boundary tries),
//! [`ExpandedBwtIndex`] (backward search with interval expansion) and
//! [`TripleIndex`] (three-node windows, works on semi-repeat-free
//! graphs too). All report a start position on success.

pub mod classic;
pub mod ebwt;
pub mod io;
pub mod triple;

pub use classic::ClassicIndex;
pub use ebwt::ExpandedBwtIndex;
pub use io::{read_index, write_index, IndexIoError};
pub use triple::TripleIndex;

use crate::efg::Efg;
use crate::stringds::GeneralizedSuffixStructure;
use crate::validity::{RepeatViolation, ValidityMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Classic,
    Ebwt,
    Triple,
}

impl IndexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::Classic => "classic",
            IndexKind::Ebwt => "ebwt",
            IndexKind::Triple => "triple",
        }
    }

    pub fn parse(s: &str) -> Option<IndexKind> {
        match s {
            "classic" => Some(IndexKind::Classic),
            "ebwt" => Some(IndexKind::Ebwt),
            "triple" => Some(IndexKind::Triple),
            _ => None,
        }
    }
}

/// Start position of one occurrence: `offset` bytes into `label(node)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub node: u32,
    pub offset: usize,
}

pub trait OccursIndex {
    fn kind(&self) -> IndexKind;
    fn graph(&self) -> &Efg;
    /// Some start position of `q` in the graph, or None if `q` does not occur.
    fn occurs_with_witness(&self, q: &[u8]) -> Option<Witness>;

    fn occurs(&self, q: &[u8]) -> bool {
        self.occurs_with_witness(q).is_some()
    }
}

/// Any pattern spanning at most two nodes occurs in the graph iff it occurs
/// in one of these documents: `label(v) label(w)` per edge `(v, w)`, plus
/// bare labels of nodes without any edge.
pub(crate) struct WindowText {
    pub gss: GeneralizedSuffixStructure,
    pub pieces: Vec<WindowPiece>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct WindowPiece {
    pub first: u32,
    pub second: Option<u32>,
    /// Length of `label(first)`, where the second label starts.
    pub split: usize,
}

impl WindowText {
    pub fn build(g: &Efg) -> WindowText {
        let mut docs = Vec::with_capacity(g.edges.len());
        let mut pieces = Vec::with_capacity(g.edges.len());
        for &(v, w) in &g.edges {
            let mut doc = g.label(v).to_vec();
            doc.extend_from_slice(g.label(w));
            pieces.push(WindowPiece { first: v, second: Some(w), split: g.label(v).len() });
            docs.push(doc);
        }
        for v in 0..g.n_nodes() as u32 {
            if g.out_neighbors(v).is_empty() && g.in_neighbors(v).is_empty() {
                pieces.push(WindowPiece { first: v, second: None, split: g.label(v).len() });
                docs.push(g.label(v).to_vec());
            }
        }
        WindowText { gss: GeneralizedSuffixStructure::from_docs(&docs), pieces }
    }

    /// Graph position spelled by text position `pos` (must not be a separator).
    pub fn locate(&self, pos: usize) -> Witness {
        let doc = self.gss.doc_of(pos);
        let piece = &self.pieces[doc];
        let off = pos - self.gss.doc_starts[doc];
        if off < piece.split {
            Witness { node: piece.first, offset: off }
        } else {
            Witness { node: piece.second.expect("offset past a one-node piece"), offset: off - piece.split }
        }
    }
}

const NO_STATE: u32 = u32::MAX;

/// Static trie over byte strings; leaves carry graph node ids.
pub(crate) struct Trie {
    /// Sorted `(symbol, child)` lists per state. State 0 is the root.
    pub children: Vec<Vec<(u8, u32)>>,
    pub leaf: Vec<Option<u32>>,
    /// Some leaf id in the subtree, for recovering a concrete match.
    pub repr: Vec<u32>,
}

impl Trie {
    pub fn build(strings: impl Iterator<Item = (Vec<u8>, u32)>) -> Trie {
        let mut children: Vec<Vec<(u8, u32)>> = vec![Vec::new()];
        let mut leaf: Vec<Option<u32>> = vec![None];
        for (s, id) in strings {
            let mut state = 0usize;
            for &c in &s {
                state = match children[state].binary_search_by_key(&c, |e| e.0) {
                    Ok(i) => children[state][i].1 as usize,
                    Err(i) => {
                        let next = children.len() as u32;
                        children[state].insert(i, (c, next));
                        children.push(Vec::new());
                        leaf.push(None);
                        next as usize
                    }
                };
            }
            debug_assert!(leaf[state].is_none(), "duplicate string in trie");
            leaf[state] = Some(id);
        }
        let mut repr = vec![NO_STATE; children.len()];
        // reverse preorder: children are always allocated after their parent
        for state in (0..children.len()).rev() {
            if let Some(id) = leaf[state] {
                repr[state] = id;
            } else if let Some(&(_, ch)) = children[state].first() {
                repr[state] = repr[ch as usize];
            }
        }
        Trie { children, leaf, repr }
    }

    pub fn child(&self, state: u32, c: u8) -> Option<u32> {
        let list = &self.children[state as usize];
        list.binary_search_by_key(&c, |e| e.0).ok().map(|i| list[i].1)
    }
}

/// Aho-Corasick automaton over the node labels. Several nodes may share a
/// label (only on invalid input graphs), so each match state lists every
/// node whose label ends there.
pub(crate) struct LabelAutomaton {
    children: Vec<Vec<(u8, u32)>>,
    fail: Vec<u32>,
    /// Node ids whose full label ends at this state.
    hits: Vec<Vec<u32>>,
    /// Nearest proper fail-ancestor with hits, or `NO_STATE`.
    hit_link: Vec<u32>,
}

impl LabelAutomaton {
    pub fn new(g: &Efg) -> LabelAutomaton {
        let mut children: Vec<Vec<(u8, u32)>> = vec![Vec::new()];
        let mut hits: Vec<Vec<u32>> = vec![Vec::new()];
        for v in 0..g.n_nodes() as u32 {
            let mut state = 0usize;
            for &c in g.label(v) {
                state = match children[state].binary_search_by_key(&c, |e| e.0) {
                    Ok(i) => children[state][i].1 as usize,
                    Err(i) => {
                        let next = children.len() as u32;
                        children[state].insert(i, (c, next));
                        children.push(Vec::new());
                        hits.push(Vec::new());
                        next as usize
                    }
                };
            }
            hits[state].push(v);
        }
        let n = children.len();
        let mut fail = vec![0u32; n];
        let mut hit_link = vec![NO_STATE; n];
        let mut queue: std::collections::VecDeque<u32> = children[0].iter().map(|&(_, s)| s).collect();
        while let Some(state) = queue.pop_front() {
            let f = fail[state as usize];
            hit_link[state as usize] =
                if !hits[f as usize].is_empty() { f } else { hit_link[f as usize] };
            for &(c, ch) in &children[state as usize].clone() {
                // walk fail links to find the longest proper suffix state with a c-child
                let mut t = fail[state as usize];
                fail[ch as usize] = loop {
                    if let Some(next) = Self::step(&children, t, c) {
                        break next;
                    }
                    if t == 0 {
                        break 0;
                    }
                    t = fail[t as usize];
                };
                if fail[ch as usize] == ch {
                    fail[ch as usize] = 0;
                }
                queue.push_back(ch);
            }
        }
        LabelAutomaton { children, fail, hits, hit_link }
    }

    fn step(children: &[Vec<(u8, u32)>], state: u32, c: u8) -> Option<u32> {
        let list = &children[state as usize];
        list.binary_search_by_key(&c, |e| e.0).ok().map(|i| list[i].1)
    }

    /// Reports every label occurrence as `(end_index, node)`; `end_index` is
    /// the index of the last matched byte. Returning `true` from the
    /// callback stops the scan early.
    pub fn scan(&self, text: &[u8], mut on_match: impl FnMut(usize, u32) -> bool) {
        let mut state = 0u32;
        for (i, &c) in text.iter().enumerate() {
            state = loop {
                if let Some(next) = Self::step(&self.children, state, c) {
                    break next;
                }
                if state == 0 {
                    break 0;
                }
                state = self.fail[state as usize];
            };
            let mut t = if self.hits[state as usize].is_empty() {
                self.hit_link[state as usize]
            } else {
                state
            };
            while t != NO_STATE {
                for &v in &self.hits[t as usize] {
                    if on_match(i, v) {
                        return;
                    }
                }
                t = self.hit_link[t as usize];
            }
        }
    }
}

/// Scan-based equivalent of [`crate::validity::find_repeat_violation`]:
/// every label occurrence inside a two-node window must start the window or
/// its second label, and the matched node must satisfy the mode rule there
/// (equal node when repeat-free, equal block when semi-repeat-free).
///
/// Bails out at the first bad match, so invalid graphs stay cheap.
pub fn check_repeat_structure(g: &Efg, mode: ValidityMode) -> Option<RepeatViolation> {
    let ac = LabelAutomaton::new(g);
    let allowed = |w: u32, at: u32| match mode {
        ValidityMode::RepeatFree => w == at,
        ValidityMode::SemiRepeatFree => g.block_of(w) == g.block_of(at),
    };
    let mut window = Vec::new();
    let mut check = |first: u32, second: Option<u32>| -> Option<RepeatViolation> {
        window.clear();
        window.extend_from_slice(g.label(first));
        let split = window.len();
        if let Some(w) = second {
            window.extend_from_slice(g.label(w));
        }
        let mut bad = None;
        ac.scan(&window, |end, w| {
            let s = end + 1 - g.label(w).len();
            let ok = if s == 0 {
                allowed(w, first)
            } else if s == split {
                allowed(w, second.expect("interior match needs a second node"))
            } else {
                false
            };
            if ok {
                false
            } else {
                let (at_node, offset) =
                    if s < split { (first, s) } else { (second.unwrap(), s - split) };
                bad = Some(RepeatViolation { pattern_node: w, at_node, offset });
                true
            }
        });
        bad
    };
    for &(v, w) in &g.edges {
        if let Some(hit) = check(v, Some(w)) {
            return Some(hit);
        }
    }
    for v in 0..g.n_nodes() as u32 {
        if g.out_neighbors(v).is_empty() && g.in_neighbors(v).is_empty() {
            if let Some(hit) = check(v, None) {
                return Some(hit);
            }
        }
    }
    None
}

/// Runtime-checked construction of any index kind.
pub fn build_index(g: &Efg, kind: IndexKind) -> Result<AnyIndex, RepeatViolation> {
    Ok(match kind {
        IndexKind::Classic => AnyIndex::Classic(ClassicIndex::build(g)?),
        IndexKind::Ebwt => AnyIndex::Ebwt(ExpandedBwtIndex::build(g)?),
        IndexKind::Triple => AnyIndex::Triple(TripleIndex::build(g)?),
    })
}

pub enum AnyIndex {
    Classic(ClassicIndex),
    Ebwt(ExpandedBwtIndex),
    Triple(TripleIndex),
}

impl OccursIndex for AnyIndex {
    fn kind(&self) -> IndexKind {
        match self {
            AnyIndex::Classic(i) => i.kind(),
            AnyIndex::Ebwt(i) => i.kind(),
            AnyIndex::Triple(i) => i.kind(),
        }
    }

    fn graph(&self) -> &Efg {
        match self {
            AnyIndex::Classic(i) => i.graph(),
            AnyIndex::Ebwt(i) => i.graph(),
            AnyIndex::Triple(i) => i.graph(),
        }
    }

    fn occurs_with_witness(&self, q: &[u8]) -> Option<Witness> {
        match self {
            AnyIndex::Classic(i) => i.occurs_with_witness(q),
            AnyIndex::Ebwt(i) => i.occurs_with_witness(q),
            AnyIndex::Triple(i) => i.occurs_with_witness(q),
        }
    }
}

/// True iff `q` occurs starting exactly at `offset` bytes into `label(node)`.
pub fn occurs_at(g: &Efg, q: &[u8], node: u32, offset: usize) -> bool {
    fn from(g: &Efg, v: u32, skip: usize, q: &[u8]) -> bool {
        let lab = &g.label(v)[skip.min(g.label(v).len())..];
        if q.len() <= lab.len() {
            return &lab[..q.len()] == q;
        }
        if !q.starts_with(lab) {
            return false;
        }
        let rest = &q[lab.len()..];
        g.out_neighbors(v).iter().any(|&w| from(g, w, 0, rest))
    }
    offset < g.label(node).len() && from(g, node, offset, q)
}
