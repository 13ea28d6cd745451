//! Character automata over founder graphs and the Wheeler ordering.
//!
//! A repeat-free graph unrolls into one automaton state per label
//! character. That automaton need not admit a Wheeler order directly: a
//! state entered through several graph edges mixes incoming strings. Giving
//! every node one chain copy per in-edge separates those strings, after
//! which sorting states by the colexicographically smallest string leading
//! into them produces an order that [`verify_wheeler`] checks against the
//! definition, pair of edges by pair of edges.

use crate::efg::Efg;
use crate::index::check_repeat_structure;
use crate::validity::{RepeatViolation, ValidityMode};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

const NO_NODE: u32 = u32::MAX;

/// One state per label character, shared between all paths through the
/// node. State 0 is the initial state and carries symbol 0.
pub struct CharNfa {
    pub symbols: Vec<u8>,
    /// Owning graph node, `NO_NODE` for the initial state.
    pub node: Vec<u32>,
    /// Character position inside the owning label.
    pub pos: Vec<u32>,
    pub accepting: Vec<bool>,
    pub edges: Vec<(u32, u32)>,
}

impl CharNfa {
    pub fn n_states(&self) -> usize {
        self.symbols.len()
    }
}

/// Unrolls the graph: a chain of states per node, entered from the initial
/// state for first-block nodes and from the predecessor chain ends
/// otherwise. Accepting states are the chain ends of last-block nodes.
pub fn efg_to_nfa(g: &Efg) -> Result<CharNfa, RepeatViolation> {
    if let Some(bad) = check_repeat_structure(g, ValidityMode::RepeatFree) {
        return Err(bad);
    }
    let last_block = g.n_blocks() as u32 - 1;
    let mut symbols = vec![0u8];
    let mut node = vec![NO_NODE];
    let mut pos = vec![0u32];
    let mut accepting = vec![false];
    let mut first = vec![0u32; g.n_nodes()];
    let mut last = vec![0u32; g.n_nodes()];
    for v in 0..g.n_nodes() {
        first[v] = symbols.len() as u32;
        for (i, &c) in g.label(v as u32).iter().enumerate() {
            symbols.push(c);
            node.push(v as u32);
            pos.push(i as u32);
            accepting.push(false);
        }
        last[v] = symbols.len() as u32 - 1;
        if g.block_of(v as u32) == last_block {
            accepting[last[v] as usize] = true;
        }
    }
    let mut edges = Vec::new();
    for v in 0..g.n_nodes() {
        if g.block_of(v as u32) == 0 {
            edges.push((0, first[v]));
        }
        for s in first[v]..last[v] {
            edges.push((s, s + 1));
        }
    }
    for &(u, v) in &g.edges {
        edges.push((last[u as usize], first[v as usize]));
    }
    Ok(CharNfa { symbols, node, pos, accepting, edges })
}

/// Subset-construction determinization, for comparing languages.
pub struct Dfa {
    pub subsets: Vec<Vec<u32>>,
    pub accepting: Vec<bool>,
    pub edges: Vec<(u32, u8, u32)>,
}

pub fn determinize(nfa: &CharNfa) -> Dfa {
    let mut out_adj: Vec<Vec<u32>> = vec![Vec::new(); nfa.n_states()];
    for &(u, v) in &nfa.edges {
        out_adj[u as usize].push(v);
    }
    let mut subsets: Vec<Vec<u32>> = vec![vec![0]];
    let mut accepting = vec![nfa.accepting[0]];
    let mut edges = Vec::new();
    let mut seen = std::collections::HashMap::new();
    seen.insert(vec![0u32], 0u32);
    let mut queue = std::collections::VecDeque::from([0u32]);
    while let Some(d) = queue.pop_front() {
        let byte_targets: BTreeSet<u8> = subsets[d as usize]
            .iter()
            .flat_map(|&s| out_adj[s as usize].iter().map(|&t| nfa.symbols[t as usize]))
            .collect();
        for c in byte_targets {
            let mut next: Vec<u32> = subsets[d as usize]
                .iter()
                .flat_map(|&s| out_adj[s as usize].iter().copied())
                .filter(|&t| nfa.symbols[t as usize] == c)
                .collect();
            next.sort_unstable();
            next.dedup();
            let id = *seen.entry(next.clone()).or_insert_with(|| {
                let id = subsets.len() as u32;
                accepting.push(next.iter().any(|&t| nfa.accepting[t as usize]));
                subsets.push(next);
                queue.push_back(id);
                id
            });
            edges.push((d, c, id));
        }
    }
    Dfa { subsets, accepting, edges }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WheelerFault {
    #[error("edge ({u1}->{v1}) reads {s1:?} and edge ({u2}->{v2}) reads {s2:?}, but the targets are ordered the other way")]
    EdgePair { u1: u32, v1: u32, s1: char, u2: u32, v2: u32, s2: char },
    #[error("state {lower} admits incoming string {lower_string:?} which colexicographically exceeds {upper_string:?} into state {upper}")]
    InStrings { lower: u32, upper: u32, lower_string: String, upper_string: String },
    #[error("{0}")]
    Structure(String),
}

#[derive(Debug, Error)]
pub enum WheelerError {
    #[error("graph is not repeat-free: label of node {} occurs at node {} offset {}",
        .0.pattern_node, .0.at_node, .0.offset)]
    NotRepeatFree(RepeatViolation),
    #[error("no consistent order: {0}")]
    NotOrderable(WheelerFault),
}

/// Automaton whose state ids are the Wheeler order: 0 is initial and every
/// in-edge of state `s` reads `symbols[s]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WheelerAutomaton {
    pub symbols: Vec<u8>,
    pub accepting: Vec<bool>,
    pub edges: Vec<(u32, u32)>,
    /// `(node, char position, copy)` per state; the initial state stores
    /// `(!0, 0, 0)`.
    pub provenance: Vec<(u32, u32, u32)>,
}

impl WheelerAutomaton {
    pub fn n_states(&self) -> usize {
        self.symbols.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("automaton serializes")
    }

    pub fn from_json(input: &str) -> Result<WheelerAutomaton, String> {
        serde_json::from_str(input).map_err(|e| e.to_string())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph wheeler {\n  rankdir=LR;\n");
        for i in 0..self.n_states() {
            let sym = if i == 0 { '^'.to_string() } else { (self.symbols[i] as char).to_string() };
            let shape = if self.accepting[i] { "doublecircle" } else { "circle" };
            s.push_str(&format!("  s{i} [label=\"{i}:{sym}\", shape={shape}];\n"));
        }
        for &(u, v) in &self.edges {
            s.push_str(&format!("  s{u} -> s{v};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// All accepted strings; the state graph is acyclic so this terminates.
    pub fn accepted_strings(&self) -> BTreeSet<Vec<u8>> {
        let mut out_adj: Vec<Vec<u32>> = vec![Vec::new(); self.n_states()];
        for &(u, v) in &self.edges {
            out_adj[u as usize].push(v);
        }
        let mut done = BTreeSet::new();
        let mut stack = vec![(0u32, Vec::new())];
        while let Some((s, spelled)) = stack.pop() {
            if self.accepting[s as usize] {
                done.insert(spelled.clone());
            }
            for &t in &out_adj[s as usize] {
                let mut next = spelled.clone();
                next.push(self.symbols[t as usize]);
                stack.push((t, next));
            }
        }
        done
    }
}

/// Expands a repeat-free graph into chain copies, one per in-edge, and
/// numbers the states by the colexicographically smallest incoming string.
pub fn wheeler_automaton(g: &Efg) -> Result<WheelerAutomaton, WheelerError> {
    if let Some(bad) = check_repeat_structure(g, ValidityMode::RepeatFree) {
        return Err(WheelerError::NotRepeatFree(bad));
    }
    let last_block = g.n_blocks() as u32 - 1;
    // feeds[v]: where each chain copy of v is entered from; None = initial
    let mut feeds: Vec<Vec<Option<u32>>> = vec![Vec::new(); g.n_nodes()];
    for v in 0..g.n_nodes() as u32 {
        if g.block_of(v) == 0 {
            feeds[v as usize].push(None);
        }
        for &u in g.in_neighbors(v) {
            feeds[v as usize].push(Some(u));
        }
    }
    let mut symbols = vec![0u8];
    let mut accepting = vec![false];
    let mut provenance = vec![(NO_NODE, 0u32, 0u32)];
    // chain_first[v][copy], chain ends per node for wiring
    let mut chain_first: Vec<Vec<u32>> = vec![Vec::new(); g.n_nodes()];
    let mut chain_last: Vec<Vec<u32>> = vec![Vec::new(); g.n_nodes()];
    for v in 0..g.n_nodes() {
        for copy in 0..feeds[v].len() {
            chain_first[v].push(symbols.len() as u32);
            for (i, &c) in g.label(v as u32).iter().enumerate() {
                symbols.push(c);
                accepting.push(false);
                provenance.push((v as u32, i as u32, copy as u32));
            }
            let end = symbols.len() as u32 - 1;
            chain_last[v].push(end);
            if g.block_of(v as u32) == last_block {
                accepting[end as usize] = true;
            }
        }
    }
    let max_indeg =
        (0..g.n_nodes() as u32).map(|v| g.in_neighbors(v).len()).max().unwrap_or(0).max(1);
    let total_label: usize = (0..g.n_nodes() as u32).map(|v| g.label(v).len()).sum();
    assert!(symbols.len() <= 1 + total_label * max_indeg, "expansion exceeded its size bound");
    let mut edges = Vec::new();
    for v in 0..g.n_nodes() {
        for (copy, feed) in feeds[v].iter().enumerate() {
            match feed {
                None => edges.push((0, chain_first[v][copy])),
                Some(u) => {
                    for &u_end in &chain_last[*u as usize] {
                        edges.push((u_end, chain_first[v][copy]));
                    }
                }
            }
            for s in chain_first[v][copy]..chain_last[v][copy] {
                edges.push((s, s + 1));
            }
        }
    }
    // smallest incoming string, reversed so lexicographic comparison is
    // colexicographic on the original; states were allocated in block order
    // so every predecessor id is smaller
    let n = symbols.len();
    let mut in_adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in &edges {
        debug_assert!(u < v, "chain allocation must be topological");
        in_adj[v as usize].push(u);
    }
    let mut key: Vec<Vec<u8>> = vec![Vec::new(); n];
    for s in 1..n {
        let mut best: Option<Vec<u8>> = None;
        for &u in &in_adj[s] {
            let mut cand = Vec::with_capacity(key[u as usize].len() + 1);
            cand.push(symbols[s]);
            cand.extend_from_slice(&key[u as usize]);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        key[s] = best.expect("non-initial state without in-edges");
    }
    let mut order: Vec<u32> = (1..n as u32).collect();
    order.sort_by(|&a, &b| {
        key[a as usize]
            .cmp(&key[b as usize])
            .then_with(|| provenance[a as usize].cmp(&provenance[b as usize]))
    });
    let mut rank = vec![0u32; n];
    for (i, &s) in order.iter().enumerate() {
        rank[s as usize] = i as u32 + 1;
    }
    let mut new_symbols = vec![0u8; n];
    let mut new_accepting = vec![false; n];
    let mut new_prov = vec![(NO_NODE, 0u32, 0u32); n];
    for s in 0..n {
        let r = rank[s] as usize;
        new_symbols[r] = symbols[s];
        new_accepting[r] = accepting[s];
        new_prov[r] = provenance[s];
    }
    let mut new_edges: Vec<(u32, u32)> =
        edges.iter().map(|&(u, v)| (rank[u as usize], rank[v as usize])).collect();
    new_edges.sort_unstable();
    let aut = WheelerAutomaton {
        symbols: new_symbols,
        accepting: new_accepting,
        edges: new_edges,
        provenance: new_prov,
    };
    verify_wheeler(&aut).map_err(WheelerError::NotOrderable)?;
    Ok(aut)
}

/// Checks the ordering from scratch: initial state first, in-symbols
/// uniform per state, the two edge-pair axioms, and (independently) that
/// every incoming string of a lower state colexicographically precedes
/// every incoming string of a higher one.
pub fn verify_wheeler(aut: &WheelerAutomaton) -> Result<(), WheelerFault> {
    let n = aut.n_states();
    if n == 0 || aut.symbols[0] != 0 {
        return Err(WheelerFault::Structure("missing initial state".into()));
    }
    let mut indeg = vec![0usize; n];
    for &(u, v) in &aut.edges {
        if v == 0 {
            return Err(WheelerFault::Structure("initial state has an in-edge".into()));
        }
        if u as usize >= n || v as usize >= n {
            return Err(WheelerFault::Structure(format!("edge ({u},{v}) out of range")));
        }
        indeg[v as usize] += 1;
    }
    for s in 1..n {
        if indeg[s] == 0 {
            return Err(WheelerFault::Structure(format!("state {s} is unreachable")));
        }
        if aut.symbols[s] == 0 {
            return Err(WheelerFault::Structure(format!("state {s} reads the null symbol")));
        }
    }
    for &(u1, v1) in &aut.edges {
        let s1 = aut.symbols[v1 as usize];
        for &(u2, v2) in &aut.edges {
            let s2 = aut.symbols[v2 as usize];
            let bad = (s1 < s2 && v1 >= v2) || (s1 == s2 && u1 < u2 && v1 > v2);
            if bad {
                return Err(WheelerFault::EdgePair {
                    u1,
                    v1,
                    s1: s1 as char,
                    u2,
                    v2,
                    s2: s2 as char,
                });
            }
        }
    }
    // string-level check; reversed strings so plain comparison is colex
    let mut in_adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in &aut.edges {
        in_adj[v as usize].push(u);
    }
    fn strings_rev(
        aut: &WheelerAutomaton,
        in_adj: &[Vec<u32>],
        memo: &mut Vec<Option<BTreeSet<Vec<u8>>>>,
        s: u32,
    ) -> BTreeSet<Vec<u8>> {
        if let Some(done) = &memo[s as usize] {
            return done.clone();
        }
        let mut out = BTreeSet::new();
        if s == 0 {
            out.insert(Vec::new());
        }
        for &u in &in_adj[s as usize] {
            for prev in strings_rev(aut, in_adj, memo, u) {
                let mut w = Vec::with_capacity(prev.len() + 1);
                w.push(aut.symbols[s as usize]);
                w.extend_from_slice(&prev);
                out.insert(w);
            }
        }
        memo[s as usize] = Some(out.clone());
        out
    }
    let mut memo = vec![None; n];
    let mut prev_max: Option<(u32, Vec<u8>)> = None;
    for s in 1..n as u32 {
        let set = strings_rev(aut, &in_adj, &mut memo, s);
        let lo = set.first().cloned().unwrap_or_default();
        let hi = set.last().cloned().unwrap_or_default();
        if let Some((t, t_max)) = &prev_max {
            if *t_max > lo {
                let show = |w: &[u8]| {
                    let mut fwd = w.to_vec();
                    fwd.reverse();
                    String::from_utf8_lossy(&fwd).into_owned()
                };
                return Err(WheelerFault::InStrings {
                    lower: *t,
                    upper: s,
                    lower_string: show(t_max),
                    upper_string: show(&lo),
                });
            }
        }
        prev_max = Some((s, hi));
    }
    Ok(())
}
