//! Reference matchers and the orthogonal-vectors stress generator.
//!
//! [`online_match`] answers occurs(Q) for an arbitrary graph in
//! O(|Q|·(N+E)/w) time with bit-parallel frontiers; it is the oracle the
//! index implementations are tested against. [`occurs_brute_force`] is the
//! slower second opinion. The `Ov*` items turn an orthogonal-vectors
//! instance into a query string plus a graph whose matching behaviour
//! encodes the instance, which is the standard way to stress-test matchers
//! near their conditional lower bound.

use std::collections::HashMap;

use crate::efg::{Efg, EfgNode};

/// Matches `q` against every path by plain recursion. Exponential in the
/// worst case; for tests only.
pub fn occurs_brute_force(g: &Efg, q: &[u8]) -> bool {
    if q.is_empty() {
        return true;
    }
    (0..g.n_nodes() as u32)
        .any(|v| (0..g.label(v).len()).any(|off| brute_match_at(g, q, v, off)))
}

fn brute_match_at(g: &Efg, q: &[u8], v: u32, off: usize) -> bool {
    let lab = &g.label(v)[off..];
    let k = q.len().min(lab.len());
    if q[..k] != lab[..k] {
        return false;
    }
    if q.len() <= lab.len() {
        return true;
    }
    g.out_neighbors(v).iter().any(|&w| brute_match_at(g, &q[k..], w, 0))
}

/// Per-character positions of a graph: node labels laid out back to back,
/// with bit masks used by the frontier sweep.
struct PositionIndex {
    base: Vec<usize>,
    node_of: Vec<u32>,
    words: usize,
    n_positions: usize,
    char_mask: HashMap<u8, Vec<u64>>,
    not_last: Vec<u64>,
    last: Vec<u64>,
}

impl PositionIndex {
    fn new(g: &Efg) -> Self {
        let mut base = Vec::with_capacity(g.n_nodes());
        let mut node_of = Vec::new();
        let mut total = 0usize;
        for v in 0..g.n_nodes() as u32 {
            base.push(total);
            total += g.label(v).len();
            node_of.resize(total, v);
        }
        let words = total.div_ceil(64);
        let mut char_mask: HashMap<u8, Vec<u64>> = HashMap::new();
        let mut last = vec![0u64; words];
        for v in 0..g.n_nodes() as u32 {
            let lab = g.label(v);
            for (j, &c) in lab.iter().enumerate() {
                let p = base[v as usize] + j;
                char_mask.entry(c).or_insert_with(|| vec![0u64; words])[p / 64] |= 1 << (p % 64);
            }
            let end = base[v as usize] + lab.len() - 1;
            last[end / 64] |= 1 << (end % 64);
        }
        let not_last = last.iter().map(|w| !w).collect();
        PositionIndex { base, node_of, words, n_positions: total, char_mask, not_last, last }
    }

    /// Positions reachable one character after `frontier`, before any
    /// character filtering.
    fn advance(&self, g: &Efg, frontier: &[u64]) -> Vec<u64> {
        let mut next = vec![0u64; self.words];
        let mut carry = 0u64;
        for i in 0..self.words {
            let kept = frontier[i] & self.not_last[i];
            next[i] = (kept << 1) | carry;
            carry = kept >> 63;
        }
        let mut ends = vec![0u64; self.words];
        for i in 0..self.words {
            ends[i] = frontier[i] & self.last[i];
        }
        for (i, mut word) in ends.into_iter().enumerate() {
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                let v = self.node_of[i * 64 + bit];
                for &w in g.out_neighbors(v) {
                    let p = self.base[w as usize];
                    next[p / 64] |= 1 << (p % 64);
                }
            }
        }
        next
    }

    fn filter(&self, frontier: &mut [u64], c: u8) {
        match self.char_mask.get(&c) {
            Some(mask) => {
                for i in 0..self.words {
                    frontier[i] &= mask[i];
                }
            }
            None => frontier.iter_mut().for_each(|w| *w = 0),
        }
    }

    fn first_set(frontier: &[u64]) -> Option<usize> {
        frontier
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn get(frontier: &[u64], p: usize) -> bool {
        frontier[p / 64] >> (p % 64) & 1 == 1
    }
}

/// True iff `q` is a substring of some path spell. One left-to-right sweep
/// over `q`, keeping the set of graph positions its processed prefix can
/// end at.
pub fn online_match(g: &Efg, q: &[u8]) -> bool {
    if q.is_empty() {
        return true;
    }
    let idx = PositionIndex::new(g);
    let mut frontier = match idx.char_mask.get(&q[0]) {
        Some(mask) => mask.clone(),
        None => return false,
    };
    for &c in &q[1..] {
        frontier = idx.advance(g, &frontier);
        idx.filter(&mut frontier, c);
        if frontier.iter().all(|&w| w == 0) {
            return false;
        }
    }
    true
}

/// Like [`online_match`], but reconstructs one occurrence: the node path it
/// runs through and the offset of its first character in the first node.
pub fn online_match_path(g: &Efg, q: &[u8]) -> Option<(Vec<u32>, usize)> {
    if q.is_empty() {
        return Some((Vec::new(), 0));
    }
    let idx = PositionIndex::new(g);
    if idx.n_positions == 0 {
        return None;
    }
    let mut frontiers: Vec<Vec<u64>> = Vec::with_capacity(q.len());
    frontiers.push(idx.char_mask.get(&q[0])?.clone());
    for &c in &q[1..] {
        let mut next = idx.advance(g, frontiers.last().unwrap());
        idx.filter(&mut next, c);
        if next.iter().all(|&w| w == 0) {
            return None;
        }
        frontiers.push(next);
    }
    let mut p = PositionIndex::first_set(frontiers.last().unwrap())?;
    let mut positions = vec![p];
    for i in (1..q.len()).rev() {
        let v = idx.node_of[p];
        let prev = &frontiers[i - 1];
        if p > idx.base[v as usize] && PositionIndex::get(prev, p - 1) {
            p -= 1;
        } else {
            debug_assert_eq!(p, idx.base[v as usize]);
            p = g
                .in_neighbors(v)
                .iter()
                .map(|&u| idx.base[u as usize] + g.label(u).len() - 1)
                .find(|&end| PositionIndex::get(prev, end))
                .expect("frontier always has a predecessor position");
        }
        positions.push(p);
    }
    positions.reverse();
    let mut path = Vec::new();
    for &pos in &positions {
        let v = idx.node_of[pos];
        if path.last() != Some(&v) {
            path.push(v);
        }
    }
    let start_off = positions[0] - idx.base[path[0] as usize];
    Some((path, start_off))
}

/// Two equally sized families of 0/1 vectors of dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    pub d: usize,
    pub xs: Vec<Vec<u8>>,
    pub ys: Vec<Vec<u8>>,
}

impl OvInstance {
    /// Parses the plain text form: a header `n d`, then n X rows and n Y
    /// rows as bitstrings.
    pub fn parse(input: &str) -> Result<OvInstance, String> {
        let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or("missing header line")?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or("header must be two integers: n d")?;
        let d: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or("header must be two integers: n d")?;
        if it.next().is_some() {
            return Err("header must be two integers: n d".into());
        }
        if n == 0 || d == 0 {
            return Err("n and d must be positive".into());
        }
        let mut rows = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            let line = lines.next().ok_or(format!("expected {} vector rows", 2 * n))?;
            if line.len() != d {
                return Err(format!("row {:?} is not {} bits long", line, d));
            }
            let mut row = Vec::with_capacity(d);
            for ch in line.chars() {
                match ch {
                    '0' => row.push(0),
                    '1' => row.push(1),
                    _ => return Err(format!("bad bit {:?} in row {:?}", ch, line)),
                }
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err("trailing rows after the 2n vectors".into());
        }
        let ys = rows.split_off(n);
        Ok(OvInstance { d, xs: rows, ys })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.xs.len(), self.d);
        for row in self.xs.iter().chain(self.ys.iter()) {
            for &b in row {
                out.push(if b == 0 { '0' } else { '1' });
            }
            out.push('\n');
        }
        out
    }
}

/// True iff some x·y = 0, i.e. no coordinate has a 1 in both vectors.
pub fn ov_has_orthogonal_pair(inst: &OvInstance) -> bool {
    inst.xs
        .iter()
        .any(|x| inst.ys.iter().any(|y| x.iter().zip(y).all(|(&a, &b)| a & b == 0)))
}

const UNIT: usize = 4;

fn push_run(out: &mut Vec<u8>, c: u8, k: usize) {
    out.extend(std::iter::repeat(c).take(k));
}

/// Query string for the X side: B^4, then per vector B^4, each coordinate
/// as four copies of its bit, E^4, and a final E^4. Consecutive vectors
/// meet in an E^4 B^4 separator; the ends read B^8 and E^8.
pub fn build_ov_query(xs: &[Vec<u8>]) -> Vec<u8> {
    let mut q = Vec::new();
    push_run(&mut q, b'B', UNIT);
    for x in xs {
        push_run(&mut q, b'B', UNIT);
        for &bit in x {
            push_run(&mut q, if bit == 0 { b'0' } else { b'1' }, UNIT);
        }
        push_run(&mut q, b'E', UNIT);
    }
    push_run(&mut q, b'E', UNIT);
    q
}

/// Role a gadget node plays for occurrence accounting: before, at, or after
/// the one vector slot a match is forced to take seriously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OvLane {
    Pre,
    Match,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OvRegion {
    /// Letter gadget between two slots (index 0 sits before the first slot).
    Separator { index: usize },
    /// Digit cell `cell` of slot `slot`; `y_index` is set on slots encoding
    /// a real Y vector, free padding slots leave it unset.
    Digit { slot: usize, cell: usize, y_index: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvNodeInfo {
    pub region: OvRegion,
    pub lane: OvLane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvMeta {
    pub n: usize,
    pub d: usize,
    pub slots: usize,
    pub infos: Vec<OvNodeInfo>,
}

struct OvBuilder {
    nodes: Vec<EfgNode>,
    infos: Vec<OvNodeInfo>,
    edges: Vec<(u32, u32)>,
    next_block: u32,
}

impl OvBuilder {
    fn add(&mut self, block: u32, label: &str, region: OvRegion, lane: OvLane) -> u32 {
        self.nodes.push(EfgNode { block, label: label.as_bytes().to_vec() });
        self.infos.push(OvNodeInfo { region, lane });
        (self.nodes.len() - 1) as u32
    }

    fn connect(&mut self, from: &[u32], to: &[u32]) {
        for &f in from {
            for &t in to {
                self.edges.push((f, t));
            }
        }
    }
}

/// Node ids of one separator gadget, grouped by the lane its cut belongs to.
struct SepIds {
    b1_pre: Vec<u32>,
    b1_match: Vec<u32>,
    b1_post: Vec<u32>,
    b2_pre: Vec<u32>,
    b2_match: Vec<u32>,
    b2_post: Vec<u32>,
}

/// Graph for the Y side. Layout: separator, slot, separator, ..., slot,
/// separator, where a slot is d two-block digit cells and a separator is a
/// two-block letter gadget spelling E^4 B^4 (with B^8 entry and E^8 exit
/// variants). The middle n slots encode the Y vectors; n-1 free slots on
/// each side give every (x_i, y_j) pairing an alignment. Lanes make any
/// full occurrence of the query thread exactly one real slot through its
/// Match nodes, and a Match digit cell for a 1-coordinate only offers 0s,
/// so occurs(Q) holds iff some pair is orthogonal.
pub fn build_ov_graph(inst: &OvInstance) -> (Efg, OvMeta) {
    let n = inst.ys.len();
    let d = inst.d;
    assert!(n > 0 && d > 0, "instance must have vectors");
    let slots = 3 * n - 2;
    let mut b = OvBuilder { nodes: Vec::new(), infos: Vec::new(), edges: Vec::new(), next_block: 0 };

    let sep = |b: &mut OvBuilder, index: usize| -> SepIds {
        let b1 = b.next_block;
        let b2 = b.next_block + 1;
        b.next_block += 2;
        let r = OvRegion::Separator { index };
        let b1_pre = vec![
            b.add(b1, "EEEEB", r.clone(), OvLane::Pre),
            b.add(b1, "BBBBB", r.clone(), OvLane::Pre),
        ];
        let b1_match = vec![
            b.add(b1, "EEEE", r.clone(), OvLane::Match),
            b.add(b1, "BBBB", r.clone(), OvLane::Match),
        ];
        let b1_post = vec![b.add(b1, "EEE", r.clone(), OvLane::Post)];
        let b2_pre = vec![b.add(b2, "BBB", r.clone(), OvLane::Pre)];
        let b2_match = vec![b.add(b2, "BBBB", r.clone(), OvLane::Match)];
        let b2_post = vec![b.add(b2, "EBBBB", r.clone(), OvLane::Post)];
        let b2_tail = b.add(b2, "EEEEE", r.clone(), OvLane::Post);
        b.connect(&b1_pre, &b2_pre);
        b.connect(&b1_match, &b2_match);
        b.connect(&b1_post, &b2_post);
        b.connect(&b1_post, &[b2_tail]);
        SepIds { b1_pre, b1_match, b1_post, b2_pre, b2_match, b2_post }
    };

    let mut prev = sep(&mut b, 0);
    for slot in 1..=slots {
        // slots n..2n-1 carry the real vectors, the rest are padding
        let y_index = if slot >= n && slot <= 2 * n - 1 { Some(slot - n) } else { None };
        let mut in_pre = std::mem::take(&mut prev.b2_pre);
        let mut in_match = std::mem::take(&mut prev.b2_match);
        let mut in_post = std::mem::take(&mut prev.b2_post);
        let mut last = (Vec::new(), Vec::new(), Vec::new());
        for cell in 0..d {
            let b1 = b.next_block;
            let b2 = b.next_block + 1;
            b.next_block += 2;
            let r = OvRegion::Digit { slot, cell, y_index };
            let p1: Vec<u32> = ["000", "111"]
                .iter()
                .map(|s| b.add(b1, s, r.clone(), OvLane::Pre))
                .collect();
            let z1: Vec<u32> = ["0", "1"]
                .iter()
                .map(|s| b.add(b1, s, r.clone(), OvLane::Post))
                .collect();
            let match_labels: &[&str] = match y_index {
                Some(j) if inst.ys[j][cell] == 1 => &["00"],
                Some(_) => &["00", "11"],
                None => &[],
            };
            let m1: Vec<u32> = match_labels
                .iter()
                .map(|s| b.add(b1, s, r.clone(), OvLane::Match))
                .collect();
            let p2: Vec<u32> = ["0", "1"]
                .iter()
                .map(|s| b.add(b2, s, r.clone(), OvLane::Pre))
                .collect();
            let z2: Vec<u32> = ["000", "111"]
                .iter()
                .map(|s| b.add(b2, s, r.clone(), OvLane::Post))
                .collect();
            let m2: Vec<u32> = match_labels
                .iter()
                .map(|s| b.add(b2, s, r.clone(), OvLane::Match))
                .collect();
            b.connect(&p1, &p2);
            b.connect(&z1, &z2);
            b.connect(&m1, &m2);
            b.connect(&in_pre, &p1);
            b.connect(&in_match, &m1);
            b.connect(&in_post, &z1);
            in_pre = p2.clone();
            in_match = m2.clone();
            in_post = z2.clone();
            last = (p2, m2, z2);
        }
        let next = sep(&mut b, slot);
        let (p2, m2, z2) = last;
        // a slot may stay in its lane, announce a match for the next slot,
        // or leave the match lane behind
        b.connect(&p2, &next.b1_pre);
        b.connect(&p2, &next.b1_match);
        b.connect(&m2, &next.b1_post);
        b.connect(&z2, &next.b1_post);
        prev = next;
    }

    let OvBuilder { nodes, infos, edges, .. } = b;
    let (g, remap) = Efg::assemble(b"01BE".to_vec(), nodes, &edges).expect("gadget labels are distinct per block");
    let mut remapped = infos.clone();
    for (old, info) in infos.into_iter().enumerate() {
        remapped[remap[old] as usize] = info;
    }
    (g, OvMeta { n, d, slots, infos: remapped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(blocks: &[&[&str]], edges: &[(u32, u32)]) -> Efg {
        let mut nodes = Vec::new();
        let mut sigma: Vec<u8> = Vec::new();
        for (bi, labels) in blocks.iter().enumerate() {
            for lab in labels.iter() {
                nodes.push(EfgNode { block: bi as u32, label: lab.as_bytes().to_vec() });
                sigma.extend(lab.as_bytes());
            }
        }
        sigma.sort_unstable();
        sigma.dedup();
        let (g, _) = Efg::assemble(sigma, nodes, edges).unwrap();
        g
    }

    fn random_graph(rng: &mut ChaCha8Rng) -> Efg {
        let n_blocks = rng.gen_range(1..=4);
        let mut nodes = Vec::new();
        let mut heights = Vec::new();
        for bi in 0..n_blocks {
            let h = rng.gen_range(1..=3);
            heights.push(h);
            let mut labels: Vec<Vec<u8>> = Vec::new();
            while labels.len() < h {
                let len = rng.gen_range(1..=3);
                let lab: Vec<u8> = (0..len).map(|_| if rng.gen_bool(0.5) { b'A' } else { b'C' }).collect();
                if !labels.contains(&lab) {
                    labels.push(lab);
                }
            }
            for lab in labels {
                nodes.push(EfgNode { block: bi as u32, label: lab });
            }
        }
        let mut edges = Vec::new();
        let mut start = 0u32;
        for w in heights.windows(2) {
            let (h0, h1) = (w[0] as u32, w[1] as u32);
            for f in 0..h0 {
                for t in 0..h1 {
                    if rng.gen_bool(0.6) {
                        edges.push((start + f, start + h0 + t));
                    }
                }
            }
            start += h0;
        }
        let (g, _) = Efg::assemble(b"AC".to_vec(), nodes, &edges).unwrap();
        g
    }

    fn random_path_spell(g: &Efg, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let mut v = rng.gen_range(0..g.n_nodes()) as u32;
        let mut spell = g.label(v).to_vec();
        while !g.out_neighbors(v).is_empty() && rng.gen_bool(0.7) {
            let outs = g.out_neighbors(v);
            v = outs[rng.gen_range(0..outs.len())];
            spell.extend_from_slice(g.label(v));
        }
        spell
    }

    #[test]
    fn online_match_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..300 {
            let g = random_graph(&mut rng);
            let q: Vec<u8> = if rng.gen_bool(0.5) {
                let spell = random_path_spell(&g, &mut rng);
                let a = rng.gen_range(0..spell.len());
                let b = rng.gen_range(a + 1..=spell.len());
                spell[a..b].to_vec()
            } else {
                (0..rng.gen_range(1..=6))
                    .map(|_| if rng.gen_bool(0.5) { b'A' } else { b'C' })
                    .collect()
            };
            assert_eq!(online_match(&g, &q), occurs_brute_force(&g, &q), "q={:?}", q);
        }
    }

    #[test]
    fn reported_path_really_spells_the_query() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let mut hits = 0;
        for _ in 0..200 {
            let g = random_graph(&mut rng);
            let spell = random_path_spell(&g, &mut rng);
            let a = rng.gen_range(0..spell.len());
            let b = rng.gen_range(a + 1..=spell.len());
            let q = &spell[a..b];
            let (path, off) = online_match_path(&g, q).expect("cut from a real path");
            hits += 1;
            let mut text = Vec::new();
            for w in path.windows(2) {
                assert!(g.out_neighbors(w[0]).contains(&w[1]));
            }
            for &v in &path {
                text.extend_from_slice(g.label(v));
            }
            assert_eq!(&text[off..off + q.len()], q);
            // the occurrence must touch every node of the reported path
            assert!(off < g.label(path[0]).len());
            assert!(off + q.len() > text.len() - g.label(*path.last().unwrap()).len());
        }
        assert!(hits > 0);
    }

    #[test]
    fn no_match_cases() {
        let g = graph(&[&["AC", "AT"], &["GT"]], &[(0, 2), (1, 2)]);
        assert!(online_match(&g, b"ACGT"));
        assert!(online_match(&g, b"TG"));
        assert!(!online_match(&g, b"GTA"));
        assert!(!online_match(&g, b"CA"));
        assert!(online_match_path(&g, b"GTA").is_none());
        assert!(online_match(&g, b""));
    }

    #[test]
    fn query_layout_fixtures() {
        let q = build_ov_query(&[vec![1, 0, 1]]);
        assert_eq!(q, b"BBBBBBBB111100001111EEEEEEEE".to_vec());
        let q = build_ov_query(&[vec![0]]);
        assert_eq!(q.len(), 20);
        assert_eq!(q, b"BBBBBBBB0000EEEEEEEE".to_vec());
        let q = build_ov_query(&[vec![1], vec![0]]);
        assert_eq!(q, b"BBBBBBBB1111EEEEBBBB0000EEEEEEEE".to_vec());
    }

    #[test]
    fn instance_text_roundtrip() {
        let text = "2 3\n101\n010\n111\n001\n";
        let inst = OvInstance::parse(text).unwrap();
        assert_eq!(inst.d, 3);
        assert_eq!(inst.xs, vec![vec![1, 0, 1], vec![0, 1, 0]]);
        assert_eq!(inst.ys, vec![vec![1, 1, 1], vec![0, 0, 1]]);
        assert_eq!(inst.to_text(), text);
        assert!(OvInstance::parse("1 2\n01\n").is_err());
        assert!(OvInstance::parse("1 2\n01\n0\n").is_err());
        assert!(OvInstance::parse("0 2\n").is_err());
    }

    #[test]
    fn gadget_structure() {
        let inst = OvInstance::parse("2 2\n11\n10\n01\n11\n").unwrap();
        let (g, meta) = build_ov_graph(&inst);
        // separators and slots alternate: 5 separators of 2 blocks and 4
        // slots of 2 cells (2 blocks each)
        assert_eq!(meta.slots, 4);
        assert_eq!(g.n_blocks(), 5 * 2 + 4 * 2 * 2);
        assert_eq!(meta.infos.len(), g.n_nodes());
        for (v, info) in meta.infos.iter().enumerate() {
            if info.lane == OvLane::Match {
                if let OvRegion::Digit { y_index, .. } = &info.region {
                    assert!(y_index.is_some(), "match digits only on real slots (node {})", v);
                }
            }
        }
        // a 1-coordinate match cell offers only zeros
        let ones: Vec<_> = meta
            .infos
            .iter()
            .enumerate()
            .filter(|(_, i)| {
                i.lane == OvLane::Match
                    && matches!(&i.region, OvRegion::Digit { y_index: Some(j), cell, .. } if inst.ys[*j][*cell] == 1)
            })
            .map(|(v, _)| v as u32)
            .collect();
        assert!(!ones.is_empty());
        for v in ones {
            assert!(g.label(v).iter().all(|&c| c == b'0'));
        }
    }

    #[test]
    fn gadget_matches_exactly_the_orthogonal_instances() {
        // exhaustive over unordered families of distinct vectors
        let vectors: Vec<Vec<u8>> = (0..4).map(|v| vec![v >> 1 & 1, v & 1]).collect();
        let mut families: Vec<Vec<Vec<u8>>> = Vec::new();
        for a in 0..4 {
            for bi in a + 1..4 {
                families.push(vec![vectors[a].clone(), vectors[bi].clone()]);
            }
        }
        for xs in &families {
            for ys in &families {
                let inst = OvInstance { d: 2, xs: xs.clone(), ys: ys.clone() };
                let (g, _) = build_ov_graph(&inst);
                let q = build_ov_query(&inst.xs);
                assert_eq!(
                    online_match(&g, &q),
                    ov_has_orthogonal_pair(&inst),
                    "instance:\n{}",
                    inst.to_text()
                );
            }
        }
        for x in 0..2u8 {
            for y in 0..2u8 {
                let inst = OvInstance { d: 1, xs: vec![vec![x]], ys: vec![vec![y]] };
                let (g, _) = build_ov_graph(&inst);
                let q = build_ov_query(&inst.xs);
                assert_eq!(online_match(&g, &q), !(x == 1 && y == 1));
            }
        }
    }

    #[test]
    fn gadget_equivalence_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let d = rng.gen_range(1..=3);
            let dim = d;
            let vec_of = |rng: &mut ChaCha8Rng| -> Vec<u8> {
                (0..dim).map(|_| rng.gen_range(0..=1u8)).collect()
            };
            let inst = OvInstance {
                d,
                xs: (0..n).map(|_| vec_of(&mut rng)).collect(),
                ys: (0..n).map(|_| vec_of(&mut rng)).collect(),
            };
            let (g, _) = build_ov_graph(&inst);
            let q = build_ov_query(&inst.xs);
            assert_eq!(
                online_match(&g, &q),
                ov_has_orthogonal_pair(&inst),
                "instance:\n{}",
                inst.to_text()
            );
        }
    }
}
