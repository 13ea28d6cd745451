//! The elastic founder graph: blocks of labeled nodes with edges between
//! consecutive blocks, plus serialization to JSON, DOT and GFA.

use crate::msa::Msa;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EfgError {
    #[error("row {row} spells the empty string in segment {start}..{end}")]
    EmptySpell { row: usize, start: usize, end: usize },
    #[error("duplicate label in block {block}: {label:?}")]
    DuplicateLabel { block: usize, label: String },
    #[error("unsupported format version {0}")]
    BadVersion(u32),
    #[error("graph is malformed: {0}")]
    Malformed(String),
    #[error("JSON parse error: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfgNode {
    pub block: u32,
    pub label: Vec<u8>,
}

/// A directed acyclic graph whose nodes are grouped into consecutive blocks.
/// Node ids equal their index in `nodes`; nodes are kept in canonical order
/// (by block, then label) and edges only connect adjacent blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Efg {
    pub sigma: Vec<u8>,
    pub nodes: Vec<EfgNode>,
    pub blocks: Vec<Vec<u32>>,
    pub edges: Vec<(u32, u32)>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfgStats {
    pub blocks: usize,
    pub nodes: usize,
    pub edges: usize,
    pub total_label_len: usize,
    pub max_block_height: usize,
    pub heights: Vec<usize>,
}

impl Efg {
    /// Builds a graph from nodes in any order. Nodes are sorted canonically
    /// and edge endpoints (indices into `nodes` as given) are remapped; the
    /// returned vector maps each input index to its final node id.
    pub fn assemble(
        sigma: Vec<u8>,
        nodes: Vec<EfgNode>,
        edges: &[(u32, u32)],
    ) -> Result<(Efg, Vec<u32>), EfgError> {
        if nodes.is_empty() {
            return Err(EfgError::Malformed("graph has no nodes".into()));
        }
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| (nodes[a].block, &nodes[a].label).cmp(&(nodes[b].block, &nodes[b].label)));
        let mut remap = vec![0u32; nodes.len()];
        for (new_id, &old) in order.iter().enumerate() {
            remap[old] = new_id as u32;
        }
        let mut sorted_nodes = Vec::with_capacity(nodes.len());
        for &old in &order {
            sorted_nodes.push(nodes[old].clone());
        }
        for w in sorted_nodes.windows(2) {
            if w[0].block == w[1].block && w[0].label == w[1].label {
                return Err(EfgError::DuplicateLabel {
                    block: w[0].block as usize,
                    label: String::from_utf8_lossy(&w[0].label).into_owned(),
                });
            }
        }
        let mut mapped: Vec<(u32, u32)> = edges.iter().map(|&(f, t)| (remap[f as usize], remap[t as usize])).collect();
        mapped.sort_unstable();
        mapped.dedup();
        let g = Efg::from_canonical(sigma, sorted_nodes, mapped)?;
        Ok((g, remap))
    }

    /// Builds a graph from nodes already in canonical order; errors if the
    /// order or the edge structure is invalid.
    pub fn from_canonical(sigma: Vec<u8>, nodes: Vec<EfgNode>, edges: Vec<(u32, u32)>) -> Result<Efg, EfgError> {
        if nodes.is_empty() {
            return Err(EfgError::Malformed("graph has no nodes".into()));
        }
        if nodes[0].block != 0 {
            return Err(EfgError::Malformed("first node must be in block 0".into()));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if b.block < a.block || b.block > a.block + 1 {
                return Err(EfgError::Malformed(format!("block numbering breaks at node {}", i + 1)));
            }
            if a.block == b.block && a.label >= b.label {
                return Err(EfgError::Malformed(format!(
                    "nodes {} and {} are not in canonical label order",
                    i,
                    i + 1
                )));
            }
        }
        for (i, n) in nodes.iter().enumerate() {
            if n.label.is_empty() {
                return Err(EfgError::Malformed(format!("node {i} has an empty label")));
            }
            if let Some(&bad) = n.label.iter().find(|&&c| !sigma.contains(&c)) {
                return Err(EfgError::Malformed(format!(
                    "node {i} label contains {:?} which is outside the alphabet",
                    bad as char
                )));
            }
        }
        let n_blocks = nodes.last().unwrap().block as usize + 1;
        let mut blocks = vec![Vec::new(); n_blocks];
        for (id, n) in nodes.iter().enumerate() {
            blocks[n.block as usize].push(id as u32);
        }
        let mut sorted_edges = edges;
        sorted_edges.sort_unstable();
        sorted_edges.dedup();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        for &(f, t) in &sorted_edges {
            let (fu, tu) = (f as usize, t as usize);
            if fu >= nodes.len() || tu >= nodes.len() {
                return Err(EfgError::Malformed(format!("edge ({f}, {t}) references a missing node")));
            }
            if nodes[tu].block != nodes[fu].block + 1 {
                return Err(EfgError::Malformed(format!(
                    "edge ({f}, {t}) does not connect consecutive blocks"
                )));
            }
            out_adj[fu].push(t);
            in_adj[tu].push(f);
        }
        Ok(Efg { sigma, nodes, blocks, edges: sorted_edges, out_adj, in_adj })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn label(&self, v: u32) -> &[u8] {
        &self.nodes[v as usize].label
    }

    pub fn block_of(&self, v: u32) -> u32 {
        self.nodes[v as usize].block
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.in_adj[v as usize]
    }

    pub fn stats(&self) -> EfgStats {
        let heights: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        EfgStats {
            blocks: self.blocks.len(),
            nodes: self.nodes.len(),
            edges: self.edges.len(),
            total_label_len: self.nodes.iter().map(|n| n.label.len()).sum(),
            max_block_height: heights.iter().copied().max().unwrap_or(0),
            heights,
        }
    }

    pub fn to_json(&self) -> String {
        let file = EfgFile {
            version: 1,
            sigma: String::from_utf8(self.sigma.clone()).expect("alphabet is ASCII"),
            blocks: self.blocks.clone(),
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| NodeFile {
                    id: id as u32,
                    block: n.block,
                    label: String::from_utf8(n.label.clone()).expect("labels are ASCII"),
                })
                .collect(),
            edges: self.edges.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(input: &str) -> Result<Efg, EfgError> {
        let file: EfgFile = serde_json::from_str(input).map_err(|e| EfgError::Json(e.to_string()))?;
        if file.version != 1 {
            return Err(EfgError::BadVersion(file.version));
        }
        for (i, n) in file.nodes.iter().enumerate() {
            if n.id != i as u32 {
                return Err(EfgError::Malformed(format!("node id {} at position {i}", n.id)));
            }
        }
        let nodes: Vec<EfgNode> =
            file.nodes.iter().map(|n| EfgNode { block: n.block, label: n.label.clone().into_bytes() }).collect();
        let g = Efg::from_canonical(file.sigma.into_bytes(), nodes, file.edges)?;
        if g.blocks != file.blocks {
            return Err(EfgError::Malformed("block lists disagree with node block fields".into()));
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph efg {\n  rankdir=LR;\n");
        for (id, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  n{id} [label=\"{}\"];\n", String::from_utf8_lossy(&n.label)));
        }
        for &(f, t) in &self.edges {
            s.push_str(&format!("  n{f} -> n{t};\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_gfa(&self) -> String {
        let mut s = String::from("H\tVN:Z:1.0\n");
        for (id, n) in self.nodes.iter().enumerate() {
            s.push_str(&format!("S\t{id}\t{}\n", String::from_utf8_lossy(&n.label)));
        }
        for &(f, t) in &self.edges {
            s.push_str(&format!("L\t{f}\t+\t{t}\t+\t0M\n"));
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct EfgFile {
    version: u32,
    sigma: String,
    blocks: Vec<Vec<u32>>,
    nodes: Vec<NodeFile>,
    edges: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct NodeFile {
    id: u32,
    block: u32,
    label: String,
}

/// Builds the founder graph of an alignment under a column segmentation
/// (consecutive half-open ranges). Each block holds the distinct segment
/// spells; each row contributes the edges along its path.
pub fn build_efg(msa: &Msa, segments: &[(usize, usize)]) -> Result<Efg, EfgError> {
    assert!(!segments.is_empty(), "segmentation is empty");
    assert_eq!(segments[0].0, 0, "segmentation must start at column 0");
    assert_eq!(segments.last().unwrap().1, msa.n_cols(), "segmentation must end at the last column");
    for w in segments.windows(2) {
        assert_eq!(w[0].1, w[1].0, "segments must be consecutive");
    }
    let mut nodes: Vec<EfgNode> = Vec::new();
    let mut row_paths: Vec<Vec<u32>> = vec![Vec::new(); msa.n_rows()];
    for (k, &(start, end)) in segments.iter().enumerate() {
        let mut labels: Vec<Vec<u8>> = (0..msa.n_rows()).map(|t| msa.spell_range(t, start, end)).collect();
        if let Some(row) = labels.iter().position(|l| l.is_empty()) {
            return Err(EfgError::EmptySpell { row, start, end });
        }
        let mut distinct = labels.clone();
        distinct.sort();
        distinct.dedup();
        let base = nodes.len() as u32;
        for (t, lab) in labels.drain(..).enumerate() {
            let off = distinct.binary_search(&lab).unwrap() as u32;
            row_paths[t].push(base + off);
        }
        for lab in distinct {
            nodes.push(EfgNode { block: k as u32, label: lab });
        }
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for path in &row_paths {
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Efg::from_canonical(msa.alphabet().to_vec(), nodes, edges)
}
