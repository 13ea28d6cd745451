//! On-disk form of the three indexes.
//!
//! Layout: `EFGIDX` magic, a format version byte, a kind byte, then tagged
//! sections of `[tag u8][length u64 LE][payload]`. The graph itself travels
//! as JSON; the derived arrays (document text, suffix array, interval marks,
//! head annotations, trie shapes) are stored verbatim. Loading rebuilds
//! everything from the graph section and demands byte equality with the
//! stored copies, so a loaded index is verified rather than trusted.

use super::{build_index, AnyIndex, IndexKind, OccursIndex, Trie};
use crate::validity::RepeatViolation;
use thiserror::Error;

const MAGIC: &[u8; 6] = b"EFGIDX";
const VERSION: u8 = 1;

const SEC_GRAPH: u8 = 0x01;
const SEC_TEXT: u8 = 0x02;
const SEC_SA: u8 = 0x03;
const SEC_MARKS: u8 = 0x04;
const SEC_ANN: u8 = 0x06;
const SEC_TRIES: u8 = 0x07;

#[derive(Debug, Error)]
pub enum IndexIoError {
    #[error("not an index file: {0}")]
    Malformed(String),
    #[error("graph section: {0}")]
    Graph(String),
    #[error("graph violates the index precondition: label of node {} occurs at node {} offset {}",
        .0.pattern_node, .0.at_node, .0.offset)]
    Precondition(RepeatViolation),
    #[error("verification failed: {0}")]
    Mismatch(String),
}

fn push_section(out: &mut Vec<u8>, tag: u8, payload: &[u8]) {
    out.push(tag);
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(payload);
}

fn u32s_to_bytes(vals: impl Iterator<Item = u32>) -> Vec<u8> {
    let mut out = Vec::new();
    for v in vals {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn ser_trie_node(t: &Trie, state: u32, out: &mut Vec<u8>) {
    out.extend_from_slice(&t.leaf[state as usize].unwrap_or(u32::MAX).to_le_bytes());
    let kids = &t.children[state as usize];
    out.extend_from_slice(&(kids.len() as u16).to_le_bytes());
    for &(sym, child) in kids {
        out.push(sym);
        ser_trie_node(t, child, out);
    }
}

fn ser_tries(tries: &[Trie]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(tries.len() as u32).to_le_bytes());
    for t in tries {
        ser_trie_node(t, 0, &mut out);
    }
    out
}

pub fn write_index(idx: &AnyIndex) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(match idx.kind() {
        IndexKind::Classic => 0,
        IndexKind::Ebwt => 1,
        IndexKind::Triple => 2,
    });
    push_section(&mut out, SEC_GRAPH, idx.graph().to_json().as_bytes());
    match idx {
        AnyIndex::Classic(c) => {
            push_section(&mut out, SEC_TEXT, &c.windows.gss.text);
            push_section(&mut out, SEC_SA, &u32s_to_bytes(c.windows.gss.sa.iter().copied()));
            let mut tries = ser_tries(&c.back_tries);
            tries.extend_from_slice(&ser_tries(&c.fwd_tries));
            push_section(&mut out, SEC_TRIES, &tries);
        }
        AnyIndex::Ebwt(e) => {
            push_section(&mut out, SEC_TEXT, &e.windows.gss.text);
            push_section(&mut out, SEC_SA, &u32s_to_bytes(e.windows.gss.sa.iter().copied()));
            let n = e.marks_open.count_ones();
            let mut marks = (n as u64).to_le_bytes().to_vec();
            marks.extend(u32s_to_bytes((0..n).map(|k| e.marks_open.select1(k).unwrap() as u32)));
            marks.extend(u32s_to_bytes((0..n).map(|k| e.marks_close.select1(k).unwrap() as u32)));
            push_section(&mut out, SEC_MARKS, &marks);
        }
        AnyIndex::Triple(t) => {
            push_section(&mut out, SEC_TEXT, &t.gss.text);
            push_section(&mut out, SEC_SA, &u32s_to_bytes(t.gss.sa.iter().copied()));
            push_section(&mut out, SEC_ANN, &u32s_to_bytes(t.ann.iter().copied()));
        }
    }
    out
}

/// Parses, rebuilds from the graph section and verifies the stored sections
/// byte for byte.
pub fn read_index(bytes: &[u8]) -> Result<AnyIndex, IndexIoError> {
    if bytes.len() < 8 || &bytes[..6] != MAGIC {
        return Err(IndexIoError::Malformed("bad magic".into()));
    }
    if bytes[6] != VERSION {
        return Err(IndexIoError::Malformed(format!("unsupported version {}", bytes[6])));
    }
    let kind = match bytes[7] {
        0 => IndexKind::Classic,
        1 => IndexKind::Ebwt,
        2 => IndexKind::Triple,
        k => return Err(IndexIoError::Malformed(format!("unknown kind byte {k}"))),
    };
    let mut sections: Vec<(u8, &[u8])> = Vec::new();
    let mut at = 8usize;
    while at < bytes.len() {
        if at + 9 > bytes.len() {
            return Err(IndexIoError::Malformed("truncated section header".into()));
        }
        let tag = bytes[at];
        let len = u64::from_le_bytes(bytes[at + 1..at + 9].try_into().unwrap()) as usize;
        at += 9;
        if at + len > bytes.len() {
            return Err(IndexIoError::Malformed(format!("section {tag:#04x} truncated")));
        }
        sections.push((tag, &bytes[at..at + len]));
        at += len;
    }
    let graph_bytes = sections
        .iter()
        .find(|(t, _)| *t == SEC_GRAPH)
        .map(|(_, p)| *p)
        .ok_or_else(|| IndexIoError::Malformed("missing graph section".into()))?;
    let json = std::str::from_utf8(graph_bytes)
        .map_err(|e| IndexIoError::Graph(e.to_string()))?;
    let g = crate::efg::Efg::from_json(json).map_err(|e| IndexIoError::Graph(e.to_string()))?;
    let rebuilt = build_index(&g, kind).map_err(IndexIoError::Precondition)?;
    let expect = write_index(&rebuilt);
    if expect != bytes {
        let what = sections
            .iter()
            .map(|(t, _)| format!("{t:#04x}"))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(IndexIoError::Mismatch(format!(
            "stored sections [{what}] do not match the index rebuilt from the graph"
        )));
    }
    Ok(rebuilt)
}

#[cfg(test)]
mod tests {
    use super::super::testutil;
    use super::*;
    use crate::validity::ValidityMode;

    fn sample(kind: IndexKind) -> AnyIndex {
        let mode = match kind {
            IndexKind::Triple => ValidityMode::SemiRepeatFree,
            _ => ValidityMode::RepeatFree,
        };
        let g = testutil::graph_corpus(98, 1, mode).remove(0);
        build_index(&g, kind).unwrap()
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        for kind in [IndexKind::Classic, IndexKind::Ebwt, IndexKind::Triple] {
            let idx = sample(kind);
            let bytes = write_index(&idx);
            let loaded = read_index(&bytes).unwrap();
            assert_eq!(loaded.kind(), kind);
            assert_eq!(write_index(&loaded), bytes);
            assert_eq!(loaded.graph(), idx.graph());
        }
    }

    #[test]
    fn corrupted_payload_is_rejected() {
        let idx = sample(IndexKind::Ebwt);
        let mut bytes = write_index(&idx);
        // flip one byte inside the last stored section
        let at = bytes.len() - 5;
        bytes[at] ^= 0x40;
        match read_index(&bytes) {
            Err(IndexIoError::Mismatch(_)) => {}
            Err(other) => panic!("expected a verification failure, got {other}"),
            Ok(_) => panic!("corrupted index loaded cleanly"),
        }
    }

    #[test]
    fn header_damage_is_malformed() {
        let idx = sample(IndexKind::Classic);
        let mut bytes = write_index(&idx);
        bytes[0] = b'X';
        assert!(matches!(read_index(&bytes), Err(IndexIoError::Malformed(_))));
        let bytes = write_index(&idx);
        assert!(matches!(read_index(&bytes[..10]), Err(IndexIoError::Malformed(_))));
    }
}
