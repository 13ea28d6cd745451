//! Segment validity: which column ranges of an alignment may become blocks
//! so that the resulting graph supports exact pattern matching.
//!
//! A range is valid when every string spelled by a row inside it occurs in
//! the gaps-removed rows only at the position where the range starts. In
//! repeat-free mode, additionally no spelled string may be a proper prefix
//! of another one from the same range.

use crate::efg::Efg;
use crate::msa::{Msa, GAP};
use crate::stringds::{GeneralizedSuffixStructure, IntervalUnionSet};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidityMode {
    RepeatFree,
    SemiRepeatFree,
}

impl std::fmt::Display for ValidityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidityMode::RepeatFree => write!(f, "repeat-free"),
            ValidityMode::SemiRepeatFree => write!(f, "semi-repeat-free"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidityError {
    #[error("alignment contains gaps; use the elastic table computation instead")]
    GapsPresent,
    #[error("row {0} consists of gaps only")]
    AllGapRow(usize),
}

/// Reference check, by definition. Quadratic in the segment strings; meant
/// for tests and small inputs.
pub fn is_valid_segment(msa: &Msa, start: usize, end: usize, mode: ValidityMode) -> bool {
    assert!(start < end && end <= msa.n_cols());
    let m = msa.n_rows();
    let mut block: Vec<Vec<u8>> = (0..m).map(|t| msa.spell_range(t, start, end)).collect();
    if block.iter().any(|s| s.is_empty()) {
        return false;
    }
    block.sort();
    block.dedup();
    for t in 0..m {
        let spell = msa.spell(t);
        let anchor = msa.col_to_spelled(t, start);
        for s in &block {
            if s.len() > spell.len() {
                continue;
            }
            for p in 0..=spell.len() - s.len() {
                if spell[p..p + s.len()] == s[..] && p != anchor {
                    return false;
                }
            }
        }
    }
    if mode == ValidityMode::RepeatFree {
        for a in &block {
            for b in &block {
                if a.len() < b.len() && b.starts_with(a) {
                    return false;
                }
            }
        }
    }
    true
}

/// Left-minimal and right-minimal valid extensions per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityTable {
    pub mode: ValidityMode,
    pub n_cols: usize,
    /// `v[j]` for `j in 1..=n`: the largest `j'` such that `[j'..j)` is a
    /// valid segment; `None` when no start works. `v[0]` is unused.
    pub v: Vec<Option<usize>>,
    /// `f[j]` for `j in 0..n`: the smallest `y` such that `[j..y)` is a
    /// valid segment; `None` when no end works. `f[n]` is unused.
    pub f: Vec<Option<usize>>,
}

impl ValidityTable {
    /// By-definition table, for cross-checking the fast constructions.
    pub fn brute_force(msa: &Msa, mode: ValidityMode) -> ValidityTable {
        let n = msa.n_cols();
        let mut v = vec![None; n + 1];
        let mut f = vec![None; n + 1];
        for j in 1..=n {
            v[j] = (0..j).rev().find(|&s| is_valid_segment(msa, s, j, mode));
        }
        for j in 0..n {
            f[j] = (j + 1..=n).find(|&y| is_valid_segment(msa, j, y, mode));
        }
        ValidityTable { mode, n_cols: n, v, f }
    }

    /// Both tables for a gapless alignment, where the two modes agree.
    /// Runs one left-extension sweep per column over a generalized suffix
    /// array of the rows, plus the mirrored sweep on reversed rows for `f`.
    pub fn gapless(msa: &Msa, mode: ValidityMode) -> Result<ValidityTable, ValidityError> {
        if !msa.is_gapless() {
            return Err(ValidityError::GapsPresent);
        }
        let n = msa.n_cols();
        let v = gapless_v(msa, false);
        let v_rev = gapless_v(msa, true);
        let mut f = vec![None; n + 1];
        for j in 0..n {
            f[j] = v_rev[n - j].map(|s| n - s);
        }
        Ok(ValidityTable { mode, n_cols: n, v, f })
    }

    /// The `f` table for an arbitrary alignment in semi-repeat-free mode
    /// (`v` is left unset). For each start column the per-row minimal valid
    /// spell lengths are found by climbing suffix array intervals towards
    /// shorter prefixes while they stay anchored.
    pub fn elastic_semi(msa: &Msa) -> Result<ValidityTable, ValidityError> {
        let n = msa.n_cols();
        let m = msa.n_rows();
        for t in 0..m {
            if msa.spelled_len(t) == 0 {
                return Err(ValidityError::AllGapRow(t));
            }
        }
        let docs: Vec<Vec<u8>> = (0..m).map(|t| msa.spelled_codes(t)).collect();
        let gsa = GeneralizedSuffixStructure::from_docs(&docs);
        // loci of every suffix spell, extended right to left
        let mut loci = vec![vec![(0usize, 0usize); n + 1]; m];
        for t in 0..m {
            let mut cur = gsa.full_range();
            loci[t][n] = cur;
            for j in (0..n).rev() {
                let c = msa.rows()[t][j];
                if c != GAP {
                    cur = gsa.backward_step(cur.0, cur.1, msa.encode(c));
                }
                loci[t][j] = cur;
            }
        }
        let mut f = vec![None; n + 1];
        for j in 0..n {
            f[j] = elastic_f_at(msa, &gsa, &loci, j);
        }
        Ok(ValidityTable { mode: ValidityMode::SemiRepeatFree, n_cols: n, v: vec![None; n + 1], f })
    }
}

/// `v`-style sweep for gapless rows: for each right end `j`, extend segment
/// strings to the left until every occurrence of every distinct string is
/// one of the `m` row positions, i.e. the distinct locus sizes sum to `m`.
fn gapless_v(msa: &Msa, reversed: bool) -> Vec<Option<usize>> {
    let n = msa.n_cols();
    let m = msa.n_rows();
    let col = |t: usize, j: usize| -> u8 {
        let c = if reversed { msa.rows()[t][n - 1 - j] } else { msa.rows()[t][j] };
        msa.encode(c)
    };
    let docs: Vec<Vec<u8>> = (0..m)
        .map(|t| (0..n).map(|j| col(t, j)).collect())
        .collect();
    let gsa = GeneralizedSuffixStructure::from_docs(&docs);
    let mut v = vec![None; n + 1];
    let mut ranges = vec![(0usize, 0usize); m];
    let mut distinct: Vec<(usize, usize)> = Vec::with_capacity(m);
    for j in 1..=n {
        for r in ranges.iter_mut() {
            *r = gsa.full_range();
        }
        let mut s = j;
        while s > 0 {
            s -= 1;
            for (t, r) in ranges.iter_mut().enumerate() {
                *r = gsa.backward_step(r.0, r.1, col(t, s));
            }
            distinct.clear();
            distinct.extend(ranges.iter().copied());
            distinct.sort_unstable();
            distinct.dedup();
            let occ_total: usize = distinct.iter().map(|&(lo, hi)| hi - lo).sum();
            if occ_total == m {
                v[j] = Some(s);
                break;
            }
        }
    }
    v
}

/// One climb round: the smallest valid segment end for start column `j`, or
/// `None`. `loci[t][j]` is the suffix array interval (half open) of the
/// spell of row `t` from column `j` on.
fn elastic_f_at(
    msa: &Msa,
    gsa: &GeneralizedSuffixStructure,
    loci: &[Vec<(usize, usize)>],
    j: usize,
) -> Option<usize> {
    let m = msa.n_rows();
    let n = msa.n_cols();
    // a row with nothing left to spell can never fill a block
    for t in 0..m {
        if msa.col_to_spelled(t, j) == msa.spelled_len(t) {
            return None;
        }
    }
    // group rows by locus, keeping only outermost intervals as climbers
    let mut by_iv: Vec<(usize, usize, usize)> = (0..m).map(|t| (loci[t][j].0, loci[t][j].1, t)).collect();
    by_iv.sort_unstable_by(|a, b| (a.0, std::cmp::Reverse(a.1)).cmp(&(b.0, std::cmp::Reverse(b.1))));
    struct Climber {
        lo: usize,
        hi: usize, // inclusive
        rows: Vec<usize>,
        result: Option<usize>, // minimal valid spell length once finalized
        absorbed_into: Option<usize>,
    }
    let mut climbers: Vec<Climber> = Vec::new();
    for &(lo, hi, t) in &by_iv {
        match climbers.last_mut() {
            Some(c) if lo >= c.lo && hi <= c.hi + 1 => c.rows.push(t),
            _ => climbers.push(Climber { lo, hi: hi - 1, rows: vec![t], result: None, absorbed_into: None }),
        }
    }
    let outer_total: usize = climbers.iter().map(|c| c.hi - c.lo + 1).sum();
    if outer_total != m {
        return None;
    }
    let mut set = IntervalUnionSet::new();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, c) in climbers.iter().enumerate() {
        set.insert(c.lo, c.hi).expect("outermost intervals are disjoint");
        owner.insert((c.lo, c.hi), i);
    }
    let lcp_at = |i: usize| -> usize {
        if i == 0 || i >= gsa.len() {
            0
        } else {
            gsa.lcp[i] as usize
        }
    };
    for w in 0..climbers.len() {
        loop {
            if climbers[w].absorbed_into.is_some() || climbers[w].result.is_some() {
                break;
            }
            let (lo, hi) = (climbers[w].lo, climbers[w].hi);
            let pd = lcp_at(lo).max(lcp_at(hi + 1));
            let mut plo = lo;
            while plo > 0 && lcp_at(plo) >= pd && pd > 0 {
                plo -= 1;
            }
            let mut phi = hi;
            while phi + 1 < gsa.len() && lcp_at(phi + 1) >= pd && pd > 0 {
                phi += 1;
            }
            if pd == 0 {
                (plo, phi) = (0, gsa.len() - 1);
            }
            let safe = set.span(plo, phi) == (phi - plo + 1) as u64;
            if !safe {
                climbers[w].result = Some(pd + 1);
                break;
            }
            // ascend: absorb every stored interval inside the parent
            for (a, b) in set.contained(plo, phi) {
                set.delete(a, b).expect("contained intervals are stored");
                let o = owner.remove(&(a, b)).expect("stored intervals have owners");
                if o != w {
                    climbers[o].absorbed_into = Some(w);
                }
            }
            set.insert(plo, phi).expect("parent interval replaces its contents");
            owner.insert((plo, phi), w);
            climbers[w].lo = plo;
            climbers[w].hi = phi;
        }
    }
    // resolve every row through its climber's forest root
    let mut f_end = 0usize;
    for (i, c) in climbers.iter().enumerate() {
        let mut root = i;
        while let Some(p) = climbers[root].absorbed_into {
            root = p;
        }
        let len = climbers[root].result.expect("every climb finalizes");
        for &t in &c.rows {
            let col = msa
                .col_of_kth_symbol(t, j, len)
                .expect("minimal valid length fits inside the row suffix");
            f_end = f_end.max(col + 1);
        }
    }
    debug_assert!(f_end > j && f_end <= n);
    Some(f_end)
}

/// A witness that some node label occurs in the graph where it must not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatViolation {
    /// Node whose label occurs elsewhere.
    pub pattern_node: u32,
    /// Node where the stray occurrence starts.
    pub at_node: u32,
    /// Offset of the stray occurrence inside `at_node`'s label.
    pub offset: usize,
}

/// Searches the whole graph for a label occurrence that breaks the chosen
/// property: in repeat-free mode a label may occur only as the prefix of its
/// own node, in semi mode as the prefix of any node of the same block.
/// Exhaustive path matching; meant as the reference for faster checks.
pub fn find_repeat_violation(g: &Efg, mode: ValidityMode) -> Option<RepeatViolation> {
    for v in 0..g.n_nodes() as u32 {
        let pat = g.label(v);
        for u in 0..g.n_nodes() as u32 {
            for off in 0..g.label(u).len() {
                if !matches_from(g, pat, u, off) {
                    continue;
                }
                let allowed = match mode {
                    ValidityMode::RepeatFree => off == 0 && u == v,
                    ValidityMode::SemiRepeatFree => off == 0 && g.block_of(u) == g.block_of(v),
                };
                if !allowed {
                    return Some(RepeatViolation { pattern_node: v, at_node: u, offset: off });
                }
            }
        }
    }
    None
}

pub fn graph_is_repeat_free(g: &Efg) -> bool {
    find_repeat_violation(g, ValidityMode::RepeatFree).is_none()
}

pub fn graph_is_semi_repeat_free(g: &Efg) -> bool {
    find_repeat_violation(g, ValidityMode::SemiRepeatFree).is_none()
}

fn matches_from(g: &Efg, pat: &[u8], u: u32, off: usize) -> bool {
    let lab = &g.label(u)[off..];
    if pat.len() <= lab.len() {
        return lab.starts_with(pat);
    }
    if !pat.starts_with(lab) {
        return false;
    }
    let rest = &pat[lab.len()..];
    g.out_neighbors(u).iter().any(|&w| matches_from(g, rest, w, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::{build_efg, Efg, EfgNode};
    use crate::msa::parse_fasta;
    use rand::prelude::*;

    fn msa_a() -> Msa {
        parse_fasta(">r0\nACGT\n>r1\nATGT\n", false).unwrap()
    }

    fn msa_b() -> Msa {
        parse_fasta(">r0\nATT\n>r1\n-TT\n>r2\nACG\n>r3\nAC-\n", false).unwrap()
    }

    #[test]
    fn segment_oracle_fixtures() {
        let b = msa_b();
        assert!(is_valid_segment(&b, 1, 3, ValidityMode::SemiRepeatFree));
        assert!(!is_valid_segment(&b, 1, 3, ValidityMode::RepeatFree));
        assert!(!is_valid_segment(&b, 0, 3, ValidityMode::SemiRepeatFree));
        // row 3 spells nothing in [2..3)
        assert!(!is_valid_segment(&b, 2, 3, ValidityMode::SemiRepeatFree));
        let a = msa_a();
        assert!(is_valid_segment(&a, 0, 2, ValidityMode::RepeatFree));
        assert!(!is_valid_segment(&a, 1, 2, ValidityMode::SemiRepeatFree));
    }

    #[test]
    fn brute_force_tables_on_fixtures() {
        let t = ValidityTable::brute_force(&msa_a(), ValidityMode::RepeatFree);
        assert_eq!(t.v, vec![None, Some(0), Some(0), Some(2), Some(2)]);
        assert_eq!(t.f, vec![Some(1), Some(3), Some(3), None, None]);
        let t = ValidityTable::brute_force(&msa_b(), ValidityMode::SemiRepeatFree);
        assert_eq!(t.f[0], None);
        assert_eq!(t.f[1], Some(3));
    }

    #[test]
    fn gapless_tables_match_brute_force() {
        let t = ValidityTable::gapless(&msa_a(), ValidityMode::RepeatFree).unwrap();
        let b = ValidityTable::brute_force(&msa_a(), ValidityMode::RepeatFree);
        assert_eq!(t, b);
        assert_eq!(ValidityTable::gapless(&msa_b(), ValidityMode::SemiRepeatFree), Err(ValidityError::GapsPresent));
    }

    #[test]
    fn gapless_tables_match_brute_force_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let m = rng.gen_range(1..5);
            let n = rng.gen_range(1..10);
            let sigma = if rng.gen_bool(0.5) { b"AC".as_slice() } else { b"ACGT".as_slice() };
            let rows: Vec<Vec<u8>> = (0..m)
                .map(|_| (0..n).map(|_| *sigma.choose(&mut rng).unwrap()).collect())
                .collect();
            let msa = Msa::from_rows(rows, None).unwrap();
            let fast = ValidityTable::gapless(&msa, ValidityMode::RepeatFree).unwrap();
            let brute = ValidityTable::brute_force(&msa, ValidityMode::RepeatFree);
            assert_eq!(fast, brute, "mismatch on {}", msa.to_fasta());
        }
    }

    #[test]
    fn elastic_f_fixtures() {
        let t = ValidityTable::elastic_semi(&msa_b()).unwrap();
        assert_eq!(t.f[0], None);
        assert_eq!(t.f[1], Some(3));
        assert_eq!(t.f[2], None);
        // gapless input works through the same path
        let t = ValidityTable::elastic_semi(&msa_a()).unwrap();
        assert_eq!(t.f, vec![Some(1), Some(3), Some(3), None, None]);
    }

    #[test]
    fn elastic_f_matches_brute_force_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for round in 0..150 {
            let m = rng.gen_range(2..5);
            let n = rng.gen_range(1..9);
            let gap_p = [0.0, 0.15, 0.3][round % 3];
            let rows: Vec<Vec<u8>> = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| if rng.gen_bool(gap_p) { GAP } else { *b"ACGT".choose(&mut rng).unwrap() })
                        .collect()
                })
                .collect();
            let msa = Msa::from_rows(rows, None).unwrap();
            if (0..m).any(|t| msa.spelled_len(t) == 0) {
                assert!(ValidityTable::elastic_semi(&msa).is_err());
                continue;
            }
            let fast = ValidityTable::elastic_semi(&msa).unwrap();
            let brute = ValidityTable::brute_force(&msa, ValidityMode::SemiRepeatFree);
            assert_eq!(fast.f, brute.f, "mismatch on\n{}", msa.to_fasta());
        }
    }

    #[test]
    fn graph_checks_distinguish_modes() {
        let g = build_efg(&msa_a(), &[(0, 2), (2, 4)]).unwrap();
        assert!(graph_is_repeat_free(&g));
        assert!(graph_is_semi_repeat_free(&g));

        // "A" is a prefix of "AC" in the same block: fine in semi mode only
        let nodes = vec![
            EfgNode { block: 0, label: b"A".to_vec() },
            EfgNode { block: 0, label: b"AC".to_vec() },
            EfgNode { block: 1, label: b"G".to_vec() },
        ];
        let g = Efg::from_canonical(b"ACG".to_vec(), nodes, vec![(0, 2), (1, 2)]).unwrap();
        assert!(!graph_is_repeat_free(&g));
        assert!(graph_is_semi_repeat_free(&g));
        let w = find_repeat_violation(&g, ValidityMode::RepeatFree).unwrap();
        assert_eq!(w, RepeatViolation { pattern_node: 0, at_node: 1, offset: 0 });

        // "A" occurs inside "TA": bad in both modes
        let nodes = vec![
            EfgNode { block: 0, label: b"TA".to_vec() },
            EfgNode { block: 1, label: b"A".to_vec() },
        ];
        let g = Efg::from_canonical(b"AT".to_vec(), nodes, vec![(0, 1)]).unwrap();
        assert!(!graph_is_semi_repeat_free(&g));
        let w = find_repeat_violation(&g, ValidityMode::SemiRepeatFree).unwrap();
        assert_eq!(w.offset, 1);
    }

    #[test]
    fn cross_node_occurrence_is_found() {
        // label "CG" spans the edge between "AC" and "GT"
        let nodes = vec![
            EfgNode { block: 0, label: b"AC".to_vec() },
            EfgNode { block: 1, label: b"GT".to_vec() },
            EfgNode { block: 2, label: b"CG".to_vec() },
        ];
        let g = Efg::from_canonical(b"ACGT".to_vec(), nodes, vec![(0, 1), (1, 2)]).unwrap();
        let w = find_repeat_violation(&g, ValidityMode::SemiRepeatFree).unwrap();
        assert_eq!(w, RepeatViolation { pattern_node: 2, at_node: 0, offset: 1 });
    }
}
