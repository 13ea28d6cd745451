//! Backward-search index for repeat-free graphs.
//!
//! The two-node window text is searched right to left as usual. Repeat-free
//! labels occupy pairwise disjoint suffix-array intervals, marked by two
//! bitvectors. Whenever the live interval falls inside the interval of some
//! `label(v)`, every matched position sits at the start of `v`, so the
//! interval may be widened to the whole label interval. That re-admits
//! continuations through other in-edges of `v` and lets the search cross
//! any number of nodes while the text only stores windows of two.

use super::{check_repeat_structure, IndexKind, OccursIndex, WindowText, Witness};
use crate::efg::Efg;
use crate::stringds::RankSelectBits;
use crate::validity::{RepeatViolation, ValidityMode};

pub struct ExpandedBwtIndex {
    pub(crate) g: Efg,
    pub(crate) windows: WindowText,
    /// Suffix-array positions opening a label interval, one per node.
    pub(crate) marks_open: RankSelectBits,
    /// Matching closing positions (inclusive).
    pub(crate) marks_close: RankSelectBits,
}

impl ExpandedBwtIndex {
    pub fn build(g: &Efg) -> Result<ExpandedBwtIndex, RepeatViolation> {
        if let Some(bad) = check_repeat_structure(g, ValidityMode::RepeatFree) {
            return Err(bad);
        }
        let windows = WindowText::build(g);
        let mut loci = Vec::with_capacity(g.n_nodes());
        for v in 0..g.n_nodes() as u32 {
            let (lo, hi) = windows.gss.find(g.label(v));
            assert!(lo < hi, "label of node {v} missing from its own window");
            loci.push((lo, hi - 1));
        }
        loci.sort_unstable();
        for pair in loci.windows(2) {
            // distinct labels are never substrings of one another here, so
            // their intervals cannot touch or nest
            assert!(pair[0].1 < pair[1].0, "label intervals overlap: {pair:?}");
        }
        let n = windows.gss.len();
        let opens: Vec<usize> = loci.iter().map(|&(b, _)| b).collect();
        let closes: Vec<usize> = loci.iter().map(|&(_, e)| e).collect();
        Ok(ExpandedBwtIndex {
            g: g.clone(),
            windows,
            marks_open: RankSelectBits::from_set_positions(n, &opens),
            marks_close: RankSelectBits::from_set_positions(n, &closes),
        })
    }
}

impl OccursIndex for ExpandedBwtIndex {
    fn kind(&self) -> IndexKind {
        IndexKind::Ebwt
    }

    fn graph(&self) -> &Efg {
        &self.g
    }

    fn occurs_with_witness(&self, q: &[u8]) -> Option<Witness> {
        if q.is_empty() {
            return Some(Witness { node: 0, offset: 0 });
        }
        let gss = &self.windows.gss;
        let (mut lo, mut hi) = gss.full_range();
        for &c in q.iter().rev() {
            let stepped = gss.backward_step(lo, hi, c);
            lo = stepped.0;
            hi = stepped.1;
            if lo >= hi {
                return None;
            }
            let r = self.marks_open.rank1(lo + 1);
            if r > 0 {
                let open = self.marks_open.select1(r - 1).unwrap();
                let close = self.marks_close.select1(r - 1).unwrap();
                if open <= lo && hi - 1 <= close {
                    lo = open;
                    hi = close + 1;
                }
            }
        }
        Some(self.windows.locate(gss.sa[lo] as usize))
    }
}
