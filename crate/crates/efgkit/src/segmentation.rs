//! Optimal column segmentations under two objectives: as many blocks as
//! possible, or the smallest possible maximum segment width.

use crate::msa::{Msa, GAP};
use crate::stringds::GeneralizedSuffixStructure;
use crate::validity::{ValidityError, ValidityMode, ValidityTable};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    MaxBlocks,
    MinMaxLength,
}

impl ScoreKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::MaxBlocks => "maxblocks",
            ScoreKind::MinMaxLength => "minmaxlength",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegScore {
    pub kind: ScoreKind,
    pub value: u64,
}

/// A full column segmentation: consecutive half-open ranges covering all
/// columns, together with the objective it optimizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub mode: ValidityMode,
    pub score: SegScore,
    pub segments: Vec<(usize, usize)>,
}

impl Segmentation {
    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn to_json(&self) -> String {
        let file = SegFile {
            version: 1,
            mode: self.mode.to_string(),
            score: ScoreFile { kind: self.score.kind.as_str().to_string(), value: self.score.value },
            intervals: self.segments.iter().map(|&(s, e)| (s + 1, e)).collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(input: &str) -> Result<Segmentation, String> {
        let file: SegFile = serde_json::from_str(input).map_err(|e| e.to_string())?;
        if file.version != 1 {
            return Err(format!("unsupported format version {}", file.version));
        }
        let mode = match file.mode.as_str() {
            "repeat-free" => ValidityMode::RepeatFree,
            "semi-repeat-free" => ValidityMode::SemiRepeatFree,
            other => return Err(format!("unknown mode {other:?}")),
        };
        let kind = match file.score.kind.as_str() {
            "maxblocks" => ScoreKind::MaxBlocks,
            "minmaxlength" => ScoreKind::MinMaxLength,
            other => return Err(format!("unknown score kind {other:?}")),
        };
        let mut segments = Vec::with_capacity(file.intervals.len());
        let mut expect = 1usize;
        for &(a, b) in &file.intervals {
            if a != expect || b < a {
                return Err(format!("interval [{a}, {b}] breaks the column coverage"));
            }
            segments.push((a - 1, b));
            expect = b + 1;
        }
        if segments.is_empty() {
            return Err("segmentation has no intervals".into());
        }
        Ok(Segmentation { mode, score: SegScore { kind, value: file.score.value }, segments })
    }
}

#[derive(Serialize, Deserialize)]
struct SegFile {
    version: u32,
    mode: String,
    score: ScoreFile,
    intervals: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct ScoreFile {
    kind: String,
    value: u64,
}

fn traceback(preds: &[Option<usize>], n: usize) -> Vec<(usize, usize)> {
    let mut segs = Vec::new();
    let mut j = n;
    while j > 0 {
        let p = preds[j].expect("predecessor chain reaches column 0");
        segs.push((p, j));
        j = p;
    }
    segs.reverse();
    segs
}

/// Maximizes the number of blocks. A segment `[j'..j)` is usable exactly
/// when `f(j') <= j`, so one sweep over `j` with pairs bucketed by `f`
/// keeps a running best reachable predecessor.
pub fn maximize_blocks(table: &ValidityTable) -> Option<Segmentation> {
    let n = table.n_cols;
    let mut by_f: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for jx in 0..n {
        if let Some(f) = table.f[jx] {
            by_f[f].push(jx);
        }
    }
    let mut score: Vec<Option<u64>> = vec![None; n + 1];
    let mut preds: Vec<Option<usize>> = vec![None; n + 1];
    score[0] = Some(0);
    let mut best: Option<(u64, usize)> = None;
    for j in 1..=n {
        for &jx in &by_f[j] {
            if let Some(s) = score[jx] {
                if best.map_or(true, |(bs, bj)| s > bs || (s == bs && jx > bj)) {
                    best = Some((s, jx));
                }
            }
        }
        if let Some((s, jx)) = best {
            score[j] = Some(s + 1);
            preds[j] = Some(jx);
        }
    }
    let value = score[n]?;
    Some(Segmentation {
        mode: table.mode,
        score: SegScore { kind: ScoreKind::MaxBlocks, value },
        segments: traceback(&preds, n),
    })
}

// min tree item ordering: smaller value first, larger predecessor on ties
fn better(a: Option<(i64, usize)>, b: Option<(i64, usize)>) -> Option<(i64, usize)> {
    match (a, b) {
        (Some((av, aj)), Some((bv, bj))) => {
            if av < bv || (av == bv && aj > bj) {
                Some((av, aj))
            } else {
                Some((bv, bj))
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

struct MinTree {
    size: usize,
    data: Vec<Option<(i64, usize)>>,
}

impl MinTree {
    fn new(keys: usize) -> Self {
        let size = keys.next_power_of_two().max(1);
        MinTree { size, data: vec![None; 2 * size] }
    }

    fn upgrade(&mut self, key: usize, item: (i64, usize)) {
        let mut i = key + self.size;
        while i >= 1 {
            self.data[i] = better(self.data[i], Some(item));
            i /= 2;
        }
    }

    fn query(&self, l: usize, r: usize) -> Option<(i64, usize)> {
        if l > r {
            return None;
        }
        let mut acc = None;
        let mut lo = l + self.size;
        let mut hi = r + self.size + 1;
        while lo < hi {
            if lo & 1 == 1 {
                acc = better(acc, self.data[lo]);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                acc = better(acc, self.data[hi]);
            }
            lo /= 2;
            hi /= 2;
        }
        acc
    }
}

/// Minimizes the maximum segment width using the `f` table. Candidates
/// `j'` enter two range-minimum trees keyed by `j' + score(j')` once `j`
/// reaches `f(j')`; the split key decides whether the new segment width or
/// the old score dominates the maximum.
pub fn minimize_max_length(table: &ValidityTable) -> Option<Segmentation> {
    let n = table.n_cols;
    let mut by_f: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for jx in 0..n {
        if let Some(f) = table.f[jx] {
            by_f[f].push(jx);
        }
    }
    let mut score: Vec<Option<u64>> = vec![None; n + 1];
    let mut preds: Vec<Option<usize>> = vec![None; n + 1];
    score[0] = Some(0);
    // keys run up to j' + score(j') <= 2n
    let mut tree_old = MinTree::new(2 * n + 1); // value score(j'): the old score dominates
    let mut tree_new = MinTree::new(2 * n + 1); // value -j': the fresh segment dominates
    for j in 1..=n {
        for &jx in &by_f[j] {
            if let Some(s) = score[jx] {
                let key = jx + s as usize;
                tree_old.upgrade(key, (s as i64, jx));
                tree_new.upgrade(key, (-(jx as i64), jx));
            }
        }
        let mut cand = tree_old.query(j + 1, 2 * n);
        if let Some((neg, jx)) = tree_new.query(0, j) {
            cand = better(cand, Some((j as i64 + neg, jx)));
        }
        if let Some((val, jx)) = cand {
            score[j] = Some(val as u64);
            preds[j] = Some(jx);
        }
    }
    let value = score[n]?;
    Some(Segmentation {
        mode: table.mode,
        score: SegScore { kind: ScoreKind::MinMaxLength, value },
        segments: traceback(&preds, n),
    })
}

struct AppendRmq {
    levels: Vec<Vec<u64>>,
}

impl AppendRmq {
    fn new() -> Self {
        AppendRmq { levels: vec![Vec::new()] }
    }

    fn push(&mut self, v: u64) {
        self.levels[0].push(v);
        let n = self.levels[0].len();
        let mut k = 1;
        while (1usize << k) <= n {
            if self.levels.len() == k {
                self.levels.push(Vec::new());
            }
            let half = 1usize << (k - 1);
            while self.levels[k].len() + (1 << k) <= n {
                let i = self.levels[k].len();
                let v = self.levels[k - 1][i].min(self.levels[k - 1][i + half]);
                self.levels[k].push(v);
            }
            k += 1;
        }
    }

    // min over values[l..=r]
    fn min(&self, l: usize, r: usize) -> u64 {
        debug_assert!(l <= r && r < self.levels[0].len());
        let k = usize::BITS as usize - 1 - (r - l + 1).leading_zeros() as usize;
        self.levels[k][l].min(self.levels[k][r + 1 - (1 << k)])
    }
}

/// Width minimization for gapless tables in one left-to-right pass: the
/// best predecessor only moves right, advancing whenever some later
/// candidate is at least as good, which a range-minimum over earlier
/// scores detects. Scores use `n + 1` as the unreachable marker.
pub fn minimize_max_length_gapless(table: &ValidityTable) -> Option<Segmentation> {
    let n = table.n_cols;
    let unreachable = (n + 1) as u64;
    let mut prev_v = 0usize;
    for j in 1..=n {
        if let Some(v) = table.v[j] {
            assert!(v >= prev_v, "left extensions must be monotone; was this table built from a gapless alignment?");
            prev_v = v;
        }
    }
    let mut score = vec![unreachable; n + 1];
    let mut preds: Vec<Option<usize>> = vec![None; n + 1];
    score[0] = 0;
    let mut rmq = AppendRmq::new();
    rmq.push(0);
    let mut x = 0usize;
    for j in 1..=n {
        if let Some(v) = table.v[j] {
            loop {
                let cur = (j - x) as u64;
                let cur = cur.max(score[x]);
                let ahead = if x + 1 <= v { rmq.min(x + 1, v) } else { u64::MAX };
                if cur < ahead {
                    break;
                }
                x += 1;
            }
            let val = ((j - x) as u64).max(score[x]);
            if val < unreachable {
                score[j] = val;
                preds[j] = Some(x);
            }
        }
        rmq.push(score[j]);
    }
    if score[n] >= unreachable {
        return None;
    }
    Some(Segmentation {
        mode: table.mode,
        score: SegScore { kind: ScoreKind::MinMaxLength, value: score[n] },
        segments: traceback(&preds, n),
    })
}

/// Width minimization in repeat-free mode for alignments with gaps, where
/// right-extension monotonicity fails and the `f` table cannot be used.
/// For each end column the start walks left, extending per-row loci one
/// column at a time; a start is usable when distinct segment spells have
/// pairwise disjoint loci whose sizes sum to the row count.
pub fn minimize_max_length_repeat_free_elastic(msa: &Msa) -> Result<Option<Segmentation>, ValidityError> {
    let n = msa.n_cols();
    let m = msa.n_rows();
    for t in 0..m {
        if msa.spelled_len(t) == 0 {
            return Err(ValidityError::AllGapRow(t));
        }
    }
    let docs: Vec<Vec<u8>> = (0..m).map(|t| msa.spelled_codes(t)).collect();
    let gsa = GeneralizedSuffixStructure::from_docs(&docs);
    let infeasible = |j: usize| (j + 1) as u64;
    let mut score: Vec<u64> = vec![0; n + 1];
    let mut preds: Vec<Option<usize>> = vec![None; n + 1];
    let mut ranges: Vec<(usize, usize, u64)> = vec![(0, 0, 0); m];
    let mut triples: Vec<(usize, usize, u64)> = Vec::with_capacity(m);
    for j in 1..=n {
        for r in ranges.iter_mut() {
            *r = (0, gsa.len(), 0);
        }
        let mut best: Option<(u64, usize)> = None;
        let mut c = j;
        while c > 0 {
            let jp = c - 1;
            if let Some((b, _)) = best {
                if (j - jp) as u64 > b {
                    break;
                }
            }
            for (t, r) in ranges.iter_mut().enumerate() {
                let sym = msa.rows()[t][jp];
                if sym != GAP {
                    let (lo, hi) = gsa.backward_step(r.0, r.1, msa.encode(sym));
                    *r = (lo, hi, r.2 + 1);
                }
            }
            c -= 1;
            if score[jp] > jp as u64 {
                continue; // prefix not segmentable
            }
            triples.clear();
            triples.extend(ranges.iter().copied());
            triples.sort_unstable();
            triples.dedup();
            let disjoint = triples.windows(2).all(|w| w[1].0 >= w[0].1);
            let total: usize = triples.iter().map(|&(lo, hi, _)| hi - lo).sum();
            if disjoint && total == m {
                let val = ((j - jp) as u64).max(score[jp]);
                if best.map_or(true, |(b, _)| val < b) {
                    best = Some((val, jp));
                }
            }
        }
        match best {
            Some((val, jp)) => {
                score[j] = val;
                preds[j] = Some(jp);
            }
            None => score[j] = infeasible(j),
        }
    }
    if score[n] > n as u64 {
        return Ok(None);
    }
    Ok(Some(Segmentation {
        mode: ValidityMode::RepeatFree,
        score: SegScore { kind: ScoreKind::MinMaxLength, value: score[n] },
        segments: traceback(&preds, n),
    }))
}
