//! Generalized suffix array over a set of documents with backward search.
//!
//! Documents are sequences of dense symbol codes in `1..=255`; code `0` is
//! reserved as the document separator. The indexed text is the concatenation
//! of every document followed by one separator, so the final byte is `0`.

/// Suffix array, LCP array and FM-index machinery for one concatenated text.
pub struct GeneralizedSuffixStructure {
    pub text: Vec<u8>,
    pub sa: Vec<u32>,
    /// `lcp[i]` = longest common prefix of suffixes `sa[i-1]` and `sa[i]`; `lcp[0] = 0`.
    pub lcp: Vec<u32>,
    pub bwt: Vec<u8>,
    /// Start position of each document in `text`.
    pub doc_starts: Vec<usize>,
    count: [u32; 257],
    occ_samples: Vec<u32>,
    occ_syms: usize,
}

const OCC_STRIDE: usize = 32;

impl GeneralizedSuffixStructure {
    pub fn from_docs(docs: &[Vec<u8>]) -> Self {
        let mut text = Vec::with_capacity(docs.iter().map(|d| d.len() + 1).sum());
        let mut doc_starts = Vec::with_capacity(docs.len());
        for d in docs {
            doc_starts.push(text.len());
            debug_assert!(!d.contains(&0), "document may not contain the separator code");
            text.extend_from_slice(d);
            text.push(0);
        }
        Self::from_text(text, doc_starts)
    }

    pub fn from_text(text: Vec<u8>, doc_starts: Vec<usize>) -> Self {
        assert!(!text.is_empty(), "cannot index an empty text");
        assert_eq!(*text.last().unwrap(), 0, "text must end with the separator");
        let sa = build_suffix_array(&text);
        let lcp = kasai_lcp(&text, &sa);
        let n = text.len();
        let mut bwt = vec![0u8; n];
        for i in 0..n {
            let p = sa[i] as usize;
            bwt[i] = if p == 0 { text[n - 1] } else { text[p - 1] };
        }
        let mut count = [0u32; 257];
        for &c in &text {
            count[c as usize + 1] += 1;
        }
        for c in 1..257 {
            count[c] += count[c - 1];
        }
        let occ_syms = text.iter().copied().max().unwrap() as usize + 1;
        let blocks = n / OCC_STRIDE + 1;
        let mut occ_samples = vec![0u32; blocks * occ_syms];
        let mut running = vec![0u32; occ_syms];
        for (i, &c) in bwt.iter().enumerate() {
            if i % OCC_STRIDE == 0 {
                occ_samples[(i / OCC_STRIDE) * occ_syms..][..occ_syms].copy_from_slice(&running);
            }
            running[c as usize] += 1;
        }
        if n % OCC_STRIDE == 0 {
            // rank queries at i == n land on a boundary past the loop above
            occ_samples[(n / OCC_STRIDE) * occ_syms..][..occ_syms].copy_from_slice(&running);
        }
        GeneralizedSuffixStructure { text, sa, lcp, bwt, doc_starts, count, occ_samples, occ_syms }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Occurrences of `c` in `bwt[0..i)`.
    pub fn occ(&self, c: u8, i: usize) -> u32 {
        if (c as usize) >= self.occ_syms {
            return 0;
        }
        let block = i / OCC_STRIDE;
        let mut r = self.occ_samples[block * self.occ_syms + c as usize];
        for &b in &self.bwt[block * OCC_STRIDE..i] {
            if b == c {
                r += 1;
            }
        }
        r
    }

    /// Half-open suffix array interval of all suffixes.
    pub fn full_range(&self) -> (usize, usize) {
        (0, self.text.len())
    }

    /// One backward search step: refine the interval of matches of `P` to the
    /// interval of matches of `cP`. Symbols absent from the text give an
    /// empty interval.
    pub fn backward_step(&self, lo: usize, hi: usize, c: u8) -> (usize, usize) {
        let base = self.count[c as usize] as usize;
        let new_lo = base + self.occ(c, lo) as usize;
        let new_hi = base + self.occ(c, hi) as usize;
        (new_lo, new_hi)
    }

    /// Suffix array interval of `pattern`, by backward search.
    pub fn find(&self, pattern: &[u8]) -> (usize, usize) {
        let (mut lo, mut hi) = self.full_range();
        for &c in pattern.iter().rev() {
            (lo, hi) = self.backward_step(lo, hi, c);
            if lo >= hi {
                return (lo, lo);
            }
        }
        (lo, hi)
    }

    /// Document containing text position `pos`.
    pub fn doc_of(&self, pos: usize) -> usize {
        debug_assert!(pos < self.text.len());
        self.doc_starts.partition_point(|&s| s <= pos) - 1
    }
}

fn build_suffix_array(text: &[u8]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = text.iter().map(|&c| c as usize).collect();
    let mut new_rank = vec![0usize; n];
    let mut tmp = vec![0usize; n];
    let mut cnt = vec![0usize; n.max(257)];

    for &r in &rank {
        cnt[r] += 1;
    }
    for i in 1..cnt.len() {
        cnt[i] += cnt[i - 1];
    }
    for i in (0..n).rev() {
        let r = rank[i];
        cnt[r] -= 1;
        sa[cnt[r]] = i;
    }

    let mut k = 1;
    while k < n {
        // order by second key: suffixes shorter than k first, then by current order
        let mut p = 0;
        for i in n - k..n {
            tmp[p] = i;
            p += 1;
        }
        for &s in sa.iter() {
            if s >= k {
                tmp[p] = s - k;
                p += 1;
            }
        }
        // stable counting sort by first key
        let max_r = *rank.iter().max().unwrap();
        for c in cnt[..=max_r].iter_mut() {
            *c = 0;
        }
        for &r in &rank {
            cnt[r] += 1;
        }
        for i in 1..=max_r {
            cnt[i] += cnt[i - 1];
        }
        for &s in tmp.iter().rev() {
            let r = rank[s];
            cnt[r] -= 1;
            sa[cnt[r]] = s;
        }
        // reassign ranks
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        new_rank[sa[0]] = 0;
        let mut r = 0;
        for i in 1..n {
            if key(sa[i]) != key(sa[i - 1]) {
                r += 1;
            }
            new_rank[sa[i]] = r;
        }
        std::mem::swap(&mut rank, &mut new_rank);
        if r == n - 1 {
            break;
        }
        k *= 2;
    }
    sa.into_iter().map(|x| x as u32).collect()
}

fn kasai_lcp(text: &[u8], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut pos_in_sa = vec![0usize; n];
    for (i, &s) in sa.iter().enumerate() {
        pos_in_sa[s as usize] = i;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = pos_in_sa[i];
        if r > 0 {
            let j = sa[r - 1] as usize;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}
