//! Plain bitvector with constant-time rank and binary-search select.

/// Immutable bit sequence supporting `rank` and `select` queries.
///
/// Rank is answered from per-word cumulative counts, select by binary
/// searching those counts and scanning one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSelectBits {
    words: Vec<u64>,
    len: usize,
    // word_ranks[i] = number of set bits in words[..i]
    word_ranks: Vec<u32>,
}

impl RankSelectBits {
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words, bits.len())
    }

    pub fn from_set_positions(len: usize, positions: &[usize]) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for &p in positions {
            assert!(p < len, "bit position {p} out of range for length {len}");
            words[p / 64] |= 1 << (p % 64);
        }
        Self::from_words(words, len)
    }

    fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut word_ranks = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        word_ranks.push(0);
        for w in &words {
            acc += w.count_ones();
            word_ranks.push(acc);
        }
        RankSelectBits { words, len, word_ranks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        *self.word_ranks.last().unwrap() as usize
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range");
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits in positions `[0, i)`. `i` may equal `len`.
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank index {i} out of range");
        let w = i / 64;
        let head = self.word_ranks[w] as usize;
        let tail = if i % 64 == 0 {
            0
        } else {
            (self.words[w] & ((1u64 << (i % 64)) - 1)).count_ones() as usize
        };
        head + tail
    }

    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `k`-th set bit, counting from zero.
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.count_ones() {
            return None;
        }
        let target = k as u32;
        // last word index with word_ranks[w] <= k
        let mut lo = 0usize;
        let mut hi = self.words.len();
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.word_ranks[mid] <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut remaining = k - self.word_ranks[lo] as usize;
        let mut w = self.words[lo];
        let mut pos = lo * 64;
        loop {
            if w & 1 == 1 {
                if remaining == 0 {
                    return Some(pos);
                }
                remaining -= 1;
            }
            w >>= 1;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn rank_small() {
        let b = RankSelectBits::from_bools(&[true, false, true, true, false]);
        assert_eq!(b.rank1(0), 0);
        assert_eq!(b.rank1(1), 1);
        assert_eq!(b.rank1(4), 3);
        assert_eq!(b.rank1(5), 3);
        assert_eq!(b.rank0(5), 2);
    }

    #[test]
    fn select_small() {
        let b = RankSelectBits::from_bools(&[true, false, true, true, false]);
        assert_eq!(b.select1(0), Some(0));
        assert_eq!(b.select1(1), Some(2));
        assert_eq!(b.select1(2), Some(3));
        assert_eq!(b.select1(3), None);
    }

    #[test]
    fn empty() {
        let b = RankSelectBits::from_bools(&[]);
        assert_eq!(b.len(), 0);
        assert_eq!(b.rank1(0), 0);
        assert_eq!(b.select1(0), None);
    }

    #[test]
    fn rank_select_agree_with_naive_on_random_bits() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let len = rng.gen_range(0..500);
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.3)).collect();
            let b = RankSelectBits::from_bools(&bits);
            let mut count = 0usize;
            for i in 0..=len {
                assert_eq!(b.rank1(i), count, "rank at {i}");
                if i < len && bits[i] {
                    count += 1;
                }
            }
            let ones: Vec<usize> =
                (0..len).filter(|&i| bits[i]).collect();
            for (k, &p) in ones.iter().enumerate() {
                assert_eq!(b.select1(k), Some(p));
            }
            assert_eq!(b.select1(ones.len()), None);
            // rank of a select position gives the index back
            for k in 0..ones.len() {
                let p = b.select1(k).unwrap();
                assert_eq!(b.rank1(p), k);
                assert!(b.get(p));
            }
        }
    }
}
