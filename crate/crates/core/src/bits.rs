/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn new(len: usize) -> Self {
        BitRow { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::new(len);
        for i in ones {
            row.set(i, true);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, on: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i & 63);
        if on {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    /// Grows the row by one zero bit.
    pub fn push_zero(&mut self) {
        self.len += 1;
        if self.words.len() < self.len.div_ceil(64) {
            self.words.push(0);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Popcount of the intersection with `other`.
    #[inline]
    pub fn and_count(&self, other: &BitRow) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Like [`and_count`](Self::and_count) but stops as soon as `limit` is
    /// reached.
    #[inline]
    pub fn and_count_capped(&self, other: &BitRow, limit: usize) -> usize {
        let mut n = 0;
        for (a, b) in self.words.iter().zip(&other.words) {
            n += (a & b).count_ones() as usize;
            if n >= limit {
                break;
            }
        }
        n
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_iterate() {
        let mut r = BitRow::new(130);
        for i in [0, 63, 64, 129] {
            r.set(i, true);
        }
        assert_eq!(r.ones().collect::<Vec<_>>(), [0, 63, 64, 129]);
        assert_eq!(r.count_ones(), 4);
        r.set(63, false);
        assert!(!r.get(63));
        let s = BitRow::from_indices(130, [0, 64, 100]);
        assert_eq!(r.and_count(&s), 2);
        assert_eq!(r.and_count_capped(&s, 1), 1);
    }

    #[test]
    fn push_grows_words() {
        let mut r = BitRow::new(64);
        r.push_zero();
        r.set(64, true);
        assert_eq!(r.len(), 65);
        assert_eq!(r.ones().collect::<Vec<_>>(), [64]);
    }
}
