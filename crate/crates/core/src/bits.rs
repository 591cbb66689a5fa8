//! Fixed-size bit sets used for reachability rows and mapping subsets.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::new(len);
        for i in 0..len {
            set.insert(i);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// Dense square bit matrix; row `r` holds the set of columns related to `r`.
#[derive(Clone, Debug)]
pub(crate) struct BitMatrix {
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize) {
        self.data[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    #[inline]
    pub(crate) fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.words_per_row + col / 64] & (1 << (col % 64)) != 0
    }

    /// `row |= other`; `row` and `other` must differ.
    pub(crate) fn union_rows(&mut self, row: usize, other: usize) {
        debug_assert_ne!(row, other);
        let w = self.words_per_row;
        let (dst, src) = if row < other {
            let (lo, hi) = self.data.split_at_mut(other * w);
            (&mut lo[row * w..row * w + w], &hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(row * w);
            (&mut hi[..w], &lo[other * w..other * w + w])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        self.data.len() * 8
    }
}
