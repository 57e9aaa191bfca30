//! Fixed-width vertex sets for the search kernels.

/// Number of vertices a [`VSet`] can hold.
pub const CAPACITY: usize = 256;

/// A subset of `{0, ..., 255}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VSet([u64; 4]);

impl VSet {
    pub const EMPTY: VSet = VSet([0; 4]);

    /// `{0, ..., n-1}`.
    pub fn prefix(n: usize) -> VSet {
        debug_assert!(n <= CAPACITY);
        let mut w = [0u64; 4];
        for (i, word) in w.iter_mut().enumerate() {
            let lo = i * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        VSet(w)
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1u64 << (v & 63));
    }

    #[cfg(test)]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    #[inline]
    pub fn and(&self, o: &VSet) -> VSet {
        VSet([
            self.0[0] & o.0[0],
            self.0[1] & o.0[1],
            self.0[2] & o.0[2],
            self.0[3] & o.0[3],
        ])
    }

    #[inline]
    pub fn or(&self, o: &VSet) -> VSet {
        VSet([
            self.0[0] | o.0[0],
            self.0[1] | o.0[1],
            self.0[2] | o.0[2],
            self.0[3] | o.0[3],
        ])
    }

    #[inline]
    pub fn and_not(&self, o: &VSet) -> VSet {
        VSet([
            self.0[0] & !o.0[0],
            self.0[1] & !o.0[1],
            self.0[2] & !o.0[2],
            self.0[3] & !o.0[3],
        ])
    }

    #[cfg(test)]
    pub fn is_subset_of(&self, o: &VSet) -> bool {
        self.and_not(o).is_empty()
    }

    /// Members strictly above `v`.
    pub fn above(&self, v: usize) -> VSet {
        let mut out = *self;
        let word = v >> 6;
        for w in out.0.iter_mut().take(word) {
            *w = 0;
        }
        let bit = v & 63;
        out.0[word] &= if bit == 63 { 0 } else { !((1u64 << (bit + 1)) - 1) };
        out
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> VSetIter {
        VSetIter { words: self.0, word: 0 }
    }
}

impl FromIterator<usize> for VSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl std::fmt::Debug for VSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Ascending iteration over a [`VSet`].
pub struct VSetIter {
    words: [u64; 4],
    word: usize,
}

impl Iterator for VSetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < 4 {
            let w = self.words[self.word];
            if w != 0 {
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + w.trailing_zeros() as usize);
            }
            self.word += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let s: VSet = [0, 63, 64, 200, 255].into_iter().collect();
        assert_eq!(s.len(), 5);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 200, 255]);
        assert_eq!(s.above(63).iter().collect::<Vec<_>>(), vec![64, 200, 255]);
        assert_eq!(s.above(0).first(), Some(63));
        assert!(s.above(255).is_empty());
        assert_eq!(VSet::prefix(70).len(), 70);
        assert_eq!(VSet::prefix(256).len(), 256);
        assert!(s.is_subset_of(&VSet::prefix(256)));
        assert!(!s.is_subset_of(&VSet::prefix(255)));
    }
}
