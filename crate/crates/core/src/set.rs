use std::fmt;

use serde::{Serialize, Serializer};

const WORD: usize = u64::BITS as usize;

/// A subset of the carrier `0..n`, stored as a bitset.
///
/// Membership is constant time and iteration yields members in increasing
/// index order. Two sets compare equal only when they live over the same
/// carrier size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, element: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(element);
        s
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "from_mask needs universe <= 64");
        let mut s = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == WORD {
                u64::MAX
            } else {
                (1u64 << universe) - 1
            };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Size of the carrier this set lives in.
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Returns the set as a bitmask when the carrier fits in one word.
    pub fn mask(&self) -> Option<u64> {
        (self.universe <= WORD).then(|| self.words.first().copied().unwrap_or(0))
    }

    /// Inserts `i`, returning `true` if it was not already present.
    ///
    /// Panics when `i` is outside the carrier.
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "element {i} outside carrier of size {}",
            self.universe
        );
        let (w, b) = (i / WORD, i % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        self.zip_with(other, |a, b| a & !b)
    }

    fn zip_with(&self, other: &ElementSet, f: impl Fn(u64, u64) -> u64) -> ElementSet {
        debug_assert_eq!(self.universe, other.universe);
        ElementSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    set: &'a ElementSet,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let b = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * WORD + b);
            }
            self.word += 1;
            self.bits = *self.set.words.get(self.word)?;
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterates_in_index_order_across_words() {
        let s = ElementSet::from_elements(130, [129, 3, 64, 0, 63]);
        assert_eq!(s.to_vec(), vec![0, 3, 63, 64, 129]);
        assert_eq!(s.len(), 5);
        assert!(s.contains(64) && !s.contains(65));
    }

    #[test]
    fn set_algebra() {
        let a = ElementSet::from_elements(4, [0, 1, 2]);
        let b = ElementSet::from_elements(4, [1, 3]);
        assert_eq!(a.union(&b), ElementSet::full(4));
        assert_eq!(a.intersection(&b).to_vec(), vec![1]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 2]);
        assert!(ElementSet::from_elements(4, [1]).is_subset(&b));
        assert!(!a.is_subset(&b));
        assert!(ElementSet::empty(4).is_subset(&b));
    }

    #[test]
    fn mask_round_trip() {
        let s = ElementSet::from_mask(5, 0b1_0110);
        assert_eq!(s.to_vec(), vec![1, 2, 4]);
        assert_eq!(s.mask(), Some(0b1_0110));
        assert_eq!(ElementSet::from_mask(2, 0xff).to_vec(), vec![0, 1]);
        assert_eq!(s.to_string(), "{1,2,4}");
    }

    #[test]
    fn empty_carrier() {
        let s = ElementSet::empty(0);
        assert!(s.is_empty() && s.is_full());
        assert_eq!(s.iter().count(), 0);
    }
}
