//! A growable bitset over `usize` indices.
//!
//! Used both for sets of indecomposables and for sets of points in a finite
//! space. The `Ord` impl is the canonical order used throughout the crate:
//! first by cardinality, then lexicographically by the ascending member
//! sequence.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, 1, ..., len - 1}`.
    pub fn full(len: usize) -> Self {
        let mut words = vec![!0u64; len.div_ceil(64)];
        let rem = len % 64;
        if rem != 0 {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << rem) - 1;
            }
        }
        let mut s = Self { words };
        s.trim();
        s
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Returns true if `i` was not already present.
    pub fn insert(&mut self, i: usize) -> bool {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let bit = 1u64 << (i % 64);
        let fresh = self.words[w] & bit == 0;
        self.words[w] |= bit;
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let w = i / 64;
        let Some(word) = self.words.get_mut(w) else {
            return false;
        };
        let bit = 1u64 << (i % 64);
        let present = *word & bit != 0;
        *word &= !bit;
        self.trim();
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.trim();
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        s.trim();
        s
    }

    /// Members strictly below `bound`.
    pub fn prefix(&self, bound: usize) -> BitSet {
        let mut s = self.clone();
        let w = bound / 64;
        if w < s.words.len() {
            s.words.truncate(w + 1);
            s.words[w] &= (1u64 << (bound % 64)) - 1;
            s.trim();
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
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

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BitSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn full_and_prefix() {
        assert_eq!(BitSet::full(0), BitSet::new());
        assert_eq!(BitSet::full(70).len(), 70);
        assert_eq!(BitSet::full(64).to_vec(), (0..64).collect::<Vec<_>>());
        let s: BitSet = [1, 5, 64, 100].into_iter().collect();
        assert_eq!(s.prefix(64).to_vec(), vec![1, 5]);
        assert_eq!(s.prefix(65).to_vec(), vec![1, 5, 64]);
        assert_eq!(s.prefix(0), BitSet::new());
    }

    #[test]
    fn canonical_order() {
        let a: BitSet = [2].into_iter().collect();
        let b: BitSet = [0, 1].into_iter().collect();
        let c: BitSet = [0, 2].into_iter().collect();
        assert!(BitSet::new() < a);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn remove_trims_so_equality_is_structural() {
        let mut s = BitSet::singleton(130);
        s.remove(130);
        assert_eq!(s, BitSet::new());
        assert!(s.is_empty());
    }

    fn model() -> impl Strategy<Value = BTreeSet<usize>> {
        proptest::collection::btree_set(0usize..200, 0..30)
    }

    proptest! {
        #[test]
        fn agrees_with_btreeset(a in model(), b in model()) {
            let sa: BitSet = a.iter().copied().collect();
            let sb: BitSet = b.iter().copied().collect();
            prop_assert_eq!(sa.union(&sb).to_vec(), a.union(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection(&sb).to_vec(), a.intersection(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.difference(&sb).to_vec(), a.difference(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            prop_assert_eq!(sa.len(), a.len());
            prop_assert_eq!(sa == sb, a == b);
        }
    }
}
