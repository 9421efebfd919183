use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of a finite carrier `{0, .., universe-1}`.
///
/// Two sets are only comparable when they share a universe; ordering is
/// total and deterministic, which is all the topology code needs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet(bits)
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::empty(universe);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// Bit `i` of `mask` selects state `i`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Self::from_indices(universe, (0..universe).filter(|i| mask >> i & 1 == 1))
    }

    /// Inverse of [`StateSet::from_mask`]; universe must be at most 64.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.universe() <= 64);
        self.iter().fold(0, |m, i| m | 1 << i)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn insert(&mut self, x: usize) {
        self.0.insert(x);
    }

    pub fn remove(&mut self, x: usize) {
        self.0.remove(x);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        StateSet(bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.union_with(&other.0);
        StateSet(bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        StateSet(bits)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.difference_with(&other.0);
        StateSet(bits)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.0.intersect_with(&other.0);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a = StateSet::from_indices(5, [0, 2]);
        let b = StateSet::from_indices(5, [2, 3]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), [0, 2, 3]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), [2]);
        assert_eq!(a.complement().iter().collect::<Vec<_>>(), [1, 3, 4]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), [0]);
        assert!(StateSet::full(5).is_full());
        assert!(StateSet::empty(0).is_full() && StateSet::empty(0).is_empty());
        assert_eq!(StateSet::from_mask(5, 0b10101).mask(), 0b10101);
        assert_eq!(a.len(), 2);
    }
}
