use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("pair ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
    #[error("cannot compose: left relation has {left} targets, right relation has {right} sources")]
    EndpointMismatch { left: usize, right: usize },
}

/// A relation `B ⊆ X × Y` between two finite state spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new<I>(left: usize, right: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= left || y >= right) {
            return Err(RelationError::OutOfRange(x, y));
        }
        Ok(Relation { left, right, pairs })
    }

    pub fn empty(left: usize, right: usize) -> Self {
        Relation {
            left,
            right,
            pairs: BTreeSet::new(),
        }
    }

    /// The diagonal `Δ_X`.
    pub fn identity(n: usize) -> Self {
        Relation {
            left: n,
            right: n,
            pairs: (0..n).map(|x| (x, x)).collect(),
        }
    }

    /// The graph `{(x, map[x])}` of a total map into a space of size `right`.
    pub fn graph(map: &[usize], right: usize) -> Result<Self, RelationError> {
        Self::new(map.len(), right, map.iter().copied().enumerate())
    }

    pub fn left_len(&self) -> usize {
        self.left
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        debug_assert_eq!((self.left, self.right), (other.left, other.right));
        Relation {
            left: self.left,
            right: self.right,
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }

    pub fn converse(&self) -> Relation {
        Relation {
            left: self.right,
            right: self.left,
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// Relational composition `self ∘ other = {(x, z) | ∃y. x self y ∧ y other z}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation, RelationError> {
        if self.right != other.left {
            return Err(RelationError::EndpointMismatch {
                left: self.right,
                right: other.left,
            });
        }
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(x, y)| {
                other
                    .pairs
                    .range((y, 0)..(y + 1, 0))
                    .map(move |&(_, z)| (x, z))
            })
            .collect();
        Ok(Relation {
            left: self.left,
            right: other.right,
            pairs,
        })
    }

    pub fn is_equivalence(&self) -> bool {
        self.left == self.right
            && (0..self.left).all(|x| self.contains(x, x))
            && self.pairs().all(|(x, y)| self.contains(y, x))
            && self
                .compose(self)
                .map(|r| r.is_subset(self))
                .unwrap_or(false)
    }
}

/// Disjoint blocks covering `0..n`. Blocks are numbered in order of their
/// least element, which is also the block's representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups states with equal keys.
    pub fn from_keys<K: Hash + Eq>(keys: &[K]) -> Partition {
        let mut ids: HashMap<&K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let block_of = keys
            .iter()
            .enumerate()
            .map(|(x, k)| {
                let id = *ids.entry(k).or_insert_with(|| {
                    blocks.push(Vec::new());
                    blocks.len() - 1
                });
                blocks[id].push(x);
                id
            })
            .collect();
        Partition { block_of, blocks }
    }

    /// Equivalence classes of an equivalence relation on a single space.
    pub fn from_equivalence(r: &Relation) -> Partition {
        debug_assert!(r.is_equivalence());
        let keys: Vec<usize> = (0..r.left_len())
            .map(|x| (0..=x).find(|&y| r.contains(x, y)).unwrap_or(x))
            .collect();
        Partition::from_keys(&keys)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// The projection `x ↦ x/≈` as block indices.
    pub fn projection(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn representative(&self, block: usize) -> usize {
        self.blocks[block][0]
    }

    /// `{(x, y) | x and y share a block}`.
    pub fn to_relation(&self) -> Relation {
        let n = self.universe();
        let pairs = self
            .blocks
            .iter()
            .flat_map(|b| b.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y))));
        Relation::new(n, n, pairs).expect("blocks stay in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converse_and_compose_with_identity() {
        let id = Relation::identity(3);
        assert_eq!(id.converse(), id);
        let r = Relation::new(3, 2, [(0, 1), (2, 0)]).unwrap();
        assert_eq!(id.compose(&r).unwrap(), r);
        assert_eq!(r.compose(&Relation::identity(2)).unwrap(), r);
    }

    #[test]
    fn compose_two_element_relations() {
        // {(0,0),(1,1)} then {(0,1),(1,0)} unfolds to the swap.
        let r1 = Relation::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        let r2 = Relation::new(2, 2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(r1.compose(&r2).unwrap(), r2);
        // {(0,1),(1,1)} then {(1,0)}: every x reaches 1, and 1 reaches 0.
        let r3 = Relation::new(2, 2, [(0, 1), (1, 1)]).unwrap();
        let r4 = Relation::new(2, 2, [(1, 0)]).unwrap();
        assert_eq!(
            r3.compose(&r4).unwrap(),
            Relation::new(2, 2, [(0, 0), (1, 0)]).unwrap()
        );
        assert_eq!(r4.compose(&r3).unwrap(), Relation::new(2, 2, [(1, 1)]).unwrap());
    }

    #[test]
    fn compose_checks_endpoints() {
        let r = Relation::empty(2, 3);
        assert_eq!(
            r.compose(&r).unwrap_err(),
            RelationError::EndpointMismatch { left: 3, right: 2 }
        );
        assert_eq!(
            Relation::new(1, 1, [(0, 1)]).unwrap_err(),
            RelationError::OutOfRange(0, 1)
        );
    }

    #[test]
    fn partitions() {
        let p = Partition::from_keys(&["b", "a", "b", "c"]);
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.projection(), &[0, 1, 0, 2]);
        let r = p.to_relation();
        assert!(r.is_equivalence());
        assert_eq!(Partition::from_equivalence(&r), p);
        assert_eq!(r.len(), 6);
    }
}
