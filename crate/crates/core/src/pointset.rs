use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A dense subset of the points `0..n` of one structure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    bits: FixedBitSet,
}

impl PointSet {
    pub fn new(n: usize) -> PointSet {
        PointSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> PointSet {
        let mut s = PointSet::new(n);
        s.bits.insert_range(..);
        s
    }

    /// Panics if an index is `>= n`.
    pub fn from_indices<I: IntoIterator<Item = u32>>(n: usize, it: I) -> PointSet {
        let mut s = PointSet::new(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Size of the ambient ground set.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.bits.contains(i as usize)
    }

    /// Returns `true` if `i` was not already present.
    pub fn insert(&mut self, i: u32) -> bool {
        !self.bits.put(i as usize)
    }

    pub fn remove(&mut self, i: u32) {
        self.bits.set(i as usize, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.ones().map(|i| i as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        PointSet { bits }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        PointSet { bits }
    }

    /// First index, if any.
    pub fn first(&self) -> Option<u32> {
        self.bits.minimum().map(|i| i as u32)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
