use std::fmt;

use serde::{Serialize, Serializer};

/// A subset of the affine Dynkin node set `{0, ..., g}`, stored as a bitmask.
///
/// Used both for generator supports and for parahoric types.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(u16);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    /// All nodes `0..=g`.
    pub fn full(g: usize) -> Self {
        IndexSet(((1u32 << (g + 1)) - 1) as u16)
    }

    /// Finite nodes `1..=g`.
    pub fn finite(g: usize) -> Self {
        Self::full(g).without(0)
    }

    pub fn from_bits(bits: u16) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 16 && self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        assert!(i < 16, "node index {i} does not fit");
        IndexSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        if i >= 16 {
            return self;
        }
        IndexSet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement inside `{0, ..., g}`.
    pub fn complement(self, g: usize) -> Self {
        IndexSet(!self.0 & Self::full(g).0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |&i| self.contains(i))
    }

    /// Every subset of `{0, ..., g}` in increasing bitmask order.
    pub fn all_subsets(g: usize) -> impl Iterator<Item = IndexSet> {
        (0..(1u32 << (g + 1))).map(|b| IndexSet(b as u16))
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(IndexSet::EMPTY, IndexSet::with)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.iter().collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_and_iteration() {
        let j: IndexSet = [0, 2].into_iter().collect();
        assert_eq!(j.complement(2).iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(IndexSet::full(3).len(), 4);
        assert_eq!(IndexSet::finite(3).iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(j.to_string(), "{0,2}");
        assert_eq!(IndexSet::all_subsets(2).count(), 8);
    }
}
