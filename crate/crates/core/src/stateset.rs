//! Subsets of a small state universe packed into a single machine word.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported universe.
pub const MAX_UNIVERSE: usize = 64;

/// A subset of `{0, .., universe_size - 1}` with `universe_size <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: u64,
    universe: u8,
}

impl StateSet {
    pub fn empty(universe_size: usize) -> Self {
        assert!(
            universe_size <= MAX_UNIVERSE,
            "universe of {universe_size} states exceeds {MAX_UNIVERSE}"
        );
        StateSet {
            bits: 0,
            universe: universe_size as u8,
        }
    }

    pub fn singleton(universe_size: usize, q: usize) -> Self {
        let mut s = Self::empty(universe_size);
        s.insert(q);
        s
    }

    /// The whole universe.
    pub fn full(universe_size: usize) -> Self {
        let mut s = Self::empty(universe_size);
        s.bits = mask(universe_size);
        s
    }

    /// Builds a set from members, rejecting ids outside the universe.
    pub fn from_members<I: IntoIterator<Item = usize>>(
        universe_size: usize,
        members: I,
    ) -> Result<Self> {
        if universe_size > MAX_UNIVERSE {
            return Err(Error::Unsupported(format!(
                "universe of {universe_size} states exceeds {MAX_UNIVERSE}"
            )));
        }
        let mut s = Self::empty(universe_size);
        for q in members {
            if q >= universe_size {
                return Err(Error::InvalidInput(format!(
                    "state {q} outside universe of size {universe_size}"
                )));
            }
            s.bits |= 1 << q;
        }
        Ok(s)
    }

    /// Builds a set from a raw bit pattern; bits beyond the universe are dropped.
    pub fn from_bits(universe_size: usize, bits: u64) -> Self {
        let mut s = Self::empty(universe_size);
        s.bits = bits & mask(universe_size);
        s
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn universe_size(&self) -> usize {
        self.universe as usize
    }

    pub fn insert(&mut self, q: usize) {
        assert!(q < self.universe_size(), "state {q} outside universe");
        self.bits |= 1 << q;
    }

    pub fn remove(&mut self, q: usize) {
        if q < self.universe_size() {
            self.bits &= !(1 << q);
        }
    }

    pub fn with(mut self, q: usize) -> Self {
        self.insert(q);
        self
    }

    pub fn without(mut self, q: usize) -> Self {
        self.remove(q);
        self
    }

    pub fn contains(&self, q: usize) -> bool {
        q < self.universe_size() && self.bits & (1 << q) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet {
            bits: self.bits | other.bits,
            universe: self.universe.max(other.universe),
        }
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet {
            bits: self.bits & other.bits,
            universe: self.universe.max(other.universe),
        }
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        StateSet {
            bits: self.bits & !other.bits,
            universe: self.universe,
        }
    }

    /// Image of the set under a total map on the universe.
    pub fn image(&self, f: impl Fn(usize) -> usize) -> StateSet {
        let mut out = StateSet::empty(self.universe_size());
        for q in self.iter() {
            out.insert(f(q));
        }
        out
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Members {
        Members { bits: self.bits }
    }

    /// Canonical order: cardinality first, then the numeric bit pattern.
    pub fn canonical_cmp(&self, other: &StateSet) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.bits.cmp(&other.bits))
    }
}

fn mask(universe_size: usize) -> u64 {
    if universe_size >= 64 {
        u64::MAX
    } else {
        (1u64 << universe_size) - 1
    }
}

pub struct Members {
    bits: u64,
}

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let q = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(q)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn members_iterate_in_order() {
        let s = StateSet::from_members(8, [5, 1, 3]).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.to_string(), "{1,3,5}");
        assert_eq!(StateSet::empty(3).to_string(), "{}");
    }

    #[test]
    fn rejects_out_of_universe_members() {
        assert!(StateSet::from_members(3, [3]).is_err());
        assert!(StateSet::from_members(65, [0]).is_err());
    }

    #[test]
    fn full_universe_of_64() {
        let s = StateSet::full(64);
        assert_eq!(s.len(), 64);
        assert!(s.contains(63));
    }

    #[test]
    fn canonical_order_is_popcount_then_bits() {
        let a = StateSet::from_members(4, [3]).unwrap();
        let b = StateSet::from_members(4, [0, 1]).unwrap();
        let c = StateSet::from_members(4, [0, 2]).unwrap();
        assert_eq!(a.canonical_cmp(&b), Ordering::Less);
        assert_eq!(b.canonical_cmp(&c), Ordering::Less);
    }

    proptest! {
        #[test]
        fn subset_agrees_with_members(x in 0u64..256, y in 0u64..256) {
            let a = StateSet::from_bits(8, x);
            let b = StateSet::from_bits(8, y);
            let by_members = a.iter().all(|q| b.contains(q));
            prop_assert_eq!(a.is_subset(&b), by_members);
            prop_assert_eq!(a.union(&b).len() + a.intersection(&b).len(), a.len() + b.len());
        }
    }
}
