use std::fmt;

use crate::error::{Error, Result};
use crate::stateset::StateSet;

/// Family of pairwise ⊆-incomparable subsets, kept in canonical order
/// (cardinality, then bit pattern) so equal antichains compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Antichain {
    universe: u8,
    sets: Vec<StateSet>,
}

impl Antichain {
    /// The ⊆-minimal members of `sets`, deduplicated and sorted.
    pub fn minimal<I: IntoIterator<Item = StateSet>>(
        universe_size: usize,
        sets: I,
    ) -> Result<Self> {
        reduce(universe_size, sets, true)
    }

    /// Parses the `{0,1}{2}` serialization.
    pub fn parse(universe_size: usize, text: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed antichain '{text}'"));
        let mut sets = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let end = body.find('}').ok_or_else(bad)?;
            let members = body[..end]
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            sets.push(StateSet::from_members(universe_size, members)?);
            rest = body[end + 1..].trim_start();
        }
        let chain = Antichain::minimal(universe_size, sets.iter().copied())?;
        if chain.len() != sets.len() {
            return Err(Error::InvalidInput(format!("'{text}' is not an antichain")));
        }
        Ok(chain)
    }

    pub fn universe_size(&self) -> usize {
        self.universe as usize
    }

    pub fn sets(&self) -> &[StateSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: &StateSet) -> bool {
        self.sets.iter().any(|s| s == set)
    }

    /// Label for DOT output: `{0,1|2}`.
    pub fn dot_label(&self) -> String {
        let inner: Vec<String> = self
            .sets
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "∅".to_string()
                } else {
                    s.iter()
                        .map(|q| q.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                }
            })
            .collect();
        format!("{{{}}}", inner.join("|"))
    }
}

/// Keeps the ⊆-minimal members, or the ⊆-maximal ones when `keep_minimal`
/// is false (only used for negative controls).
pub(crate) fn reduce<I: IntoIterator<Item = StateSet>>(
    universe_size: usize,
    sets: I,
    keep_minimal: bool,
) -> Result<Antichain> {
    let mut all: Vec<StateSet> = sets.into_iter().collect();
    if all.is_empty() {
        return Err(Error::InvalidInput(
            "an antichain needs at least one set".into(),
        ));
    }
    all.sort_by(StateSet::canonical_cmp);
    all.dedup();
    if !keep_minimal {
        all.reverse();
    }
    let mut kept: Vec<StateSet> = Vec::with_capacity(all.len());
    for s in all {
        let dominated = if keep_minimal {
            kept.iter().any(|k| k.is_subset(&s))
        } else {
            kept.iter().any(|k| s.is_subset(k))
        };
        if !dominated {
            kept.push(s);
        }
    }
    kept.sort_by(StateSet::canonical_cmp);
    Ok(Antichain {
        universe: universe_size as u8,
        sets: kept,
    })
}

/// `{0,1}{2}` serialization.
impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sets {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(members: &[usize]) -> StateSet {
        StateSet::from_members(4, members.iter().copied()).unwrap()
    }

    #[test]
    fn supersets_are_removed() {
        let a = Antichain::minimal(4, [set(&[0]), set(&[0, 2])]).unwrap();
        assert_eq!(a.to_string(), "{0}");
    }

    #[test]
    fn incomparable_sets_survive() {
        let a = Antichain::minimal(4, [set(&[1, 2]), set(&[3])]).unwrap();
        assert_eq!(a.to_string(), "{3}{1,2}");
    }

    #[test]
    fn chain_collapses_to_its_bottom() {
        let a = Antichain::minimal(4, [set(&[0, 1]), set(&[1]), set(&[1, 2]), set(&[0, 1, 2])])
            .unwrap();
        assert_eq!(a.sets(), &[set(&[1])]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(Antichain::minimal(4, []).is_err());
    }

    #[test]
    fn parse_and_labels() {
        let a = Antichain::parse(4, "{1,2}{3}").unwrap();
        assert_eq!(a.to_string(), "{3}{1,2}");
        assert_eq!(a.dot_label(), "{3|1,2}");
        assert!(Antichain::parse(4, "{1}{1,2}").is_err());
        assert!(Antichain::parse(4, "{1").is_err());
    }

    proptest! {
        #[test]
        fn minimal_members_are_incomparable_and_cover(bits in proptest::collection::vec(0u64..64, 1..10)) {
            let sets: Vec<StateSet> = bits.iter().map(|&b| StateSet::from_bits(6, b)).collect();
            let a = Antichain::minimal(6, sets.iter().copied()).unwrap();
            for (i, x) in a.sets().iter().enumerate() {
                for (j, y) in a.sets().iter().enumerate() {
                    prop_assert!(i == j || !x.is_subset(y));
                }
            }
            // every input set has a member of the antichain below it
            for s in &sets {
                prop_assert!(a.sets().iter().any(|m| m.is_subset(s)));
            }
            // order does not matter
            let mut rev = sets.clone();
            rev.reverse();
            prop_assert_eq!(Antichain::minimal(6, rev).unwrap(), a);
        }
    }
}
