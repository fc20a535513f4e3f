//! Witness automata for the lower bound, and the words that drive them.
//!
//! All three families share states `0..n`, initial state 0 and finals
//! `{0, 1}`. Letters `a` and `b` rotate the cycle `2 → 3 → … → n-2 → 2`;
//! `c` and `d` move between 0 and `n-1`; `e`, `f` are a transposition and a
//! contraction on the cycle; `g` maps 0 to 2 and 3 to 0.
//!
//! | letter | 0   | 1   | 2 ≤ i ≤ n-2                 | n-1 |
//! |--------|-----|-----|-----------------------------|-----|
//! | a      | 1   | 2   | i+1, n-2 → 2                | n-1 |
//! | b      | 0   | 2   | i+1, n-2 → 2                | n-1 |
//! | c      | n-1 | n-1 | i                           | n-1 |
//! | d      | 1   | 1   | i                           | 0   |
//! | e      | 0   | 1   | 2 ↔ 3, others fixed         | n-1 |
//! | f      | 0   | 1   | 2 → 3, others fixed         | n-1 |
//! | g      | 2   | 2   | 2 → 2, 3 → 0, others fixed  | n-1 |

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::dfa::{Alphabet, Dfa};
use crate::error::{Error, Result};
use crate::pipeline::Antichain;
use crate::stateset::StateSet;

/// Smallest size for which the witnesses are defined.
pub const MIN_WITNESS_SIZE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// Alphabet `{a, b, c, d}`: many reachable pruned states.
    Reach,
    /// Alphabet `{b, e, f, g}`: many distinguishable pruned states.
    Dist,
    /// Alphabet `{a, ..., g}`: both at once.
    Combined,
}

impl WitnessKind {
    pub fn letters(self) -> &'static [char] {
        match self {
            WitnessKind::Reach => &['a', 'b', 'c', 'd'],
            WitnessKind::Dist => &['b', 'e', 'f', 'g'],
            WitnessKind::Combined => &['a', 'b', 'c', 'd', 'e', 'f', 'g'],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::Reach => "reach",
            WitnessKind::Dist => "dist",
            WitnessKind::Combined => "combined",
        }
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reach" => Ok(WitnessKind::Reach),
            "dist" => Ok(WitnessKind::Dist),
            "combined" => Ok(WitnessKind::Combined),
            other => Err(Error::InvalidInput(format!(
                "unknown witness family '{other}' (expected reach, dist or combined)"
            ))),
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < MIN_WITNESS_SIZE {
        return Err(Error::InvalidInput(format!(
            "witness automata need n >= {MIN_WITNESS_SIZE}, got {n}"
        )));
    }
    if n > crate::stateset::MAX_UNIVERSE {
        return Err(Error::Unsupported(format!("witness size {n} exceeds 64")));
    }
    Ok(())
}

/// One step along the cycle on `{2, ..., n-2}`.
fn rotate(q: usize, n: usize) -> usize {
    if q == n - 2 {
        2
    } else {
        q + 1
    }
}

fn transition(letter: char, q: usize, n: usize) -> usize {
    let last = n - 1;
    match letter {
        'a' | 'b' => match q {
            0 if letter == 'a' => 1,
            0 => 0,
            1 => 2,
            q if q == last => last,
            q => rotate(q, n),
        },
        'c' => match q {
            0 | 1 => last,
            q => q,
        },
        'd' => match q {
            0 | 1 => 1,
            q if q == last => 0,
            q => q,
        },
        'e' => match q {
            2 => 3,
            3 => 2,
            q => q,
        },
        'f' => match q {
            2 => 3,
            q => q,
        },
        'g' => match q {
            0..=2 => 2,
            3 => 0,
            q => q,
        },
        _ => unreachable!("no witness letter {letter}"),
    }
}

pub fn witness(kind: WitnessKind, n: usize) -> Result<Dfa> {
    check_size(n)?;
    let letters = kind.letters();
    let alphabet = Alphabet::new(letters.iter().map(char::to_string))?;
    Dfa::from_fn(alphabet, n, 0, &[0, 1], |q, a| transition(letters[a], q, n))
}

/// `q ⊖ i`: the cycle state that reaches `q` after `i` letters from `{a, b}`.
pub fn shift(q: usize, i: i64, n: usize) -> Result<usize> {
    check_size(n)?;
    if !(2..=n - 2).contains(&q) {
        return Err(Error::InvalidInput(format!(
            "state {q} is not on the cycle 2..={}",
            n - 2
        )));
    }
    let len = (n - 3) as i64;
    Ok(((q as i64 - i - 2).rem_euclid(len) + 2) as usize)
}

fn shift_set(s: &StateSet, i: i64, n: usize) -> StateSet {
    s.image(|q| shift(q, i, n).expect("cycle member"))
}

/// A state `{{0, q_1} ∪ S_1, ..., {0, q_k} ∪ S_k}` of the reachable family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyState {
    pub q: Vec<usize>,
    pub chain: Vec<StateSet>,
}

impl FamilyState {
    pub fn validate(&self, n: usize) -> Result<()> {
        check_size(n)?;
        let bad = |why: &str| Err(Error::InvalidInput(format!("invalid family state: {why}")));
        let k = self.q.len();
        if k == 0 || self.chain.len() != k {
            return bad("needs as many chain sets as distinguished states, at least one");
        }
        let cycle = cycle_states(n);
        if self.q.iter().any(|q| !cycle.contains(*q)) {
            return bad("distinguished states must lie in 2..=n-2");
        }
        if self
            .chain
            .iter()
            .any(|s| !s.is_subset(&cycle) || s.universe_size() != n)
        {
            return bad("chain sets must lie in 2..=n-2");
        }
        if (0..k).any(|i| (0..i).any(|j| self.q[i] == self.q[j])) {
            return bad("distinguished states must be distinct");
        }
        if !self.chain.windows(2).all(|w| w[0].is_subset(&w[1])) {
            return bad("chain sets must be nested");
        }
        if self.q.iter().any(|&q| self.chain[k - 1].contains(q)) {
            return bad("distinguished states must avoid the largest chain set");
        }
        Ok(())
    }

    pub fn antichain(&self, n: usize) -> Antichain {
        let sets = self
            .q
            .iter()
            .zip(&self.chain)
            .map(|(&q, s)| s.with(0).with(q));
        Antichain::minimal(n, sets).expect("nonempty family state")
    }
}

/// The cycle states `{2, ..., n-2}`.
pub fn cycle_states(n: usize) -> StateSet {
    StateSet::from_members(n, 2..=n - 2).expect("within universe")
}

/// All family states, one per distinct antichain, in enumeration order:
/// by `k`, then by the ordered tuple of distinguished states, then by the
/// level assignment of the remaining cycle states.
///
/// With `restricted`, only the product subfamily `q_i = i + 1`
/// (`i = 1..=k`, `k = max(1, ⌈n/2⌉ - 3)`) with chains inside
/// `{⌈n/2⌉ - 1, ..., n - 2}` minus the distinguished states.
pub fn family_states(n: usize, restricted: bool) -> Result<Vec<FamilyState>> {
    check_size(n)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |fs: FamilyState| {
        if seen.insert(fs.antichain(n)) {
            out.push(fs);
        }
    };
    if restricted {
        let m = n.div_ceil(2);
        let k = m.saturating_sub(3).max(1);
        let q: Vec<usize> = (2..k + 2).collect();
        let low = (m - 1).max(k + 2);
        let free: Vec<usize> = (low..=n - 2).collect();
        for_each_level_assignment(&free, k, |levels| {
            push(FamilyState {
                q: q.clone(),
                chain: chain_from_levels(n, &free, levels, k),
            })
        });
    } else {
        let cycle: Vec<usize> = (2..=n - 2).collect();
        for k in 1..=cycle.len() {
            for_each_arrangement(&cycle, k, |q| {
                let free: Vec<usize> = cycle.iter().copied().filter(|c| !q.contains(c)).collect();
                for_each_level_assignment(&free, k, |levels| {
                    push(FamilyState {
                        q: q.to_vec(),
                        chain: chain_from_levels(n, &free, levels, k),
                    })
                });
            });
        }
    }
    Ok(out)
}

/// `S_i = { free[j] : levels[j] <= i }`, levels in `1..=k+1`.
fn chain_from_levels(n: usize, free: &[usize], levels: &[usize], k: usize) -> Vec<StateSet> {
    (1..=k)
        .map(|i| {
            StateSet::from_members(
                n,
                free.iter()
                    .zip(levels)
                    .filter(|&(_, &l)| l <= i)
                    .map(|(&s, _)| s),
            )
            .expect("within universe")
        })
        .collect()
}

/// Every map `free → {1, ..., k+1}`, starting from "all outside the chain".
fn for_each_level_assignment(free: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    let mut levels = vec![k + 1; free.len()];
    loop {
        f(&levels);
        let mut pos = 0;
        loop {
            if pos == levels.len() {
                return;
            }
            if levels[pos] > 1 {
                levels[pos] -= 1;
                break;
            }
            levels[pos] = k + 1;
            pos += 1;
        }
    }
}

fn for_each_arrangement(items: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    fn go(
        items: &[usize],
        k: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                go(items, k, used, cur, f);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(
        items,
        k,
        &mut vec![false; items.len()],
        &mut Vec::new(),
        &mut f,
    );
}

/// Word over `{a, b}` taking the pruned state `{{0}}` to `{{0} ∪ s}`,
/// for `s ⊆ {1, ..., n-2}`: the subset `{i_1 < ... < i_k}` is reached from
/// `{i_2 - i_1, ..., i_k - i_1}` on `a b^(i_1 - 1)`.
fn subset_word(s: &StateSet) -> String {
    let Some(first) = s.iter().next() else {
        return String::new();
    };
    let rest = StateSet::from_members(s.universe_size(), s.iter().skip(1).map(|i| i - first))
        .expect("within universe");
    let mut w = subset_word(&rest);
    w.push('a');
    w.extend(std::iter::repeat_n('b', first - 1));
    w
}

/// Word over `{a, b, c, d}` taking `{{0}}` to the family state, built by
/// induction on `k`.
pub fn reach_string(n: usize, fs: &FamilyState) -> Result<String> {
    fs.validate(n)?;
    let w = subset_word(&fs.chain[0]);
    let len = w.chars().count() as i64;
    let target = shift(fs.q[0], len, n)?;
    // 1 reaches target on b^ell
    let ell = target - 1;
    let mut out = if fs.q.len() == 1 {
        "a".to_string()
    } else {
        let back = len + ell as i64;
        let inner = FamilyState {
            q: fs.q[1..]
                .iter()
                .map(|&q| shift(q, back, n))
                .collect::<Result<_>>()?,
            chain: fs.chain[1..]
                .iter()
                .map(|s| shift_set(s, back, n))
                .collect(),
        };
        let mut prefix = reach_string(n, &inner)?;
        prefix.push_str("cd");
        prefix
    };
    out.extend(std::iter::repeat_n('b', ell));
    out.push_str(&w);
    Ok(out)
}

/// Breadth-first search tree over the transformations of the cycle states
/// generated by `b`, `e` and `f`.
#[derive(Clone, Debug)]
pub struct TransformationMonoid {
    n: usize,
    /// Shortest word for each reachable transformation (images of 2..=n-2,
    /// shifted down by 2).
    words: HashMap<Vec<u8>, String>,
}

impl TransformationMonoid {
    pub fn new(n: usize) -> Result<Self> {
        check_size(n)?;
        let m = n - 3;
        if m > 8 {
            return Err(Error::Unsupported(format!(
                "transformation search needs n <= 11, got {n}"
            )));
        }
        let generators: Vec<(char, Vec<u8>)> = ['b', 'e', 'f']
            .iter()
            .map(|&c| {
                (
                    c,
                    (2..=n - 2)
                        .map(|q| (transition(c, q, n) - 2) as u8)
                        .collect(),
                )
            })
            .collect();
        let identity: Vec<u8> = (0..m as u8).collect();
        let mut words = HashMap::from([(identity.clone(), String::new())]);
        let mut queue = VecDeque::from([identity]);
        while let Some(t) = queue.pop_front() {
            let word = words[&t].clone();
            for (c, g) in &generators {
                // read t's word, then c
                let next: Vec<u8> = t.iter().map(|&x| g[x as usize]).collect();
                if !words.contains_key(&next) {
                    let mut w = word.clone();
                    w.push(*c);
                    words.insert(next.clone(), w);
                    queue.push_back(next);
                }
            }
        }
        Ok(TransformationMonoid { n, words })
    }

    /// Number of distinct transformations reached.
    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// Shortest word inducing `target`, where `target[i]` is the image of
    /// cycle state `i + 2`.
    pub fn word_for(&self, target: &[usize]) -> Result<String> {
        let n = self.n;
        if target.len() != n - 3 || target.iter().any(|t| !(2..=n - 2).contains(t)) {
            return Err(Error::InvalidInput(format!(
                "target must map each of 2..={} into 2..={}",
                n - 2,
                n - 2
            )));
        }
        let key: Vec<u8> = target.iter().map(|&t| (t - 2) as u8).collect();
        self.words
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::Internal(format!("transformation {target:?} not generated")))
    }
}

/// Shortest word over `{b, e, f}` acting on the cycle states as `target`.
pub fn transformation_word(n: usize, target: &[usize]) -> Result<String> {
    TransformationMonoid::new(n)?.word_for(target)
}

/// `w_T · g`, where `w_T` sends `t` to 2 and the rest of the cycle to 3.
pub fn separating_string(n: usize, t: &StateSet) -> Result<String> {
    separating_string_with(&TransformationMonoid::new(n)?, t)
}

pub fn separating_string_with(monoid: &TransformationMonoid, t: &StateSet) -> Result<String> {
    let n = monoid.n;
    if !t.is_subset(&cycle_states(n)) {
        return Err(Error::InvalidInput(format!(
            "{t} is not a subset of the cycle 2..={}",
            n - 2
        )));
    }
    let target: Vec<usize> = (2..=n - 2)
        .map(|q| if t.contains(q) { 2 } else { 3 })
        .collect();
    let mut w = monoid.word_for(&target)?;
    w.push('g');
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{accepts_from, initial_antichain, pruned_step};

    fn set(n: usize, members: &[usize]) -> StateSet {
        StateSet::from_members(n, members.iter().copied()).unwrap()
    }

    fn run_pruned(d: &Dfa, word: &str) -> Antichain {
        let mut s = initial_antichain(d);
        for a in d.alphabet().parse_word(word).unwrap() {
            s = pruned_step(&s, a, d).unwrap().0;
        }
        s
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(4, 0, 7).unwrap(), 4);
        assert_eq!(shift(2, 1, 7).unwrap(), 5);
        assert_eq!(shift(5, 3, 7).unwrap(), 2);
        assert!(shift(1, 0, 7).is_err());
        assert!(shift(6, 0, 7).is_err());
    }

    #[test]
    fn shift_inverts_the_cycle() {
        for n in 5..9 {
            let d = witness(WitnessKind::Reach, n).unwrap();
            for q in 2..=n - 2 {
                for i in 0..2 * n as i64 {
                    let p = shift(q, i, n).unwrap();
                    assert_eq!(d.walk(p, &vec![0; i as usize]), q);
                    assert_eq!(d.walk(p, &vec![1; i as usize]), q);
                    assert_eq!(
                        shift(shift(q, i, n).unwrap(), 3, n).unwrap(),
                        shift(q, i + 3, n).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn reach_table_at_five() {
        let d = witness(WitnessKind::Reach, 5).unwrap();
        let row: Vec<usize> = (0..4).map(|a| d.step(0, a)).collect();
        assert_eq!(row, vec![1, 0, 4, 1]);
        assert_eq!(d.finals().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(d.step(4, 3), 0);
    }

    #[test]
    fn dist_g_row() {
        let d = witness(WitnessKind::Dist, 5).unwrap();
        let g = d.alphabet().index_of("g").unwrap();
        assert_eq!(d.step(0, g), 2);
        assert_eq!(d.step(3, g), 0);
        assert_eq!(d.step(2, g), 2);
    }

    #[test]
    fn combined_restricts_to_both_parts() {
        for n in 5..8 {
            let c = witness(WitnessKind::Combined, n).unwrap();
            let reach = witness(WitnessKind::Reach, n).unwrap();
            let dist = witness(WitnessKind::Dist, n).unwrap();
            assert_eq!(c.restrict(reach.alphabet()).unwrap(), reach);
            assert_eq!(c.restrict(dist.alphabet()).unwrap(), dist);
        }
    }

    #[test]
    fn table_properties() {
        for n in 5..10 {
            let d = witness(WitnessKind::Combined, n).unwrap();
            let cycle = cycle_states(n);
            for letter in ["b", "e", "f"] {
                let x = d.alphabet().index_of(letter).unwrap();
                assert_eq!(d.step(0, x), 0);
                for q in cycle.iter() {
                    assert!(cycle.contains(d.step(q, x)));
                }
            }
            for q in cycle.iter() {
                assert_eq!(d.step(q, 0), d.step(q, 1));
            }
        }
    }

    #[test]
    fn small_sizes_are_rejected() {
        assert!(witness(WitnessKind::Dist, 4).is_err());
        assert!(family_states(4, false).is_err());
    }

    #[test]
    fn family_at_five() {
        let fam = family_states(5, false).unwrap();
        let labels: Vec<String> = fam.iter().map(|f| f.antichain(5).to_string()).collect();
        assert_eq!(labels, vec!["{0,2}", "{0,2,3}", "{0,3}", "{0,2}{0,3}"]);
    }

    #[test]
    fn family_counts() {
        assert_eq!(family_states(6, false).unwrap().len(), 17);
        assert_eq!(family_states(7, false).unwrap().len(), 94);
        assert_eq!(family_states(8, true).unwrap().len(), 16);
    }

    #[test]
    fn reach_base_case() {
        let d = witness(WitnessKind::Combined, 5).unwrap();
        let fs = FamilyState {
            q: vec![2],
            chain: vec![StateSet::empty(5)],
        };
        let w = reach_string(5, &fs).unwrap();
        assert!(
            w.starts_with('a') && w[1..].chars().all(|c| c == 'b'),
            "{w}"
        );
        assert_eq!(run_pruned(&d, &w), fs.antichain(5));
    }

    #[test]
    fn reach_rejects_non_family_states() {
        let bad = FamilyState {
            q: vec![],
            chain: vec![],
        };
        assert!(reach_string(5, &bad).is_err());
        let overlapping = FamilyState {
            q: vec![2],
            chain: vec![set(6, &[2, 3])],
        };
        assert!(reach_string(6, &overlapping).is_err());
    }

    #[test]
    fn reach_two_sets_at_six() {
        let d = witness(WitnessKind::Combined, 6).unwrap();
        let fs = FamilyState {
            q: vec![2, 3],
            chain: vec![set(6, &[4]), set(6, &[4])],
        };
        let w = reach_string(6, &fs).unwrap();
        assert_eq!(run_pruned(&d, &w), fs.antichain(6));
    }

    #[test]
    fn transformation_words() {
        assert_eq!(transformation_word(6, &[2, 3, 4]).unwrap(), "");
        assert_eq!(transformation_word(6, &[3, 2, 4]).unwrap(), "e");
        let d = witness(WitnessKind::Dist, 6).unwrap();
        let w = transformation_word(6, &[2, 2, 2]).unwrap();
        let idx = d.alphabet().parse_word(&w).unwrap();
        for q in 2..=4 {
            assert_eq!(d.walk(q, &idx), 2);
        }
        assert_eq!(d.walk(0, &idx), 0);
        assert!(transformation_word(6, &[2, 5, 2]).is_err());
    }

    #[test]
    fn generators_give_the_full_monoid() {
        for n in 5..=8 {
            let m = n - 3;
            assert_eq!(
                TransformationMonoid::new(n).unwrap().size(),
                m.pow(m as u32)
            );
        }
    }

    #[test]
    fn separating_strings() {
        let n = 6;
        let d = witness(WitnessKind::Combined, n).unwrap();
        let from = |members: &[usize]| Antichain::minimal(n, [set(n, members)]).unwrap();
        let w = separating_string(n, &set(n, &[2])).unwrap();
        let idx = d.alphabet().parse_word(&w).unwrap();
        assert!(!accepts_from(&d, &from(&[0, 3]), &idx).unwrap());
        assert!(accepts_from(&d, &from(&[0, 2]), &idx).unwrap());

        // T = everything: accepted from every {0} ∪ T'
        let all = separating_string(n, &cycle_states(n)).unwrap();
        let idx = d.alphabet().parse_word(&all).unwrap();
        for bits in 0u64..8 {
            let t = StateSet::from_bits(n, bits << 2).with(0);
            assert!(accepts_from(&d, &Antichain::minimal(n, [t]).unwrap(), &idx).unwrap());
        }

        // T = ∅: only from {0}
        let none = separating_string(n, &StateSet::empty(n)).unwrap();
        let idx = d.alphabet().parse_word(&none).unwrap();
        for bits in 0u64..8 {
            let t = StateSet::from_bits(n, bits << 2).with(0);
            let accepted = accepts_from(&d, &Antichain::minimal(n, [t]).unwrap(), &idx).unwrap();
            assert_eq!(accepted, bits == 0);
        }
        assert!(separating_string(n, &set(n, &[1])).is_err());
    }
}
