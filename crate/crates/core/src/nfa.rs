//! Nondeterministic automata with ε-moves and the subset construction.

use std::collections::{HashMap, VecDeque};

use crate::dfa::{Alphabet, Dfa, StateId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsNfa {
    alphabet: Alphabet,
    initial: StateId,
    finals: Vec<bool>,
    /// `moves[q * k + a]`, sorted and deduplicated.
    moves: Vec<Vec<StateId>>,
    eps: Vec<Vec<StateId>>,
}

impl EpsNfa {
    /// An NFA with no transitions.
    pub fn new(alphabet: Alphabet, state_count: usize, initial: StateId) -> Result<Self> {
        if state_count == 0 || initial >= state_count {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range 0..{state_count}"
            )));
        }
        let k = alphabet.len();
        Ok(EpsNfa {
            alphabet,
            initial,
            finals: vec![false; state_count],
            moves: vec![Vec::new(); state_count * k],
            eps: vec![Vec::new(); state_count],
        })
    }

    /// The DFA viewed as an NFA without ε-moves.
    pub fn from_dfa(d: &Dfa) -> Self {
        let k = d.alphabet().len();
        let n = d.state_count();
        let mut nfa = EpsNfa::new(d.alphabet().clone(), n, d.initial()).expect("valid DFA");
        for q in 0..n {
            nfa.finals[q] = d.is_final(q);
            for a in 0..k {
                nfa.moves[q * k + a].push(d.step(q, a));
            }
        }
        nfa
    }

    fn check(&self, q: StateId) -> Result<()> {
        if q >= self.state_count() {
            return Err(Error::InvalidAutomaton(format!(
                "state {q} out of range 0..{}",
                self.state_count()
            )));
        }
        Ok(())
    }

    pub fn add_move(&mut self, from: StateId, a: usize, to: StateId) -> Result<()> {
        self.check(from)?;
        self.check(to)?;
        if a >= self.alphabet.len() {
            return Err(Error::InvalidAutomaton(format!(
                "symbol index {a} out of range"
            )));
        }
        let cell = &mut self.moves[from * self.alphabet.len() + a];
        if let Err(pos) = cell.binary_search(&to) {
            cell.insert(pos, to);
        }
        Ok(())
    }

    pub fn add_eps(&mut self, from: StateId, to: StateId) -> Result<()> {
        self.check(from)?;
        self.check(to)?;
        let cell = &mut self.eps[from];
        if let Err(pos) = cell.binary_search(&to) {
            cell.insert(pos, to);
        }
        Ok(())
    }

    pub fn set_final(&mut self, q: StateId, is_final: bool) -> Result<()> {
        self.check(q)?;
        self.finals[q] = is_final;
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| f.then_some(q))
    }

    pub fn moves(&self, q: StateId, a: usize) -> &[StateId] {
        &self.moves[q * self.alphabet.len() + a]
    }

    pub fn eps(&self, q: StateId) -> &[StateId] {
        &self.eps[q]
    }

    pub fn eps_count(&self) -> usize {
        self.eps.iter().map(Vec::len).sum()
    }

    /// ε-closure of a bit-block subset, in place.
    fn close(&self, set: &mut BlockSet) {
        let mut stack: Vec<StateId> = set.iter().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    /// Direct simulation, independent of [`determinize`].
    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        let mut cur = BlockSet::new(self.state_count());
        cur.insert(self.initial);
        self.close(&mut cur);
        for &a in word {
            let mut next = BlockSet::new(self.state_count());
            for q in cur.iter() {
                for &t in self.moves(q, a) {
                    next.insert(t);
                }
            }
            self.close(&mut next);
            cur = next;
        }
        let accepted = cur.iter().any(|q| self.finals[q]);
        accepted
    }
}

/// Bit-block subset of an arbitrary-size state universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BlockSet {
    blocks: Vec<u64>,
}

impl BlockSet {
    fn new(universe: usize) -> Self {
        BlockSet {
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    fn insert(&mut self, q: usize) -> bool {
        let (b, bit) = (q / 64, 1u64 << (q % 64));
        let fresh = self.blocks[b] & bit == 0;
        self.blocks[b] |= bit;
        fresh
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut bits = block;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * 64 + q)
            })
        })
    }
}

/// Output of the subset construction.
#[derive(Clone, Debug)]
pub struct Determinized {
    pub dfa: Dfa,
    /// `subsets[q]` lists the NFA states (ascending) making up DFA state `q`.
    pub subsets: Vec<Vec<StateId>>,
}

/// Subset construction with ε-closure, exploring reachable subsets in BFS
/// order. The empty subset appears only if it is reachable.
pub fn determinize(nfa: &EpsNfa) -> Determinized {
    determinize_capped(nfa, usize::MAX).expect("uncapped determinization")
}

/// As [`determinize`], aborting once more than `cap` subsets are discovered.
pub fn determinize_capped(nfa: &EpsNfa, cap: usize) -> Result<Determinized> {
    let n = nfa.state_count();
    let k = nfa.alphabet.len();
    let mut start = BlockSet::new(n);
    start.insert(nfa.initial);
    nfa.close(&mut start);

    let mut ids: HashMap<BlockSet, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        for a in 0..k {
            let mut next = BlockSet::new(n);
            for q in sets[id].iter() {
                for &t in nfa.moves(q, a) {
                    next.insert(t);
                }
            }
            nfa.close(&mut next);
            let target = match ids.get(&next) {
                Some(&t) => t,
                None => {
                    let t = sets.len();
                    if t >= cap {
                        return Err(Error::StateCapExceeded {
                            cap,
                            frontier: queue.len() + 1,
                        });
                    }
                    ids.insert(next.clone(), t);
                    sets.push(next);
                    queue.push_back(t);
                    t
                }
            };
            // rows are filled in BFS order, so row `id` starts at id * k
            debug_assert_eq!(delta.len(), id * k + a);
            delta.push(target);
        }
    }
    let finals = sets
        .iter()
        .map(|s| s.iter().any(|q| nfa.finals[q]))
        .collect();
    let dfa = Dfa::new(nfa.alphabet.clone(), 0, finals, delta)?;
    Ok(Determinized {
        dfa,
        subsets: sets.iter().map(|s| s.iter().collect()).collect(),
    })
}
