//! Complete deterministic automata.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Index of a state.
pub type StateId = usize;

/// Ordered list of distinct, nonempty symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

/// Symbol reserved by the text format for ε-moves.
pub const EPSILON_TOKEN: &str = "eps";

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAutomaton("alphabet must not be empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) || s.contains('#') {
                return Err(Error::InvalidAutomaton(format!("bad symbol name {s:?}")));
            }
            if s == EPSILON_TOKEN {
                return Err(Error::InvalidAutomaton(format!(
                    "'{EPSILON_TOKEN}' is reserved for epsilon moves"
                )));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAutomaton(format!("duplicate symbol '{s}'")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet `a`, `b`, ... of the given size.
    pub fn letters(size: usize) -> Self {
        assert!((1..=26).contains(&size));
        Alphabet {
            symbols: (0..size)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Splits a word into symbol indices. Single-character alphabets accept
    /// a plain string; otherwise symbols are separated by whitespace.
    pub fn parse_word(&self, word: &str) -> Result<Vec<usize>> {
        if self.symbols.iter().all(|s| s.chars().count() == 1)
            && !word.contains(char::is_whitespace)
        {
            word.chars()
                .map(|c| self.index_of(c.encode_utf8(&mut [0; 4])))
                .collect()
        } else {
            word.split_whitespace().map(|s| self.index_of(s)).collect()
        }
    }

    pub fn render_word(&self, word: &[usize]) -> String {
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&i| self.symbol(i)).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// A complete DFA. Transitions are stored row-major: `delta[q * k + a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: StateId,
    finals: Vec<bool>,
    delta: Vec<StateId>,
}

impl Dfa {
    /// Builds a DFA from a row-major transition table.
    pub fn new(
        alphabet: Alphabet,
        initial: StateId,
        finals: Vec<bool>,
        delta: Vec<StateId>,
    ) -> Result<Self> {
        let n = finals.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton(
                "a DFA needs at least one state".into(),
            ));
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range 0..{n}"
            )));
        }
        if delta.len() != n * alphabet.len() {
            return Err(Error::InvalidAutomaton(format!(
                "transition table has {} cells, expected {}",
                delta.len(),
                n * alphabet.len()
            )));
        }
        if let Some(&t) = delta.iter().find(|&&t| t >= n) {
            return Err(Error::InvalidAutomaton(format!(
                "transition target {t} out of range 0..{n}"
            )));
        }
        Ok(Dfa {
            alphabet,
            initial,
            finals,
            delta,
        })
    }

    /// Builds a DFA from a closure giving each transition.
    pub fn from_fn(
        alphabet: Alphabet,
        state_count: usize,
        initial: StateId,
        finals: &[StateId],
        step: impl Fn(StateId, usize) -> StateId,
    ) -> Result<Self> {
        let k = alphabet.len();
        let mut delta = Vec::with_capacity(state_count * k);
        for q in 0..state_count {
            for a in 0..k {
                delta.push(step(q, a));
            }
        }
        let mut fin = vec![false; state_count];
        for &f in finals {
            if f >= state_count {
                return Err(Error::InvalidAutomaton(format!(
                    "final state {f} out of range"
                )));
            }
            fin[f] = true;
        }
        Dfa::new(alphabet, initial, fin, delta)
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

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn table(&self) -> &[StateId] {
        &self.delta
    }

    /// `q.a` for a symbol index.
    #[inline]
    pub fn step(&self, q: StateId, a: usize) -> StateId {
        self.delta[q * self.alphabet.len() + a]
    }

    /// State reached from `from` on a word of symbol indices.
    pub fn walk(&self, from: StateId, word: &[usize]) -> StateId {
        word.iter().fold(from, |q, &a| self.step(q, a))
    }

    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        self.finals[self.walk(self.initial, word)]
    }

    /// Membership test for a word given as symbol names.
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Result<bool> {
        let indices = word
            .iter()
            .map(|s| self.alphabet.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.accepts_indices(&indices))
    }

    pub fn accepts_empty(&self) -> bool {
        self.finals[self.initial]
    }

    /// Swaps final and non-final states.
    pub fn complement(&self) -> Dfa {
        Dfa {
            finals: self.finals.iter().map(|f| !f).collect(),
            ..self.clone()
        }
    }

    /// Same language with ε forced in or out.
    ///
    /// When the initial state already has the requested status the automaton
    /// is returned unchanged; otherwise a fresh initial state copying the old
    /// initial row is added.
    pub fn with_epsilon(&self, include: bool) -> Dfa {
        if self.accepts_empty() == include {
            return self.clone();
        }
        let k = self.alphabet.len();
        let fresh = self.state_count();
        let mut delta = self.delta.clone();
        let row = self.delta[self.initial * k..(self.initial + 1) * k].to_vec();
        delta.extend(row);
        let mut finals = self.finals.clone();
        finals.push(include);
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: fresh,
            finals,
            delta,
        }
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for a in 0..self.alphabet.len() {
                let t = self.step(q, a);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Re-expresses the automaton over `target`, which must be a permutation
    /// of this alphabet.
    pub fn reorder_alphabet(&self, target: &Alphabet) -> Result<Dfa> {
        if target.len() != self.alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet.symbols(),
                target.symbols()
            )));
        }
        let map = target
            .symbols()
            .iter()
            .map(|s| self.alphabet.index_of(s))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| {
                Error::AlphabetMismatch(format!(
                    "{:?} vs {:?}",
                    self.alphabet.symbols(),
                    target.symbols()
                ))
            })?;
        Dfa::from_fn(
            target.clone(),
            self.state_count(),
            self.initial,
            &self.finals().collect::<Vec<_>>(),
            |q, a| self.step(q, map[a]),
        )
    }

    /// Restriction to a sub-alphabet (symbols matched by name).
    pub fn restrict(&self, symbols: &Alphabet) -> Result<Dfa> {
        let map = symbols
            .symbols()
            .iter()
            .map(|s| self.alphabet.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        Dfa::from_fn(
            symbols.clone(),
            self.state_count(),
            self.initial,
            &self.finals().collect::<Vec<_>>(),
            |q, a| self.step(q, map[a]),
        )
    }
}

/// Language equality via emptiness of the symmetric-difference product.
pub fn equivalent(d1: &Dfa, d2: &Dfa) -> Result<bool> {
    Ok(distinguishing_word(d1, d2)?.is_none())
}

/// A shortest word accepted by exactly one of the two automata, as symbol
/// indices over `d1`'s alphabet.
pub fn distinguishing_word(d1: &Dfa, d2: &Dfa) -> Result<Option<Vec<usize>>> {
    let k = d1.alphabet.len();
    if k != d2.alphabet.len() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            d1.alphabet.symbols(),
            d2.alphabet.symbols()
        )));
    }
    let map: Vec<usize> = d1
        .alphabet
        .symbols()
        .iter()
        .map(|s| d2.alphabet.index_of(s))
        .collect::<Result<_>>()
        .map_err(|_| {
            Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                d1.alphabet.symbols(),
                d2.alphabet.symbols()
            ))
        })?;

    type Pair = (StateId, StateId);
    let start = (d1.initial, d2.initial);
    // predecessor pair and symbol on a shortest path from `start`
    let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(pair @ (p, q)) = queue.pop_front() {
        if d1.is_final(p) != d2.is_final(q) {
            let mut word = Vec::new();
            let mut cur = pair;
            while let Some(Some((prev, a))) = parent.get(&cur) {
                word.push(*a);
                cur = *prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for (a, &b) in map.iter().enumerate() {
            let next = (d1.step(p, a), d2.step(q, b));
            if let Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((pair, a)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Every word over `k` symbols of length at most `max_len`, shortest first.
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max_len).flat_map(move |len| {
        let total = k.checked_pow(len as u32).expect("word space overflow");
        (0..total).map(move |mut index| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = index % k;
                index /= k;
            }
            w
        })
    })
}
