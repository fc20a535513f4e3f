//! Brute-force references: the unpruned double subset construction and
//! exhaustive search over all small DFAs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dfa::{Alphabet, Dfa};
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::nfa::{determinize, determinize_capped};
use crate::pipeline::{n3_nfa, plus_nfa, pruned_determinize};
use crate::stateset::StateSet;

/// PRNG used for every random corpus; seeded with `seed_from_u64`.
pub type CorpusRng = ChaCha8Rng;

pub const PRNG_NAME: &str = "ChaCha8 (rand_chacha, seed_from_u64)";

pub fn seeded_rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform complete DFA over `a, b, ...` with initial state 0; each state
/// is final with probability 1/2.
pub fn random_dfa(n: usize, k: usize, rng: &mut impl Rng) -> Dfa {
    let delta: Vec<usize> = (0..n * k).map(|_| rng.gen_range(0..n)).collect();
    let finals: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(Alphabet::letters(k), 0, finals, delta).expect("random table is well formed")
}

/// Minimal DFA for `L^{+c+}` by plain subset construction at both levels.
pub fn naive_pipeline(d: &Dfa, cap: usize) -> Result<Dfa> {
    let det = determinize(&plus_nfa(d));
    let labels = det
        .subsets
        .iter()
        .map(|s| StateSet::from_members(d.state_count(), s.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let d2 = det.dfa.complement();
    let n3 = n3_nfa(&d2, &labels, d.initial())?;
    let d3 = determinize_capped(&n3, cap)?;
    Ok(minimize(&d3.dfa))
}

/// Space of all complete DFAs with `n` states over `k` letters, initial 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub k: usize,
    pub jobs: usize,
    /// `(offset, stride)`: only indices `offset + i * stride`.
    pub slice: Option<(u128, u128)>,
    /// Pruned-state cap for each pipeline run.
    pub state_cap: usize,
}

impl SearchSpec {
    pub fn new(n: usize, k: usize) -> Self {
        SearchSpec {
            n,
            k,
            jobs: 1,
            slice: None,
            state_cap: crate::pipeline::DEFAULT_STATE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 || self.k > 26 {
            return Err(Error::InvalidInput(format!(
                "need n >= 1 and 1 <= k <= 26, got n={} k={}",
                self.n, self.k
            )));
        }
        let bits = (self.n * self.k) as f64 * (self.n as f64).log2() + self.n as f64;
        if bits > 127.0 {
            return Err(Error::Unsupported(format!(
                "enumeration index needs {bits:.0} bits; at most 127 are supported"
            )));
        }
        if let Some((offset, stride)) = self.slice {
            if stride == 0 || offset >= stride {
                return Err(Error::InvalidInput(format!(
                    "slice offset {offset} must be below a positive stride {stride}"
                )));
            }
        }
        if self.jobs == 0 {
            return Err(Error::InvalidInput("jobs must be positive".into()));
        }
        Ok(())
    }

    /// Size of the whole space: `n^(n·k) · 2^n`.
    pub fn total(&self) -> u128 {
        (self.n as u128).pow((self.n * self.k) as u32) << self.n
    }
}

/// The DFA at position `index` of the enumeration: the transition table read
/// as base-`n` digits (first cell most significant), then the final-state
/// bitmask. Index order therefore equals lexicographic order of
/// `(table, mask)`.
pub fn dfa_at(n: usize, k: usize, index: u128) -> Dfa {
    let mask = index & ((1u128 << n) - 1);
    let mut table_index = index >> n;
    let cells = n * k;
    let mut delta = vec![0usize; cells];
    for c in (0..cells).rev() {
        delta[c] = (table_index % n as u128) as usize;
        table_index /= n as u128;
    }
    let finals = (0..n).map(|q| mask >> q & 1 == 1).collect();
    Dfa::new(Alphabet::letters(k), 0, finals, delta).expect("enumerated table is well formed")
}

/// Enumeration position of a DFA produced by [`dfa_at`].
pub fn index_of(d: &Dfa) -> u128 {
    let n = d.state_count() as u128;
    let table = d.table().iter().fold(0u128, |acc, &t| acc * n + t as u128);
    let mask = d.finals().fold(0u128, |acc, q| acc | 1u128 << q);
    (table << d.state_count()) | mask
}

/// Deterministic stream of `(index, dfa)` over the spec's space or slice.
pub fn enumerate_dfas(spec: &SearchSpec) -> Result<impl Iterator<Item = (u128, Dfa)>> {
    spec.validate()?;
    let (offset, stride) = spec.slice.unwrap_or((0, 1));
    let total = spec.total();
    let (n, k) = (spec.n, spec.k);
    let mut next = offset;
    Ok(std::iter::from_fn(move || {
        if next >= total {
            return None;
        }
        let i = next;
        next = next.saturating_add(stride);
        Some((i, dfa_at(n, k, i)))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchResult {
    pub max_sc: usize,
    /// Enumeration index of the smallest-encoded DFA attaining `max_sc`.
    pub argmax_index: Option<u128>,
    pub histogram: BTreeMap<usize, u64>,
    /// Runs that hit the state cap. The result is only valid when zero.
    pub capped: u64,
    pub examined: u128,
}

impl SearchResult {
    fn record(&mut self, index: u128, sc: usize) {
        self.examined += 1;
        *self.histogram.entry(sc).or_default() += 1;
        let better =
            sc > self.max_sc || (sc == self.max_sc && self.argmax_index.is_none_or(|a| index < a));
        if better {
            self.max_sc = sc;
            self.argmax_index = Some(index);
        }
    }

    /// Associative, commutative merge.
    pub fn merge(&mut self, other: &SearchResult) {
        self.examined += other.examined;
        self.capped += other.capped;
        for (&sc, &count) in &other.histogram {
            *self.histogram.entry(sc).or_default() += count;
        }
        if let Some(idx) = other.argmax_index {
            let better = other.max_sc > self.max_sc
                || (other.max_sc == self.max_sc && self.argmax_index.is_none_or(|a| idx < a));
            if better {
                self.max_sc = other.max_sc;
                self.argmax_index = Some(idx);
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.capped == 0
    }

    /// Single-line encoding used for checkpoints and determinism checks:
    /// `max argmax capped examined sc:count,...`.
    pub fn encode(&self) -> String {
        let mut out = String::new();
        let argmax = self
            .argmax_index
            .map_or_else(|| "-".to_string(), |a| a.to_string());
        let _ = write!(
            out,
            "{} {} {} {} ",
            self.max_sc, argmax, self.capped, self.examined
        );
        let hist: Vec<String> = self
            .histogram
            .iter()
            .map(|(sc, c)| format!("{sc}:{c}"))
            .collect();
        out.push_str(if hist.is_empty() { "-" } else { "" });
        out.push_str(&hist.join(","));
        out
    }

    pub fn decode(text: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed search record '{text}'"));
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [max, argmax, capped, examined, hist] = fields[..] else {
            return Err(bad());
        };
        let mut histogram = BTreeMap::new();
        if hist != "-" {
            for pair in hist.split(',') {
                let (sc, c) = pair.split_once(':').ok_or_else(bad)?;
                histogram.insert(
                    sc.parse().map_err(|_| bad())?,
                    c.parse().map_err(|_| bad())?,
                );
            }
        }
        Ok(SearchResult {
            max_sc: max.parse().map_err(|_| bad())?,
            argmax_index: if argmax == "-" {
                None
            } else {
                Some(argmax.parse().map_err(|_| bad())?)
            },
            capped: capped.parse().map_err(|_| bad())?,
            examined: examined.parse().map_err(|_| bad())?,
            histogram,
        })
    }
}

/// Minimal `L^{+c+}` size via the pruned construction.
fn plus_c_plus_size(d: &Dfa, cap: usize) -> Result<usize> {
    Ok(minimize(&pruned_determinize(d, cap)?.dfa).state_count())
}

/// Number of work units the index space is cut into. Fixed, so the merge
/// order never depends on the worker count.
pub const SEARCH_CHUNKS: usize = 256;

/// Contiguous index range of chunk `id`, before slicing.
pub fn chunk_range(total: u128, id: usize) -> (u128, u128) {
    let chunks = SEARCH_CHUNKS as u128;
    (
        total * id as u128 / chunks,
        total * (id as u128 + 1) / chunks,
    )
}

fn search_chunk(spec: &SearchSpec, id: usize) -> SearchResult {
    let (lo, hi) = chunk_range(spec.total(), id);
    let (offset, stride) = spec.slice.unwrap_or((0, 1));
    // first index >= lo congruent to offset mod stride
    let mut i = lo + (offset + stride - lo % stride) % stride;
    let mut result = SearchResult::default();
    while i < hi {
        let d = dfa_at(spec.n, spec.k, i);
        match plus_c_plus_size(&d, spec.state_cap) {
            Ok(sc) => result.record(i, sc),
            Err(_) => {
                result.examined += 1;
                result.capped += 1;
            }
        }
        i += stride;
    }
    result
}

/// Exhaustive search for the largest `sc(L^{+c+})`.
///
/// `done` holds already-finished chunks (from a checkpoint); `on_chunk` is
/// called once for each newly finished chunk, in completion order.
pub fn max_sc_search_resumable(
    spec: &SearchSpec,
    done: &BTreeMap<usize, SearchResult>,
    on_chunk: &(dyn Fn(usize, &SearchResult) + Sync),
) -> Result<SearchResult> {
    spec.validate()?;
    let pending: Vec<usize> = (0..SEARCH_CHUNKS)
        .filter(|id| !done.contains_key(id))
        .collect();
    let results: Mutex<BTreeMap<usize, SearchResult>> = Mutex::new(done.clone());
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..spec.jobs.min(pending.len()).max(1) {
            scope.spawn(|| loop {
                let slot = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&id) = pending.get(slot) else {
                    break;
                };
                let r = search_chunk(spec, id);
                on_chunk(id, &r);
                results.lock().expect("no poisoned workers").insert(id, r);
            });
        }
    });
    let results = results.into_inner().expect("no poisoned workers");
    let mut total = SearchResult::default();
    for r in results.values() {
        total.merge(r);
    }
    Ok(total)
}

pub fn max_sc_search(spec: &SearchSpec) -> Result<SearchResult> {
    max_sc_search_resumable(spec, &BTreeMap::new(), &|_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::tests::{all_a, even_a};
    use crate::pipeline::plus_complement_plus;

    #[test]
    fn counts_of_tiny_spaces() {
        assert_eq!(enumerate_dfas(&SearchSpec::new(1, 1)).unwrap().count(), 2);
        assert_eq!(enumerate_dfas(&SearchSpec::new(2, 1)).unwrap().count(), 16);
        assert_eq!(SearchSpec::new(3, 2).total(), 5832);
    }

    #[test]
    fn slices_partition_the_stream() {
        let full: Vec<u128> = enumerate_dfas(&SearchSpec::new(2, 2))
            .unwrap()
            .map(|p| p.0)
            .collect();
        let mut merged = Vec::new();
        for offset in 0..2 {
            let spec = SearchSpec {
                slice: Some((offset, 2)),
                ..SearchSpec::new(2, 2)
            };
            merged.extend(enumerate_dfas(&spec).unwrap().map(|p| p.0));
        }
        merged.sort();
        assert_eq!(merged, full);
    }

    #[test]
    fn index_roundtrip_and_order() {
        for i in 0..SearchSpec::new(2, 2).total() {
            assert_eq!(index_of(&dfa_at(2, 2, i)), i);
        }
        let a = dfa_at(3, 1, 5);
        let b = dfa_at(3, 1, 6);
        assert!((a.table(), 5u128 & 7) < (b.table(), 6u128 & 7));
    }

    #[test]
    fn spec_validation() {
        assert!(SearchSpec::new(0, 1).validate().is_err());
        assert!(SearchSpec {
            slice: Some((2, 2)),
            ..SearchSpec::new(2, 1)
        }
        .validate()
        .is_err());
        assert!(SearchSpec::new(12, 3).validate().is_err());
        assert!(SearchSpec::new(4, 3).validate().is_ok());
    }

    #[test]
    fn naive_matches_pruned_on_fixed_examples() {
        assert_eq!(
            naive_pipeline(&even_a(), 1000).unwrap(),
            plus_complement_plus(&even_a()).unwrap().result
        );
        assert_eq!(naive_pipeline(&all_a(), 1000).unwrap().state_count(), 1);
        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            let d = random_dfa(4, 2, &mut rng);
            assert_eq!(
                naive_pipeline(&d, 1 << 20).unwrap(),
                plus_complement_plus(&d).unwrap().result
            );
        }
    }

    #[test]
    fn tiny_searches() {
        let r = max_sc_search(&SearchSpec::new(1, 1)).unwrap();
        assert_eq!(r.max_sc, 1);
        assert_eq!(r.examined, 2);
        let r = max_sc_search(&SearchSpec::new(2, 1)).unwrap();
        assert_eq!(r.max_sc, 2);
        assert!(r.is_valid());
        let argmax = dfa_at(2, 1, r.argmax_index.unwrap());
        assert_eq!(plus_complement_plus(&argmax).unwrap().d3min_states, 2);
    }

    #[test]
    fn record_roundtrip() {
        let r = max_sc_search(&SearchSpec::new(2, 2)).unwrap();
        assert_eq!(SearchResult::decode(&r.encode()).unwrap(), r);
        assert_eq!(
            SearchResult::decode(&SearchResult::default().encode()).unwrap(),
            SearchResult::default()
        );
    }

    #[test]
    fn merge_is_order_independent() {
        let spec = SearchSpec::new(2, 2);
        let parts: Vec<SearchResult> = (0..SEARCH_CHUNKS)
            .map(|id| search_chunk(&spec, id))
            .collect();
        let mut forward = SearchResult::default();
        parts.iter().for_each(|p| forward.merge(p));
        let mut backward = SearchResult::default();
        parts.iter().rev().for_each(|p| backward.merge(p));
        assert_eq!(forward, backward);
    }
}
