//! The plus-complement-plus construction `D → N1 → D1 → D2 → N3 → D3 → D3min`
//! with antichain pruning of the second subset construction.
//!
//! States of `D1`/`D2` are subsets of the input's states. A state of `D3`
//! is a family of such subsets; the pruned construction keeps only the
//! ⊆-minimal members, since a superset never accepts a word its subset
//! rejects.

mod antichain;
mod canonical;
mod orbit;

use std::collections::{HashMap, VecDeque};

pub use antichain::Antichain;
pub use canonical::{canonical_form, CanonicalForm};
pub use orbit::{orbit, orbit_with, plus_closure, Orbit, ORBIT_NAMES};

use crate::dfa::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::nfa::{determinize, EpsNfa};
use crate::stateset::{StateSet, MAX_UNIVERSE};

/// Default cap on pruned `D3` states.
pub const DEFAULT_STATE_CAP: usize = 2_000_000;

/// NFA for `L(d)^+`: ε-moves from every non-initial final state back to the
/// initial state.
pub fn plus_nfa(d: &Dfa) -> EpsNfa {
    let mut nfa = EpsNfa::from_dfa(d);
    for f in d.finals().filter(|&f| f != d.initial()) {
        nfa.add_eps(f, d.initial()).expect("ids from the DFA");
    }
    nfa
}

/// NFA for `L^{+c+}` from `D2` and its subset labels: ε-moves from every
/// non-initial final state of `D2` to the state labeled `{initial}`.
pub fn n3_nfa(d2: &Dfa, labels: &[StateSet], initial: StateId) -> Result<EpsNfa> {
    if labels.len() != d2.state_count() {
        return Err(Error::Internal(format!(
            "{} labels for {} states",
            labels.len(),
            d2.state_count()
        )));
    }
    let universe = labels.first().map_or(0, StateSet::universe_size);
    let start_label = StateSet::singleton(universe, initial);
    let start = labels
        .iter()
        .position(|l| *l == start_label)
        .ok_or_else(|| Error::Internal(format!("no state of D2 is labeled {start_label}")))?;
    let mut nfa = EpsNfa::from_dfa(d2);
    for f in d2.finals().filter(|&f| f != d2.initial()) {
        nfa.add_eps(f, start)?;
    }
    Ok(nfa)
}

/// Which successor families the pruned construction keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepRule {
    /// Keep the ⊆-minimal sets.
    #[default]
    Minimal,
    /// Keep the ⊆-maximal sets. Unsound; exists so verification suites have
    /// a negative control.
    CorruptMaximal,
}

/// `true` iff `x`, as a state of `D2`, is final: it holds no final state of `d`.
fn d2_final(d: &Dfa, x: &StateSet) -> bool {
    x.iter().all(|q| !d.is_final(q))
}

/// One symbol of the determinized `N3`, followed by pruning.
///
/// Each member `X` moves to `X.a ∪ {0}` when `X.a` meets the final states
/// (non-final in `D2`) and to `X.a` otherwise (final in `D2`, so `{0}` is
/// also added to the successor). The flag reports whether some image is
/// final in `D2`.
pub fn pruned_step(s: &Antichain, a: usize, d: &Dfa) -> Result<(Antichain, bool)> {
    pruned_step_with(s, a, d, StepRule::Minimal)
}

pub fn pruned_step_with(
    s: &Antichain,
    a: usize,
    d: &Dfa,
    rule: StepRule,
) -> Result<(Antichain, bool)> {
    if a >= d.alphabet().len() {
        return Err(Error::InvalidInput(format!(
            "symbol index {a} outside alphabet of size {}",
            d.alphabet().len()
        )));
    }
    let universe = d.state_count();
    let zero = StateSet::singleton(universe, d.initial());
    let mut images = Vec::with_capacity(s.len() + 1);
    let mut accepting = false;
    for x in s.sets() {
        let image = x.image(|q| d.step(q, a));
        if d2_final(d, &image) {
            accepting = true;
            images.push(image);
        } else {
            images.push(image.union(&zero));
        }
    }
    if accepting {
        images.push(zero);
    }
    let next = antichain::reduce(universe, images, rule == StepRule::Minimal)?;
    Ok((next, accepting))
}

/// The initial pruned state `{{0}}`.
pub fn initial_antichain(d: &Dfa) -> Antichain {
    Antichain::minimal(
        d.state_count(),
        [StateSet::singleton(d.state_count(), d.initial())],
    )
    .expect("nonempty")
}

/// Whether the word (symbol indices) is accepted by `N3` from the given
/// pruned state.
pub fn accepts_from(d: &Dfa, start: &Antichain, word: &[usize]) -> Result<bool> {
    let mut cur = start.clone();
    let mut accepting = start.sets().iter().any(|x| d2_final(d, x));
    for &a in word {
        let (next, flag) = pruned_step(&cur, a, d)?;
        cur = next;
        accepting = flag;
    }
    Ok(accepting)
}

/// Pruned `D3` with the antichain labeling each state.
#[derive(Clone, Debug)]
pub struct PrunedDfa {
    pub dfa: Dfa,
    pub labels: Vec<Antichain>,
}

pub fn pruned_determinize(d: &Dfa, cap: usize) -> Result<PrunedDfa> {
    pruned_determinize_with(d, cap, StepRule::Minimal)
}

/// BFS over pruned states from `{{0}}`. The initial state is accepting iff
/// ε ∉ L; every other state takes the flag of the step that discovered it.
pub fn pruned_determinize_with(d: &Dfa, cap: usize, rule: StepRule) -> Result<PrunedDfa> {
    if d.state_count() > MAX_UNIVERSE {
        return Err(Error::Unsupported(format!(
            "input has {} states; at most {MAX_UNIVERSE} are supported",
            d.state_count()
        )));
    }
    let k = d.alphabet().len();
    let start = initial_antichain(d);
    let mut ids: HashMap<Antichain, StateId> = HashMap::from([(start.clone(), 0)]);
    let mut labels = vec![start];
    let mut finals = vec![!d.accepts_empty()];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        for a in 0..k {
            let (next, flag) = pruned_step_with(&labels[id], a, d, rule)?;
            let target = match ids.get(&next) {
                Some(&t) => {
                    if rule == StepRule::Minimal && finals[t] != flag {
                        return Err(Error::Internal(format!(
                            "state {} reached with conflicting acceptance",
                            labels[t]
                        )));
                    }
                    t
                }
                None => {
                    let t = labels.len();
                    if t >= cap {
                        return Err(Error::StateCapExceeded {
                            cap,
                            frontier: queue.len() + 1,
                        });
                    }
                    ids.insert(next.clone(), t);
                    labels.push(next);
                    finals.push(flag);
                    queue.push_back(t);
                    t
                }
            };
            delta.push(target);
        }
    }
    let dfa = Dfa::new(d.alphabet().clone(), 0, finals, delta)?;
    Ok(PrunedDfa { dfa, labels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `L^{+c+}`
    Plus,
    /// `L^{*c*}`
    Star,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub state_cap: usize,
    pub rule: StepRule,
    /// Run the canonical-form check on every pruned state.
    pub check_canonical: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            state_cap: DEFAULT_STATE_CAP,
            rule: StepRule::Minimal,
            check_canonical: true,
        }
    }
}

/// Every intermediate automaton of one run.
#[derive(Clone, Debug)]
pub struct Stages {
    pub input: Dfa,
    pub n1: EpsNfa,
    pub d1: Dfa,
    /// Subset of input states behind each `D1` (and `D2`) state.
    pub d1_labels: Vec<StateSet>,
    pub d2: Dfa,
    pub n3: EpsNfa,
    pub d3: PrunedDfa,
    /// Minimal DFA for `L^{+c+}`.
    pub d3min: Dfa,
}

/// Builds all stages of the plus-complement-plus chain.
pub fn run_stages(d: &Dfa, opts: &PipelineOptions) -> Result<Stages> {
    if d.state_count() > MAX_UNIVERSE {
        return Err(Error::Unsupported(format!(
            "input has {} states; at most {MAX_UNIVERSE} are supported",
            d.state_count()
        )));
    }
    let n1 = plus_nfa(d);
    let det = determinize(&n1);
    let d1_labels = det
        .subsets
        .iter()
        .map(|s| StateSet::from_members(d.state_count(), s.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let d1 = det.dfa;
    let d2 = d1.complement();
    let n3 = n3_nfa(&d2, &d1_labels, d.initial())?;
    let d3 = pruned_determinize_with(d, opts.state_cap, opts.rule)?;
    let d3min = minimize(&d3.dfa);
    Ok(Stages {
        input: d.clone(),
        n1,
        d1,
        d1_labels,
        d2,
        n3,
        d3,
        d3min,
    })
}

/// Sizes and results of one pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    pub variant: Variant,
    pub d_states: usize,
    pub n1_states: usize,
    pub d1_states: usize,
    pub d2_states: usize,
    pub n3_states: usize,
    /// Reachable pruned states.
    pub d3_states: usize,
    /// States of the minimal DFA for the requested variant.
    pub d3min_states: usize,
    /// States of the minimal DFA for `L^{+c+}`; equals `d3min_states` for
    /// the plus variant.
    pub plus_min_states: usize,
    pub epsilon_in_l: bool,
    pub epsilon_in_result: bool,
    /// Reachable pruned states without a canonical decomposition; `None`
    /// when the check was skipped.
    pub canonical_violations: Option<usize>,
    /// Minimal DFA for the requested variant.
    pub result: Dfa,
}

impl Stages {
    pub fn report(&self, variant: Variant, check_canonical: bool) -> PipelineReport {
        let result = match variant {
            Variant::Plus => self.d3min.clone(),
            Variant::Star => star_adjust(&self.d3min, self.input.accepts_empty()),
        };
        let canonical_violations = check_canonical.then(|| {
            self.d3
                .labels
                .iter()
                .filter(|s| canonical_form(s).is_none())
                .count()
        });
        PipelineReport {
            variant,
            d_states: self.input.state_count(),
            n1_states: self.n1.state_count(),
            d1_states: self.d1.state_count(),
            d2_states: self.d2.state_count(),
            n3_states: self.n3.state_count(),
            d3_states: self.d3.dfa.state_count(),
            d3min_states: result.state_count(),
            plus_min_states: self.d3min.state_count(),
            epsilon_in_l: self.input.accepts_empty(),
            epsilon_in_result: result.accepts_empty(),
            canonical_violations,
            result,
        }
    }
}

/// `L^{*c*}` from the minimal DFA of `L^{+c+}`: add ε when ε ∈ L.
fn star_adjust(plus_min: &Dfa, epsilon_in_l: bool) -> Dfa {
    if epsilon_in_l {
        minimize(&plus_min.with_epsilon(true))
    } else {
        plus_min.clone()
    }
}

pub fn plus_complement_plus(d: &Dfa) -> Result<PipelineReport> {
    plus_complement_plus_with(d, &PipelineOptions::default())
}

pub fn plus_complement_plus_with(d: &Dfa, opts: &PipelineOptions) -> Result<PipelineReport> {
    Ok(run_stages(d, opts)?.report(Variant::Plus, opts.check_canonical))
}

pub fn star_complement_star(d: &Dfa) -> Result<PipelineReport> {
    star_complement_star_with(d, &PipelineOptions::default())
}

pub fn star_complement_star_with(d: &Dfa, opts: &PipelineOptions) -> Result<PipelineReport> {
    Ok(run_stages(d, opts)?.report(Variant::Star, opts.check_canonical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::tests::{all_a, even_a};
    use crate::dfa::{equivalent, words_up_to, Alphabet};

    fn a_plus() -> Dfa {
        Dfa::from_fn(Alphabet::letters(1), 2, 0, &[1], |_, _| 1).unwrap()
    }

    fn empty_lang() -> Dfa {
        Dfa::from_fn(Alphabet::letters(1), 1, 0, &[], |_, _| 0).unwrap()
    }

    fn set(n: usize, members: &[usize]) -> StateSet {
        StateSet::from_members(n, members.iter().copied()).unwrap()
    }

    #[test]
    fn plus_nfa_adds_back_edges_only_from_non_initial_finals() {
        let n1 = plus_nfa(&a_plus());
        assert_eq!(n1.eps(1), &[0]);
        assert_eq!(n1.eps_count(), 1);
        assert_eq!(plus_nfa(&even_a()).eps_count(), 0);
        assert_eq!(plus_nfa(&empty_lang()).eps_count(), 0);
        for w in words_up_to(1, 6) {
            assert_eq!(n1.accepts_indices(&w), !w.is_empty());
        }
    }

    #[test]
    fn n3_for_even_a() {
        let st = run_stages(&even_a(), &PipelineOptions::default()).unwrap();
        // D1 = D2 states: {0}, {1}; D2 finals: {1} (odd lengths)
        assert_eq!(st.d1_labels, vec![set(2, &[0]), set(2, &[1])]);
        assert_eq!(st.d2.finals().collect::<Vec<_>>(), vec![1]);
        assert_eq!(st.n3.eps(1), &[0]);
        assert_eq!(st.n3.eps_count(), 1);
    }

    #[test]
    fn n3_without_non_initial_finals_is_d2() {
        // L = a*: D2 has no finals at all
        let st = run_stages(&all_a(), &PipelineOptions::default()).unwrap();
        assert_eq!(st.n3.eps_count(), 0);
        assert_eq!(st.n3, EpsNfa::from_dfa(&st.d2));
    }

    #[test]
    fn n3_requires_the_initial_label() {
        let d2 = even_a();
        let labels = vec![set(2, &[1]), set(2, &[0, 1])];
        assert!(matches!(n3_nfa(&d2, &labels, 0), Err(Error::Internal(_))));
    }

    #[test]
    fn step_rule_branches() {
        let d = even_a();
        let s = initial_antichain(&d);
        // {0}.a = {1}: no finals, so D2-final; {0} is injected
        let (next, acc) = pruned_step(&s, 0, &d).unwrap();
        assert!(acc);
        assert_eq!(next.to_string(), "{0}{1}");
        // {0}.a and {1}.a = {1},{0}: {0} meets F so becomes {0}; {1} stays
        let (again, acc2) = pruned_step(&next, 0, &d).unwrap();
        assert!(acc2);
        assert_eq!(again, next);
        assert!(pruned_step(&s, 1, &d).is_err());
    }

    #[test]
    fn every_image_meeting_finals_injects_nothing() {
        // a* : every image contains 0, which is final
        let d = all_a();
        let s = initial_antichain(&d);
        let (next, acc) = pruned_step(&s, 0, &d).unwrap();
        assert!(!acc);
        assert_eq!(next, s);
    }

    #[test]
    fn universal_language_gives_empty_result() {
        let r = plus_complement_plus(&all_a()).unwrap();
        assert_eq!(r.d3_states, 1);
        assert_eq!(r.d3min_states, 1);
        assert_eq!(r.result.finals().count(), 0);
    }

    #[test]
    fn even_a_gives_a_plus() {
        let r = plus_complement_plus(&even_a()).unwrap();
        assert_eq!(r.d3min_states, 2);
        assert_eq!(r.result, minimize(&a_plus()));
        assert_eq!(r.canonical_violations, Some(0));
        assert!(r.epsilon_in_l);
        assert!(!r.epsilon_in_result);
    }

    #[test]
    fn a_plus_gives_only_epsilon() {
        let r = plus_complement_plus(&a_plus()).unwrap();
        assert_eq!(r.d3min_states, 2);
        for w in words_up_to(1, 6) {
            assert_eq!(r.result.accepts_indices(&w), w.is_empty());
        }
    }

    #[test]
    fn empty_language_gives_everything() {
        let r = plus_complement_plus(&empty_lang()).unwrap();
        assert_eq!(r.d3min_states, 1);
        assert!(equivalent(&r.result, &all_a()).unwrap());
        let s = star_complement_star(&empty_lang()).unwrap();
        assert_eq!(s.d3min_states, 1);
    }

    #[test]
    fn star_variant_differs_by_epsilon() {
        let s = star_complement_star(&even_a()).unwrap();
        assert_eq!(s.d3min_states, 1);
        assert_eq!(s.plus_min_states, 2);
        assert!(equivalent(&s.result, &all_a()).unwrap());
        // ε ∉ L: identical automaton
        let p = plus_complement_plus(&a_plus()).unwrap();
        let s = star_complement_star(&a_plus()).unwrap();
        assert_eq!(p.result, s.result);
    }

    #[test]
    fn cap_aborts() {
        let err = pruned_determinize(&even_a(), 1).unwrap_err();
        assert!(matches!(err, Error::StateCapExceeded { cap: 1, .. }));
    }

    #[test]
    fn accepts_from_initial_matches_result() {
        let d = crate::oracle::random_dfa(4, 2, &mut crate::oracle::seeded_rng(11));
        let r = plus_complement_plus(&d).unwrap();
        let start = initial_antichain(&d);
        for w in words_up_to(2, 6) {
            assert_eq!(
                accepts_from(&d, &start, &w).unwrap(),
                r.result.accepts_indices(&w)
            );
        }
    }
}
