//! Moore partition refinement with canonical renumbering.

use std::collections::{HashMap, VecDeque};

use crate::dfa::{Dfa, StateId};

/// Minimal DFA for the same language.
///
/// States are numbered in BFS order from the initial state, expanding
/// symbols in alphabet order, so two automata for the same language over the
/// same alphabet minimize to equal values.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.alphabet().len();
    let reachable = d.reachable();
    let live: Vec<StateId> = (0..d.state_count()).filter(|&q| reachable[q]).collect();

    let mut class = vec![usize::MAX; d.state_count()];
    let mut initial_ids = HashMap::new();
    for &q in &live {
        let next = initial_ids.len();
        class[q] = *initial_ids.entry(d.is_final(q)).or_insert(next);
    }
    let mut count = initial_ids.len();

    let mut signature = Vec::with_capacity(k + 1);
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::with_capacity(count * 2);
        let mut next_class = vec![usize::MAX; d.state_count()];
        for &q in &live {
            signature.clear();
            signature.push(class[q]);
            signature.extend((0..k).map(|a| class[d.step(q, a)]));
            let fresh = ids.len();
            next_class[q] = *ids.entry(signature.clone()).or_insert(fresh);
        }
        let refined = ids.len();
        class = next_class;
        if refined == count {
            break;
        }
        count = refined;
    }

    let representative = {
        let mut rep = vec![usize::MAX; count];
        for &q in &live {
            if rep[class[q]] == usize::MAX {
                rep[class[q]] = q;
            }
        }
        rep
    };
    canonical_quotient(d, &class, &representative)
}

/// BFS renumbering of the quotient by `class`.
fn canonical_quotient(d: &Dfa, class: &[usize], representative: &[StateId]) -> Dfa {
    let k = d.alphabet().len();
    let mut order = vec![usize::MAX; representative.len()];
    let mut queue = VecDeque::from([class[d.initial()]]);
    order[class[d.initial()]] = 0;
    let mut next_id = 1;
    let mut rows: Vec<usize> = Vec::with_capacity(representative.len());
    while let Some(c) = queue.pop_front() {
        rows.push(c);
        let q = representative[c];
        for a in 0..k {
            let t = class[d.step(q, a)];
            if order[t] == usize::MAX {
                order[t] = next_id;
                next_id += 1;
                queue.push_back(t);
            }
        }
    }
    let mut delta = Vec::with_capacity(rows.len() * k);
    let mut finals = Vec::with_capacity(rows.len());
    for &c in &rows {
        let q = representative[c];
        finals.push(d.is_final(q));
        delta.extend((0..k).map(|a| order[class[d.step(q, a)]]));
    }
    Dfa::new(d.alphabet().clone(), 0, finals, delta).expect("quotient is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::tests::even_a;
    use crate::dfa::{equivalent, Alphabet};

    #[test]
    fn minimal_input_is_fixed() {
        let d = even_a();
        assert_eq!(minimize(&d), d);
        assert_eq!(minimize(&minimize(&d)), d);
    }

    #[test]
    fn duplicated_states_merge() {
        // states 0 and 1 both accept exactly words of even length
        let d = Dfa::from_fn(Alphabet::letters(1), 4, 0, &[0, 1], |q, _| match q {
            0 => 2,
            1 => 3,
            2 => 1,
            _ => 0,
        })
        .unwrap();
        let m = minimize(&d);
        assert_eq!(m, even_a());
    }

    #[test]
    fn redundant_a_plus_shrinks_to_two() {
        // 0 -a-> 1 -a-> 2 -a-> 3 -a-> 1, finals {1,2,3}
        let d = Dfa::from_fn(Alphabet::letters(1), 4, 0, &[1, 2, 3], |q, _| {
            if q == 3 {
                1
            } else {
                q + 1
            }
        })
        .unwrap();
        let m = minimize(&d);
        assert_eq!(m.state_count(), 2);
        assert!(equivalent(&d, &m).unwrap());
    }

    #[test]
    fn unreachable_states_are_dropped() {
        let d = Dfa::from_fn(
            Alphabet::letters(2),
            3,
            0,
            &[2],
            |q, _| if q == 2 { 1 } else { 0 },
        )
        .unwrap();
        let m = minimize(&d);
        assert_eq!(m.state_count(), 1);
        assert_eq!(m.finals().count(), 0);
    }

    #[test]
    fn nonzero_initial_is_renumbered() {
        let d = even_a().with_epsilon(false);
        let m = minimize(&d);
        assert_eq!(m.initial(), 0);
        assert_eq!(m.state_count(), 3);
        assert!(equivalent(&d, &m).unwrap());
    }
}
