//! Search for the distinguished-element / chain decomposition of an antichain:
//! members `X_i = {q_i} ∪ S_i` with distinct `q_i`, `S_1 ⊆ … ⊆ S_k` and no
//! `q_i` in `S_k`.

use crate::pipeline::antichain::Antichain;
use crate::stateset::StateSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub q: Vec<usize>,
    pub chain: Vec<StateSet>,
}

impl CanonicalForm {
    pub fn k(&self) -> usize {
        self.q.len()
    }

    /// The sets `{q_i} ∪ S_i`, in witness order.
    pub fn members(&self) -> Vec<StateSet> {
        self.q
            .iter()
            .zip(&self.chain)
            .map(|(&q, s)| s.with(q))
            .collect()
    }

    /// Checks every structural condition of the form.
    pub fn is_valid(&self, universe_size: usize) -> bool {
        let k = self.k();
        if k == 0 || k > universe_size || self.chain.len() != k {
            return false;
        }
        let distinct = (0..k).all(|i| (0..i).all(|j| self.q[i] != self.q[j]));
        let top = self.chain[k - 1];
        distinct
            && self
                .q
                .iter()
                .all(|&q| q < universe_size && !top.contains(q))
            && self.chain.windows(2).all(|w| w[0].is_subset(&w[1]))
    }
}

/// First witness in lexicographic search order (members in canonical order,
/// distinguished elements ascending), or `None` if the antichain has no
/// such decomposition.
pub fn canonical_form(s: &Antichain) -> Option<CanonicalForm> {
    let k = s.len();
    if k == 0 || k > s.universe_size() {
        return None;
    }
    let mut search = Search {
        sets: s.sets(),
        used: vec![false; k],
        q: Vec::with_capacity(k),
        chain: Vec::with_capacity(k),
    };
    search.extend().then_some(CanonicalForm {
        q: search.q,
        chain: search.chain,
    })
}

struct Search<'a> {
    sets: &'a [StateSet],
    used: Vec<bool>,
    q: Vec<usize>,
    chain: Vec<StateSet>,
}

impl Search<'_> {
    fn extend(&mut self) -> bool {
        if self.q.len() == self.sets.len() {
            let top = self.chain[self.chain.len() - 1];
            return self.q.iter().all(|&q| !top.contains(q));
        }
        let floor = self.chain.last().copied();
        for i in 0..self.sets.len() {
            if self.used[i] {
                continue;
            }
            let x = self.sets[i];
            if let Some(f) = floor {
                // S_i ⊆ X_i minus one element, so |X_i| > |S_{i-1}| is required
                if x.len() <= f.len() {
                    continue;
                }
            }
            for q in x.iter() {
                if self.q.contains(&q) {
                    continue;
                }
                let rest = x.without(q);
                if floor.is_some_and(|f| !f.is_subset(&rest)) {
                    continue;
                }
                // an earlier q_j inside this S_i would end up inside S_k
                if self.q.iter().any(|&p| rest.contains(p)) {
                    continue;
                }
                self.used[i] = true;
                self.q.push(q);
                self.chain.push(rest);
                if self.extend() {
                    return true;
                }
                self.chain.pop();
                self.q.pop();
                self.used[i] = false;
            }
        }
        false
    }
}
