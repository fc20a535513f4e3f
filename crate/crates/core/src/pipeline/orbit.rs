use crate::dfa::{equivalent, Dfa};
use crate::error::Result;
use crate::minimize::minimize;
use crate::nfa::determinize;
use crate::pipeline::{plus_complement_plus_with, plus_nfa, PipelineOptions};

pub const ORBIT_NAMES: [&str; 5] = ["L", "L+", "Lc+", "L+c+", "Lc+c+"];

/// Minimal DFA for `L(d)^+`.
pub fn plus_closure(d: &Dfa) -> Dfa {
    minimize(&determinize(&plus_nfa(d)).dfa)
}

/// Minimal DFAs for `L, L^+, L^{c+}, L^{+c+}, L^{c+c+}`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub languages: [Dfa; 5],
}

impl Orbit {
    /// State complexities; each complement has the same size.
    pub fn sizes(&self) -> [usize; 5] {
        std::array::from_fn(|i| self.languages[i].state_count())
    }

    /// The five languages followed by their complements.
    pub fn all_ten(&self) -> Vec<Dfa> {
        let mut out: Vec<Dfa> = self.languages.to_vec();
        out.extend(self.languages.iter().map(Dfa::complement));
        out
    }

    /// Pairs `(language index, operation)` for which applying `+` or `c`
    /// to one of the ten languages lands outside the ten, even allowing a
    /// difference in ε. Empty when the orbit is closed.
    pub fn closure_failures(&self) -> Result<Vec<(usize, char)>> {
        let ten = self.all_ten();
        let with_eps: Vec<Dfa> = ten.iter().map(|x| x.with_epsilon(true)).collect();
        let mut failures = Vec::new();
        for (i, x) in ten.iter().enumerate() {
            for (op, image) in [('+', plus_closure(x)), ('c', x.complement())] {
                let image = image.with_epsilon(true);
                let mut found = false;
                for y in &with_eps {
                    if equivalent(&image, y)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    failures.push((i, op));
                }
            }
        }
        Ok(failures)
    }
}

pub fn orbit(d: &Dfa) -> Result<Orbit> {
    orbit_with(d, &PipelineOptions::default())
}

pub fn orbit_with(d: &Dfa, opts: &PipelineOptions) -> Result<Orbit> {
    let opts = PipelineOptions {
        check_canonical: false,
        ..opts.clone()
    };
    let l = minimize(d);
    let plus = plus_closure(d);
    let c_plus = plus_closure(&d.complement());
    let plus_c_plus = plus_complement_plus_with(d, &opts)?.result;
    let c_plus_c_plus = plus_complement_plus_with(&d.complement(), &opts)?.result;
    Ok(Orbit {
        languages: [l, plus, c_plus, plus_c_plus, c_plus_c_plus],
    })
}
