//! Batch verification suites behind the `verify` command.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::bounds;
use crate::dfa::Dfa;
use crate::error::Result;
use crate::oracle::{self, naive_pipeline, random_dfa, seeded_rng, SearchSpec};
use crate::pipeline::{
    accepts_from, canonical_form, initial_antichain, pruned_step, run_stages, Antichain,
    PipelineOptions, StepRule, Variant,
};
use crate::stateset::StateSet;
use crate::witness::{
    cycle_states, family_states, reach_string, separating_string_with, witness,
    TransformationMonoid, WitnessKind,
};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest state count in the random corpus; exhaustive enumeration
    /// covers `n <= min(n_max, 3)` with `k <= 2`.
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub jobs: usize,
    pub state_cap: usize,
    pub rule: StepRule,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 5,
            samples: 200,
            seed: 7,
            jobs: 1,
            state_cap: crate::pipeline::DEFAULT_STATE_CAP,
            rule: StepRule::Minimal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Description of the first failure, if any.
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        SuiteOutcome {
            name,
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status}  {:<28} checked {:>7}  failed {:>5}",
            self.name, self.checked, self.failures
        )?;
        if let Some(first) = &self.first_failure {
            write!(f, "  first: {first}")?;
        }
        Ok(())
    }
}

/// The DFAs every corpus-wide suite runs on: all DFAs with `n <= min(n_max, 3)`
/// states over `k <= 2` letters, then `samples` random DFAs with
/// `n <= n_max`, `k <= 3`.
pub fn corpus(cfg: &VerifyConfig) -> Vec<Dfa> {
    let mut out = Vec::new();
    for n in 1..=cfg.n_max.min(3) {
        for k in 1..=2 {
            let spec = SearchSpec::new(n, k);
            out.extend(
                oracle::enumerate_dfas(&spec)
                    .expect("small spec")
                    .map(|(_, d)| d),
            );
        }
    }
    let mut rng = seeded_rng(cfg.seed);
    for _ in 0..cfg.samples {
        let n = rng.gen_range(1..=cfg.n_max.max(1));
        let k = rng.gen_range(1..=3);
        out.push(random_dfa(n, k, &mut rng));
    }
    out
}

/// Per-DFA facts gathered once and shared by the corpus suites.
struct CorpusRecord {
    pruned_min: Result<Dfa>,
    naive_min: Result<Dfa>,
    star_states: Option<usize>,
    star_has_eps: Option<bool>,
    violations: Option<usize>,
}

fn examine(d: &Dfa, cfg: &VerifyConfig) -> CorpusRecord {
    let opts = PipelineOptions {
        state_cap: cfg.state_cap,
        rule: cfg.rule,
        check_canonical: true,
    };
    let stages = run_stages(d, &opts);
    let (pruned_min, star_states, star_has_eps, violations) = match stages {
        Ok(st) => {
            let star = st.report(Variant::Star, false);
            let violations = st
                .d3
                .labels
                .iter()
                .filter(|s| canonical_form(s).is_none())
                .count();
            (
                Ok(st.d3min.clone()),
                Some(star.d3min_states),
                Some(star.epsilon_in_result),
                Some(violations),
            )
        }
        Err(e) => (Err(e), None, None, None),
    };
    CorpusRecord {
        pruned_min,
        naive_min: naive_pipeline(d, cfg.state_cap),
        star_states,
        star_has_eps,
        violations,
    }
}

fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    let chunk = items.len().div_ceil(jobs).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn upper(n: usize) -> usize {
    bounds::upper_count(n as u32)
        .ok()
        .and_then(|b| b.to_usize())
        .unwrap_or(usize::MAX)
}

/// Runs every suite and returns one outcome per suite.
pub fn run(cfg: &VerifyConfig) -> Vec<SuiteOutcome> {
    let dfas = corpus(cfg);
    let records = parallel_map(&dfas, cfg.jobs, |d| examine(d, cfg));

    let mut oracle_eq = SuiteOutcome::new("oracle equality (pruning)");
    let mut canonical = SuiteOutcome::new("canonical form");
    let mut relation = SuiteOutcome::new("star vs plus relation");
    let mut upper_bound = SuiteOutcome::new("upper bound on D3min");
    for (d, r) in dfas.iter().zip(&records) {
        let shown = || crate::format::write_dfa(d).replace('\n', "; ");
        match (&r.pruned_min, &r.naive_min) {
            (Ok(p), Ok(nv)) => {
                oracle_eq.check(p == nv, || {
                    format!("pruned and naive differ on [{}]", shown())
                });
                upper_bound.check(p.state_count() <= upper(d.state_count()), || {
                    format!("{} states on [{}]", p.state_count(), shown())
                });
                let plus_eps = p.accepts_empty();
                let star = r.star_states.unwrap_or(0);
                relation.check(
                    star.abs_diff(p.state_count()) <= 1
                        && r.star_has_eps == Some(true)
                        && plus_eps != d.accepts_empty(),
                    || format!("relation broken on [{}]", shown()),
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                oracle_eq.check(false, || format!("{e} on [{}]", shown()));
            }
        }
        if let Some(v) = r.violations {
            canonical.check(v == 0, || format!("{v} violations on [{}]", shown()));
        }
    }
    for n in [5, 6] {
        let d = witness(WitnessKind::Combined, n).expect("n >= 5");
        let opts = PipelineOptions {
            state_cap: cfg.state_cap,
            rule: cfg.rule,
            check_canonical: true,
        };
        match run_stages(&d, &opts) {
            Ok(st) => {
                let v = st
                    .d3
                    .labels
                    .iter()
                    .filter(|s| canonical_form(s).is_none())
                    .count();
                canonical.check(v == 0, || {
                    format!("{v} violations on combined witness n={n}")
                });
            }
            Err(e) => canonical.check(false, || format!("combined witness n={n}: {e}")),
        }
    }

    vec![
        oracle_eq,
        canonical,
        reachability_suite(&[5, 6, 7]),
        distinguishability_suite(&[5, 6], cfg),
        bounds_suite(),
        relation,
        upper_bound,
    ]
}

/// Runs each family state's reach word from `{{0}}` on the combined witness.
pub fn reachability_suite(sizes: &[usize]) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("witness reachability");
    for &n in sizes {
        let d = witness(WitnessKind::Combined, n).expect("n >= 5");
        for fs in family_states(n, false).expect("n >= 5") {
            let target = fs.antichain(n);
            let reached = reach_string(n, &fs).and_then(|w| {
                let mut s = initial_antichain(&d);
                for a in d.alphabet().parse_word(&w)? {
                    s = pruned_step(&s, a, &d)?.0;
                }
                Ok(s)
            });
            out.check(reached.as_ref() == Ok(&target), || {
                format!("n={n}: {target} not reached ({reached:?})")
            });
        }
    }
    out
}

/// Every pair of distinct family states is separated by some `w_T · g`, and
/// the minimal result has at least as many states as the family.
pub fn distinguishability_suite(sizes: &[usize], cfg: &VerifyConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("witness distinguishability");
    for &n in sizes {
        let d = witness(WitnessKind::Combined, n).expect("n >= 5");
        let monoid = TransformationMonoid::new(n).expect("n >= 5");
        let cycle = cycle_states(n);
        let separators: Vec<Vec<usize>> = (0..1u64 << cycle.len())
            .map(|bits| {
                let t = StateSet::from_bits(n, bits << 2);
                let w = separating_string_with(&monoid, &t).expect("T inside the cycle");
                d.alphabet().parse_word(&w).expect("witness letters")
            })
            .collect();
        let family: Vec<Antichain> = family_states(n, false)
            .expect("n >= 5")
            .iter()
            .map(|fs| fs.antichain(n))
            .collect();
        let signatures: Vec<Vec<bool>> = family
            .iter()
            .map(|s| {
                separators
                    .iter()
                    .map(|w| accepts_from(&d, s, w).unwrap_or(false))
                    .collect()
            })
            .collect();
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                out.check(signatures[i] != signatures[j], || {
                    format!("n={n}: {} and {} not separated", family[i], family[j])
                });
            }
        }
        let opts = PipelineOptions {
            state_cap: cfg.state_cap,
            rule: cfg.rule,
            check_canonical: false,
        };
        let size = run_stages(&d, &opts).map(|st| st.d3min.state_count());
        out.check(size.as_ref().is_ok_and(|&s| s >= family.len()), || {
            format!(
                "n={n}: minimal size {size:?} below family count {}",
                family.len()
            )
        });
    }
    out
}

/// Exact counts, the generating-function cross-check, asymptotics and
/// Dedekind numbers.
pub fn bounds_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("bounds");
    let expected = [1u32, 6, 36, 260, 2300];
    for (n, &e) in (1..).zip(&expected) {
        out.check(
            bounds::upper_count(n).ok() == Some(BigUint::from(e)),
            || format!("upper_count({n}) != {e}"),
        );
    }
    let egf = bounds::egf_coefficients(12);
    for n in 1..=12u32 {
        let a = bounds::a072597(n).expect("n >= 1");
        out.check(a == egf[n as usize], || {
            format!("a072597({n}) disagrees with the series")
        });
        out.check(
            bounds::upper_count(n).expect("n >= 1") <= bounds::crude_bound(n).expect("n >= 1"),
            || format!("crude bound below count at n={n}"),
        );
    }
    let mut previous = f64::INFINITY;
    for n in 5..=12 {
        let dev = (bounds::asymptotic_ratio(n).unwrap_or(f64::NAN) - 1.0).abs();
        out.check(dev <= 1e-3 && dev <= previous, || {
            format!("deviation {dev:e} at n={n}")
        });
        previous = dev;
    }
    out.check(bounds::lambert_w1_check().is_ok(), || {
        "W(1) mismatch".into()
    });
    let dedekind = [2u32, 3, 6, 20, 168];
    for (n, &e) in (0..).zip(&dedekind) {
        out.check(bounds::dedekind(n).ok() == Some(BigUint::from(e)), || {
            format!("dedekind({n}) != {e}")
        });
    }
    for n in 0..=5u32 {
        let m = bounds::dedekind(n)
            .expect("n <= 5")
            .to_f64()
            .expect("small");
        let central = binomial(n, n / 2);
        out.check(m.log2() >= central as f64, || {
            format!("log2 M({n}) < C({n},{})", n / 2)
        });
    }
    out
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
