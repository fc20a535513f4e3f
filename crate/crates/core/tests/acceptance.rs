//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use sclab_core::bounds;
use sclab_core::oracle::{self, naive_pipeline, random_dfa, seeded_rng, SearchSpec};
use sclab_core::pipeline::{
    accepts_from, canonical_form, initial_antichain, orbit, pruned_step, run_stages, Antichain,
    PipelineOptions, Variant,
};
use sclab_core::verify::{corpus, VerifyConfig};
use sclab_core::witness::{
    cycle_states, family_states, reach_string, separating_string_with, witness,
    TransformationMonoid, WitnessKind,
};
use sclab_core::{Dfa, StateSet};

const CORPUS_SEED: u64 = 7;
const CORPUS_SAMPLES: usize = 200;
const CORPUS_N_MAX: usize = 5;
const ORBIT_SEED: u64 = 11;
const ORBIT_SAMPLES: usize = 50;
const ASYMPTOTIC_TOLERANCE: f64 = 1e-3;
const W1_TOLERANCE: f64 = 1e-12;
const ORACLE_BUDGET: Duration = Duration::from_secs(180);
const REACH_BUDGET: Duration = Duration::from_secs(120);
const SEARCH_BUDGET: Duration = Duration::from_secs(300);

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        println!("{status}  [{id:>2}] {name:<34} {detail}");
    }
}

fn upper(n: usize) -> usize {
    bounds::upper_count(n as u32)
        .unwrap()
        .to_usize()
        .unwrap_or(usize::MAX)
}

fn violations(labels: &[Antichain]) -> usize {
    labels
        .iter()
        .filter(|s| canonical_form(s).is_none())
        .count()
}

/// One corpus entry after both pipelines.
struct Run {
    n: usize,
    pruned: Dfa,
    naive: Dfa,
    star_states: usize,
    star_eps: bool,
    eps_in_l: bool,
    violations: usize,
}

fn main() {
    let mut report = Report { failed: 0 };
    let opts = PipelineOptions::default();
    // (n, |D3min|) of every pipeline run, for the upper-bound criterion
    let mut all_runs: Vec<(usize, usize)> = Vec::new();

    // 1. pruned vs naive
    let cfg = VerifyConfig {
        n_max: CORPUS_N_MAX,
        samples: CORPUS_SAMPLES,
        seed: CORPUS_SEED,
        ..VerifyConfig::default()
    };
    let start = Instant::now();
    let dfas = corpus(&cfg);
    let mut runs = Vec::with_capacity(dfas.len());
    let mut errors = 0;
    for d in &dfas {
        let st = run_stages(d, &opts);
        let naive = naive_pipeline(d, opts.state_cap);
        match (st, naive) {
            (Ok(st), Ok(naive)) => {
                let star = st.report(Variant::Star, false);
                runs.push(Run {
                    n: d.state_count(),
                    pruned: st.d3min.clone(),
                    naive,
                    star_states: star.d3min_states,
                    star_eps: star.epsilon_in_result,
                    eps_in_l: d.accepts_empty(),
                    violations: violations(&st.d3.labels),
                });
            }
            _ => errors += 1,
        }
    }
    let elapsed = start.elapsed();
    let mismatches = runs.iter().filter(|r| r.pruned != r.naive).count();
    all_runs.extend(runs.iter().map(|r| (r.n, r.pruned.state_count())));
    report.line(
        1,
        "oracle equivalence",
        mismatches == 0 && errors == 0 && elapsed < ORACLE_BUDGET,
        format!(
            "{} DFAs (seed {CORPUS_SEED}), {mismatches} mismatches, {errors} errors, {:.1}s",
            dfas.len(),
            elapsed.as_secs_f64()
        ),
    );

    // 2. canonical form
    let mut bad: usize = runs.iter().map(|r| r.violations).sum();
    let mut checked: usize = runs.len();
    for n in [5, 6] {
        let st = run_stages(&witness(WitnessKind::Combined, n).unwrap(), &opts).unwrap();
        bad += violations(&st.d3.labels);
        checked += 1;
        all_runs.push((n, st.d3min.state_count()));
    }
    report.line(
        2,
        "canonical form",
        bad == 0,
        format!("{checked} pipelines, {bad} violating states"),
    );

    // 3. reachability by single-path simulation
    let start = Instant::now();
    let mut reached = 0;
    let mut missed = Vec::new();
    for n in [5, 6, 7] {
        let d = witness(WitnessKind::Combined, n).unwrap();
        for fs in family_states(n, false).unwrap() {
            let target = fs.antichain(n);
            let word = reach_string(n, &fs).unwrap();
            let mut s = initial_antichain(&d);
            for a in d.alphabet().parse_word(&word).unwrap() {
                s = pruned_step(&s, a, &d).unwrap().0;
            }
            if s == target {
                reached += 1;
            } else {
                missed.push(format!("n={n} {target}"));
            }
        }
    }
    let elapsed = start.elapsed();
    report.line(
        3,
        "constructive reachability",
        missed.is_empty() && elapsed < REACH_BUDGET,
        format!(
            "{reached} family states reached, {} missed{}, {:.2}s",
            missed.len(),
            missed
                .first()
                .map_or_else(String::new, |m| format!(" (first {m})")),
            elapsed.as_secs_f64()
        ),
    );

    // 4. distinguishability and size consequences
    let mut unseparated = 0;
    let mut pairs = 0;
    let mut sizes = Vec::new();
    let mut size_ok = true;
    for (n, stated) in [(5usize, 4usize), (6, 22)] {
        let d = witness(WitnessKind::Combined, n).unwrap();
        let monoid = TransformationMonoid::new(n).unwrap();
        let cycle = cycle_states(n);
        let separators: Vec<Vec<usize>> = (0..1u64 << cycle.len())
            .map(|bits| {
                let t = StateSet::from_bits(n, bits << 2);
                d.alphabet()
                    .parse_word(&separating_string_with(&monoid, &t).unwrap())
                    .unwrap()
            })
            .collect();
        let family: Vec<Antichain> = family_states(n, false)
            .unwrap()
            .iter()
            .map(|fs| fs.antichain(n))
            .collect();
        let signature = |s: &Antichain| -> Vec<bool> {
            separators
                .iter()
                .map(|w| accepts_from(&d, s, w).unwrap())
                .collect()
        };
        let sigs: Vec<Vec<bool>> = family.iter().map(signature).collect();
        for i in 0..sigs.len() {
            for j in i + 1..sigs.len() {
                pairs += 1;
                if sigs[i] == sigs[j] {
                    unseparated += 1;
                }
            }
        }
        let min = run_stages(&d, &opts).unwrap().d3min.state_count();
        size_ok &= min >= stated && min >= family.len();
        sizes.push(format!(
            "n={n}: |D3min|={min} family={} stated>={stated}",
            family.len()
        ));
    }
    report.line(
        4,
        "distinguishability",
        unseparated == 0 && size_ok,
        format!(
            "{pairs} pairs, {unseparated} unseparated; {}",
            sizes.join(", ")
        ),
    );

    // 5. bound table
    let expected = [1u32, 6, 36, 260, 2300];
    let mut ok = (1..=5u32)
        .zip(expected)
        .all(|(n, e)| bounds::upper_count(n).unwrap() == BigUint::from(e));
    let egf = bounds::egf_coefficients(12);
    for n in 1..=12u32 {
        let a = bounds::a072597(n).unwrap();
        ok &= a == bounds::upper_count(n).unwrap() + 1u32 && a == egf[n as usize];
    }
    report.line(
        5,
        "bound table",
        ok,
        "upper_count 1..5 exact; a072597 = upper_count + 1 = series for n <= 12".into(),
    );

    // 6. asymptotics
    let devs: Vec<f64> = (5..=12)
        .map(|n| (bounds::asymptotic_ratio(n).unwrap() - 1.0).abs())
        .collect();
    let within = devs.iter().all(|&d| d <= ASYMPTOTIC_TOLERANCE);
    let nonincreasing = devs.windows(2).all(|w| w[1] <= w[0]);
    let w1 = bounds::lambert_w1_newton(0.5).unwrap();
    let stored: f64 = bounds::W1_DIGITS.parse().unwrap();
    let w1_ok = (w1 - stored).abs() <= W1_TOLERANCE;
    report.line(
        6,
        "asymptotic estimate",
        within && nonincreasing && w1_ok,
        format!(
            "deviation {:.3e} at n=5, {:.3e} at n=12, nonincreasing={nonincreasing}, |W(1) - digits|={:.1e}",
            devs[0],
            devs[7],
            (w1 - stored).abs()
        ),
    );

    // 7. Dedekind numbers
    let brute: Vec<u64> = (0..=4).map(bounds::dedekind_brute_force).collect();
    let mut ok = brute == [2, 3, 6, 20, 168];
    for n in 0..=5u32 {
        let m = bounds::dedekind(n).unwrap().to_f64().unwrap();
        let central = (0..n / 2).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
        ok &= m.log2() >= central as f64;
    }
    report.line(
        7,
        "Dedekind numbers",
        ok,
        format!("brute force n=0..4 {brute:?}; log2 M(n) >= C(n, n/2) for n <= 5"),
    );

    // 8. star vs plus
    let gap_bad = runs
        .iter()
        .filter(|r| r.star_states.abs_diff(r.pruned.state_count()) > 1)
        .count();
    let eps_bad = runs
        .iter()
        .filter(|r| !r.star_eps || r.pruned.accepts_empty() == r.eps_in_l)
        .count();
    report.line(
        8,
        "star vs plus relation",
        gap_bad == 0 && eps_bad == 0,
        format!(
            "{} DFAs, {gap_bad} size gaps > 1, {eps_bad} epsilon mismatches",
            runs.len()
        ),
    );

    // 10. search determinism (runs before 9 so its results feed the bound check)
    let start = Instant::now();
    let results: Vec<_> = [1, 2, 4]
        .iter()
        .map(|&jobs| {
            oracle::max_sc_search(&SearchSpec {
                jobs,
                ..SearchSpec::new(3, 2)
            })
            .unwrap()
        })
        .collect();
    let elapsed = start.elapsed();
    let identical = results.windows(2).all(|w| w[0] == w[1]);
    let r = &results[0];
    all_runs.extend(r.histogram.keys().map(|&sc| (3, sc)));
    let search_ok = identical && r.is_valid() && r.max_sc <= upper(3) && elapsed < SEARCH_BUDGET;

    // 9. upper bound on every run
    let over = all_runs.iter().filter(|&&(n, sc)| sc > upper(n)).count();
    report.line(
        9,
        "upper bound consistency",
        over == 0,
        format!(
            "{} pipeline runs, {over} above upper_count(n)",
            all_runs.len()
        ),
    );
    report.line(
        10,
        "search determinism",
        search_ok,
        format!(
            "jobs 1/2/4 identical={identical}, max_sc={} (<= 36), examined={}, {:.1}s",
            r.max_sc,
            r.examined,
            elapsed.as_secs_f64()
        ),
    );

    // 11. orbit closure
    let mut rng = seeded_rng(ORBIT_SEED);
    let mut open = 0;
    for _ in 0..ORBIT_SAMPLES {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=2);
        let d = random_dfa(n, k, &mut rng);
        if !orbit(&d).unwrap().closure_failures().unwrap().is_empty() {
            open += 1;
        }
    }
    report.line(
        11,
        "orbit closure",
        open == 0,
        format!("{ORBIT_SAMPLES} DFAs (seed {ORBIT_SEED}), {open} not closed up to epsilon"),
    );

    if report.failed > 0 {
        println!("{} criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
