use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};

use sclab_core::bounds;
use sclab_core::dot::{dfa_to_dot, nfa_to_dot};
use sclab_core::format::{parse_dfa, write_dfa, write_nfa};
use sclab_core::oracle::{self, SearchResult, SearchSpec, PRNG_NAME, SEARCH_CHUNKS};
use sclab_core::pipeline::{
    initial_antichain, orbit_with, pruned_step, run_stages, PipelineOptions, Stages, StepRule,
    Variant, DEFAULT_STATE_CAP, ORBIT_NAMES,
};
use sclab_core::verify::{self, VerifyConfig};
use sclab_core::witness::{
    cycle_states, family_states, reach_string, witness, TransformationMonoid, WitnessKind,
    MIN_WITNESS_SIZE,
};
use sclab_core::{Dfa, Error, StateSet};

const STATE_CAP_VAR: &str = "SCS_STATE_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "sclab",
    version,
    about = "State complexity of plus-complement-plus and star-complement-star"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the closure pipeline on a DFA file and report every stage size.
    Pipeline {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Plus)]
        variant: VariantArg,
        /// Write every intermediate automaton into this directory.
        #[arg(long)]
        emit_stages: Option<PathBuf>,
        /// Also produce DOT output (stage files, or the result on stdout).
        #[arg(long)]
        dot: bool,
    },
    /// Build a witness DFA.
    Witness {
        #[arg(value_enum)]
        family: FamilyArg,
        n: usize,
        /// Write the DFA here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print one `<antichain> <string> <ok|fail>` line per family state.
        #[arg(long)]
        report: bool,
    },
    /// Print the table of exact counts and asymptotic estimates.
    Bounds {
        #[arg(long, default_value_t = 12)]
        max_n: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Exhaustive search for the largest result over all n-state, k-letter DFAs.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Checkpoint file; finished chunks are skipped and new ones appended.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Negative control: keep maximal instead of minimal sets.
        #[arg(long, hide = true)]
        corrupt_pruning: bool,
    },
    /// Sizes of the five languages generated by plus and complement.
    Orbit { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Plus,
    Star,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Reach,
    Dist,
    Combined,
}

impl From<FamilyArg> for WitnessKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Reach => WitnessKind::Reach,
            FamilyArg::Dist => WitnessKind::Dist,
            FamilyArg::Combined => WitnessKind::Combined,
        }
    }
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StateCapExceeded { .. } => 3,
            Error::Internal(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Pipeline {
            file,
            variant,
            emit_stages,
            dot,
        } => cmd_pipeline(&file, variant, emit_stages.as_deref(), dot),
        Command::Witness {
            family,
            n,
            out,
            report,
        } => cmd_witness(family.into(), n, out.as_deref(), report),
        Command::Bounds { max_n, csv } => cmd_bounds(max_n, csv),
        Command::Search { n, k, jobs, resume } => cmd_search(n, k, jobs, resume.as_deref()),
        Command::Verify {
            n_max,
            samples,
            seed,
            jobs,
            corrupt_pruning,
        } => cmd_verify(n_max, samples, seed, jobs, corrupt_pruning),
        Command::Orbit { file } => cmd_orbit(&file),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn state_cap() -> std::result::Result<usize, Failure> {
    match std::env::var(STATE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| {
                Failure::input(format!("{STATE_CAP_VAR}='{v}' is not a positive integer"))
            }),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn read_dfa(path: &Path) -> std::result::Result<Dfa, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_dfa(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Right-aligned `label: value` rows.
fn aligned(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(l, v)| format!("{l:>width$}: {v}\n"))
        .collect()
}

fn cmd_pipeline(file: &Path, variant: VariantArg, emit: Option<&Path>, dot: bool) -> CmdResult {
    let d = read_dfa(file)?;
    let opts = PipelineOptions {
        state_cap: state_cap()?,
        rule: StepRule::Minimal,
        check_canonical: true,
    };
    let stages = run_stages(&d, &opts)?;
    let variant = match variant {
        VariantArg::Plus => Variant::Plus,
        VariantArg::Star => Variant::Star,
    };
    let report = stages.report(variant, true);
    let mut rows = vec![
        (
            "variant".to_string(),
            match variant {
                Variant::Plus => "plus-complement-plus".to_string(),
                Variant::Star => "star-complement-star".to_string(),
            },
        ),
        ("D".into(), report.d_states.to_string()),
        ("N1".into(), report.n1_states.to_string()),
        ("D1".into(), report.d1_states.to_string()),
        ("D2".into(), report.d2_states.to_string()),
        ("N3".into(), report.n3_states.to_string()),
        ("D3".into(), report.d3_states.to_string()),
        ("D3min".into(), report.d3min_states.to_string()),
    ];
    if variant == Variant::Star {
        rows.push(("D3min (plus)".into(), report.plus_min_states.to_string()));
    }
    rows.push(("eps in L".into(), yes_no(report.epsilon_in_l).into()));
    rows.push((
        "eps in result".into(),
        yes_no(report.epsilon_in_result).into(),
    ));
    rows.push((
        "canonical violations".into(),
        report.canonical_violations.unwrap_or(0).to_string(),
    ));
    print!("{}", aligned(&rows));

    if let Some(dir) = emit {
        emit_stages(dir, &stages, &report.result, dot)?;
    } else if dot {
        print!("{}", dfa_to_dot(&report.result, "result", None));
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_stages(
    dir: &Path,
    st: &Stages,
    result: &Dfa,
    dot: bool,
) -> std::result::Result<(), Failure> {
    fs::create_dir_all(dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    let subset_labels: Vec<String> = st.d1_labels.iter().map(StateSet::to_string).collect();
    let d3_text: Vec<String> = st.d3.labels.iter().map(ToString::to_string).collect();
    let d3_dot: Vec<String> = st.d3.labels.iter().map(|s| s.dot_label()).collect();

    write_file(&dir.join("n1.txt"), &write_nfa(&st.n1))?;
    write_file(&dir.join("d1.txt"), &write_dfa(&st.d1))?;
    write_file(&dir.join("d2.txt"), &write_dfa(&st.d2))?;
    write_file(&dir.join("n3.txt"), &write_nfa(&st.n3))?;
    write_file(&dir.join("d3.txt"), &write_dfa(&st.d3.dfa))?;
    write_file(&dir.join("d3min.txt"), &write_dfa(result))?;
    write_file(&dir.join("d3_labels.txt"), &(d3_text.join("\n") + "\n"))?;
    if dot {
        write_file(&dir.join("n1.dot"), &nfa_to_dot(&st.n1, "N1", None))?;
        write_file(
            &dir.join("d1.dot"),
            &dfa_to_dot(&st.d1, "D1", Some(&subset_labels)),
        )?;
        write_file(
            &dir.join("d2.dot"),
            &dfa_to_dot(&st.d2, "D2", Some(&subset_labels)),
        )?;
        write_file(&dir.join("n3.dot"), &nfa_to_dot(&st.n3, "N3", None))?;
        write_file(
            &dir.join("d3.dot"),
            &dfa_to_dot(&st.d3.dfa, "D3", Some(&d3_dot)),
        )?;
        write_file(&dir.join("d3min.dot"), &dfa_to_dot(result, "D3min", None))?;
    }
    Ok(())
}

fn cmd_witness(kind: WitnessKind, n: usize, out: Option<&Path>, report: bool) -> CmdResult {
    if n < MIN_WITNESS_SIZE {
        return Err(Failure::input(format!(
            "witness needs n >= {MIN_WITNESS_SIZE}: the lower bound argument uses states 0, 1, n-1 \
             and a cycle on 2..n-2 of length at least two"
        )));
    }
    let d = witness(kind, n)?;
    let summary = format!(
        "witness {kind} n={n}\nalphabet: {}\nfinals: {}\n",
        d.alphabet().symbols().join(" "),
        d.finals()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    match out {
        Some(path) => {
            write_file(path, &write_dfa(&d))?;
            print!("{summary}");
        }
        None => {
            eprint!("{summary}");
            print!("{}", write_dfa(&d));
        }
    }
    if report {
        let lines = match kind {
            WitnessKind::Dist => dist_report(&d, n)?,
            _ => reach_report(&d, n)?,
        };
        let failed = lines.iter().filter(|l| l.ends_with("fail")).count();
        let mut stdout = std::io::stdout().lock();
        for l in &lines {
            let _ = writeln!(stdout, "{l}");
        }
        if failed > 0 {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Each family state with its reach word, simulated from `{{0}}`.
fn reach_report(d: &Dfa, n: usize) -> std::result::Result<Vec<String>, Failure> {
    let mut lines = Vec::new();
    for fs in family_states(n, false)? {
        let target = fs.antichain(n);
        let word = reach_string(n, &fs)?;
        let mut s = initial_antichain(d);
        for a in d.alphabet().parse_word(&word)? {
            s = pruned_step(&s, a, d)?.0;
        }
        let status = if s == target { "ok" } else { "fail" };
        lines.push(format!("{target} {word} {status}"));
    }
    Ok(lines)
}

/// Each subset `T` of the cycle with `w_T`; ok when `w_T` sends `T` to 2
/// and the rest of the cycle to 3.
fn dist_report(d: &Dfa, n: usize) -> std::result::Result<Vec<String>, Failure> {
    let monoid = TransformationMonoid::new(n)?;
    let cycle = cycle_states(n);
    let mut lines = Vec::new();
    for bits in 0..1u64 << cycle.len() {
        let t = StateSet::from_bits(n, bits << 2);
        let target: Vec<usize> = (2..n - 1)
            .map(|q| if t.contains(q) { 2 } else { 3 })
            .collect();
        let word = monoid.word_for(&target)?;
        let w = d.alphabet().parse_word(&word)?;
        let ok = (2..n - 1).all(|q| d.walk(q, &w) == if t.contains(q) { 2 } else { 3 });
        lines.push(format!("{t} {word}g {}", if ok { "ok" } else { "fail" }));
    }
    Ok(lines)
}

fn cmd_bounds(max_n: u32, csv: bool) -> CmdResult {
    if max_n == 0 {
        return Err(Failure::input("--max-n must be at least 1"));
    }
    let rows = bounds::bound_table(max_n)?;
    if csv {
        print!("{}", bounds::table_csv(&rows));
    } else {
        print!("{}", bounds::table_text(&rows));
    }
    Ok(ExitCode::SUCCESS)
}

fn checkpoint_header(n: usize, k: usize) -> String {
    format!("# sclab search n={n} k={k} chunks={SEARCH_CHUNKS}")
}

fn load_checkpoint(
    path: &Path,
    header: &str,
) -> std::result::Result<BTreeMap<usize, SearchResult>, Failure> {
    let mut done = BTreeMap::new();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => {
            return Err(Failure::input(format!(
                "cannot read {}: {e}",
                path.display()
            )))
        }
    };
    let mut lines = text.lines();
    match lines.next() {
        None => return Ok(done),
        Some(h) if h.trim() == header => {}
        Some(h) => {
            return Err(Failure::input(format!(
                "{}: checkpoint header '{h}' does not match '{header}'",
                path.display()
            )))
        }
    }
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || {
            Failure::input(format!(
                "{} line {}: malformed chunk record",
                path.display(),
                i + 2
            ))
        };
        let (id, rest) = line.split_once(' ').ok_or_else(bad)?;
        let id: usize = id.parse().map_err(|_| bad())?;
        if id >= SEARCH_CHUNKS {
            return Err(bad());
        }
        done.insert(id, SearchResult::decode(rest)?);
    }
    Ok(done)
}

fn cmd_search(n: usize, k: usize, jobs: usize, resume: Option<&Path>) -> CmdResult {
    let spec = SearchSpec {
        jobs,
        state_cap: state_cap()?,
        ..SearchSpec::new(n, k)
    };
    spec.validate()?;
    let header = checkpoint_header(n, k);
    let done = match resume {
        Some(path) => load_checkpoint(path, &header)?,
        None => BTreeMap::new(),
    };
    let sink = match resume {
        Some(path) => {
            let fresh = !path.exists() || fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
            let mut f = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Failure::input(format!("cannot open {}: {e}", path.display())))?;
            if fresh {
                writeln!(f, "{header}").map_err(|e| Failure::input(e.to_string()))?;
            }
            Some(Mutex::new(f))
        }
        None => None,
    };
    let on_chunk = |id: usize, r: &SearchResult| {
        if let Some(f) = &sink {
            let mut f = f.lock().expect("checkpoint writer");
            let _ = writeln!(f, "{id} {}", r.encode());
            let _ = f.flush();
        }
    };
    let result = oracle::max_sc_search_resumable(&spec, &done, &on_chunk)?;

    let mut rows = vec![
        ("n".to_string(), n.to_string()),
        ("k".into(), k.to_string()),
        ("examined".into(), result.examined.to_string()),
        ("resumed chunks".into(), done.len().to_string()),
        ("capped".into(), result.capped.to_string()),
        ("max sc".into(), result.max_sc.to_string()),
    ];
    if let Some(idx) = result.argmax_index {
        rows.push(("argmax index".into(), idx.to_string()));
    }
    let hist: Vec<String> = result
        .histogram
        .iter()
        .map(|(s, c)| format!("{s}:{c}"))
        .collect();
    rows.push(("histogram".into(), hist.join(" ")));
    print!("{}", aligned(&rows));
    if let Some(idx) = result.argmax_index {
        println!("argmax DFA:");
        print!("{}", write_dfa(&oracle::dfa_at(n, k, idx)));
    }
    if !result.is_valid() {
        eprintln!(
            "error: {} runs hit the state cap; the maximum is not certified",
            result.capped
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(n_max: usize, samples: usize, seed: u64, jobs: usize, corrupt: bool) -> CmdResult {
    if n_max == 0 || jobs == 0 {
        return Err(Failure::input("--n-max and --jobs must be positive"));
    }
    let cfg = VerifyConfig {
        n_max,
        samples,
        seed,
        jobs,
        state_cap: state_cap()?,
        rule: if corrupt {
            StepRule::CorruptMaximal
        } else {
            StepRule::Minimal
        },
    };
    println!("verify n_max={n_max} samples={samples} seed={seed} prng={PRNG_NAME} jobs={jobs}");
    if corrupt {
        println!("pruning rule: corrupted (negative control)");
    }
    let outcomes = verify::run(&cfg);
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed > 0 {
        println!("{failed} suite(s) failed");
        return Ok(ExitCode::from(1));
    }
    println!("all suites passed");
    Ok(ExitCode::SUCCESS)
}

fn cmd_orbit(file: &Path) -> CmdResult {
    let d = read_dfa(file)?;
    let opts = PipelineOptions {
        state_cap: state_cap()?,
        ..PipelineOptions::default()
    };
    let sizes = orbit_with(&d, &opts)?.sizes();
    let rows: Vec<(String, String)> = ORBIT_NAMES
        .iter()
        .zip(sizes)
        .map(|(name, s)| (name.to_string(), s.to_string()))
        .collect();
    print!("{}", aligned(&rows));
    println!(
        "sizes: {}",
        sizes
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("each complement has the same size as its language");
    Ok(ExitCode::SUCCESS)
}
