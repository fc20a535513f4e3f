//! Graphviz export with deterministic node and edge ordering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dfa::Dfa;
use crate::nfa::EpsNfa;

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

fn preamble(out: &mut String, name: &str) {
    let _ = writeln!(out, "digraph {name} {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    let _ = writeln!(out, "  __start [shape=point];");
}

/// DOT for a DFA. `labels[q]`, when given, replaces the numeric node label.
/// Parallel edges between the same pair of states are merged into one edge
/// with a comma-separated symbol list.
pub fn dfa_to_dot(d: &Dfa, name: &str, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    preamble(&mut out, name);
    for q in 0..d.state_count() {
        let label = labels.map_or_else(|| q.to_string(), |l| l[q].clone());
        let shape = if d.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  q{q} [label=\"{}\", shape={shape}];", escape(&label));
    }
    let _ = writeln!(out, "  __start -> q{};", d.initial());
    for q in 0..d.state_count() {
        let mut edges: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (a, sym) in d.alphabet().symbols().iter().enumerate() {
            edges.entry(d.step(q, a)).or_default().push(sym);
        }
        for (t, syms) in edges {
            let _ = writeln!(
                out,
                "  q{q} -> q{t} [label=\"{}\"];",
                escape(&syms.join(","))
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn nfa_to_dot(n: &EpsNfa, name: &str, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    preamble(&mut out, name);
    for q in 0..n.state_count() {
        let label = labels.map_or_else(|| q.to_string(), |l| l[q].clone());
        let shape = if n.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  q{q} [label=\"{}\", shape={shape}];", escape(&label));
    }
    let _ = writeln!(out, "  __start -> q{};", n.initial());
    for q in 0..n.state_count() {
        let mut edges: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (a, sym) in n.alphabet().symbols().iter().enumerate() {
            for &t in n.moves(q, a) {
                edges.entry(t).or_default().push(sym);
            }
        }
        for &t in n.eps(q) {
            edges.entry(t).or_default().push("ε");
        }
        for (t, syms) in edges {
            let _ = writeln!(
                out,
                "  q{q} -> q{t} [label=\"{}\"];",
                escape(&syms.join(","))
            );
        }
    }
    out.push_str("}\n");
    out
}
