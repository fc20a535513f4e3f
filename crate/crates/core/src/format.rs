//! Line-oriented text format for DFAs and ε-NFAs.
//!
//! ```text
//! # (aa)*
//! states 2
//! alphabet a
//! initial 0
//! final 0
//! 0 a 1
//! 1 a 0
//! ```
//!
//! The NFA variant allows several lines per `(state, symbol)` pair, omitted
//! pairs, and the reserved symbol `eps` for ε-moves.

use std::fmt::Write as _;

use crate::dfa::{Alphabet, Dfa, StateId, EPSILON_TOKEN};
use crate::error::{Error, Result};
use crate::nfa::EpsNfa;

struct Header {
    states: usize,
    alphabet: Alphabet,
    initial: StateId,
    finals: Vec<StateId>,
}

/// Transition lines as `(line number, from, symbol index or None for eps, to)`.
type Moves = Vec<(usize, StateId, Option<usize>, StateId)>;

fn parse_common(text: &str, allow_eps: bool) -> Result<(Header, Moves)> {
    let mut states = None;
    let mut alphabet = None;
    let mut initial = None;
    let mut finals = None;
    let mut moves = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else {
            continue;
        };
        match head {
            "states" => {
                if states.is_some() {
                    return Err(Error::parse(line_no, "duplicate 'states' directive"));
                }
                let [count] = rest else {
                    return Err(Error::parse(line_no, "expected 'states N'"));
                };
                let n: usize = count
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad state count '{count}'")))?;
                if n == 0 {
                    return Err(Error::parse(line_no, "state count must be positive"));
                }
                states = Some(n);
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(Error::parse(line_no, "duplicate 'alphabet' directive"));
                }
                alphabet = Some(
                    Alphabet::new(rest.iter().copied())
                        .map_err(|e| Error::parse(line_no, e.to_string()))?,
                );
            }
            "initial" => {
                if initial.is_some() {
                    return Err(Error::parse(line_no, "duplicate 'initial' directive"));
                }
                let [q] = rest else {
                    return Err(Error::parse(line_no, "expected 'initial Q'"));
                };
                initial = Some(parse_state(q, states, line_no)?);
            }
            "final" => {
                if finals.is_some() {
                    return Err(Error::parse(line_no, "duplicate 'final' directive"));
                }
                finals = Some(
                    rest.iter()
                        .map(|q| parse_state(q, states, line_no))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            _ => {
                let [from, sym, to] = tokens[..] else {
                    return Err(Error::parse(
                        line_no,
                        format!("expected a directive or 'q s q2', found '{}'", line.trim()),
                    ));
                };
                let Some(alpha) = alphabet.as_ref() else {
                    return Err(Error::parse(line_no, "transition before 'alphabet'"));
                };
                let from = parse_state(from, states, line_no)?;
                let to = parse_state(to, states, line_no)?;
                let symbol =
                    if sym == EPSILON_TOKEN {
                        if !allow_eps {
                            return Err(Error::parse(line_no, "epsilon move in a DFA"));
                        }
                        None
                    } else {
                        Some(alpha.index_of(sym).map_err(|_| {
                            Error::parse(line_no, format!("unknown symbol '{sym}'"))
                        })?)
                    };
                moves.push((line_no, from, symbol, to));
            }
        }
    }

    let missing =
        |what: &str| Error::parse(last_line.max(1), format!("missing '{what}' directive"));
    let header = Header {
        states: states.ok_or_else(|| missing("states"))?,
        alphabet: alphabet.ok_or_else(|| missing("alphabet"))?,
        initial: initial.ok_or_else(|| missing("initial"))?,
        finals: finals.unwrap_or_default(),
    };
    Ok((header, moves))
}

fn parse_state(token: &str, states: Option<usize>, line_no: usize) -> Result<StateId> {
    let Some(n) = states else {
        return Err(Error::parse(line_no, "state reference before 'states'"));
    };
    let q: StateId = token
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad state id '{token}'")))?;
    if q >= n {
        return Err(Error::parse(
            line_no,
            format!("state {q} out of range 0..{n}"),
        ));
    }
    Ok(q)
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let (h, moves) = parse_common(text, false)?;
    let k = h.alphabet.len();
    let mut delta: Vec<Option<StateId>> = vec![None; h.states * k];
    for (line_no, from, sym, to) in moves {
        let a = sym.expect("DFA moves carry a symbol");
        let cell = &mut delta[from * k + a];
        if cell.is_some() {
            return Err(Error::parse(
                line_no,
                format!(
                    "duplicate transition for ({from}, {})",
                    h.alphabet.symbol(a)
                ),
            ));
        }
        *cell = Some(to);
    }
    let mut table = Vec::with_capacity(delta.len());
    for (i, cell) in delta.into_iter().enumerate() {
        match cell {
            Some(t) => table.push(t),
            None => {
                return Err(Error::parse(
                    0,
                    format!(
                        "missing transition for ({}, {})",
                        i / k,
                        h.alphabet.symbol(i % k)
                    ),
                ))
            }
        }
    }
    let mut finals = vec![false; h.states];
    for q in h.finals {
        finals[q] = true;
    }
    Dfa::new(h.alphabet, h.initial, finals, table)
}

pub fn parse_nfa(text: &str) -> Result<EpsNfa> {
    let (h, moves) = parse_common(text, true)?;
    let mut nfa = EpsNfa::new(h.alphabet, h.states, h.initial)?;
    for q in h.finals {
        nfa.set_final(q, true)?;
    }
    for (_, from, sym, to) in moves {
        match sym {
            Some(a) => nfa.add_move(from, a, to)?,
            None => nfa.add_eps(from, to)?,
        }
    }
    Ok(nfa)
}

fn write_header(
    out: &mut String,
    states: usize,
    alphabet: &Alphabet,
    initial: StateId,
    finals: &[StateId],
) {
    let _ = writeln!(out, "states {states}");
    let _ = writeln!(out, "alphabet {}", alphabet.symbols().join(" "));
    let _ = writeln!(out, "initial {initial}");
    let fin: Vec<String> = finals.iter().map(ToString::to_string).collect();
    if fin.is_empty() {
        let _ = writeln!(out, "final");
    } else {
        let _ = writeln!(out, "final {}", fin.join(" "));
    }
}

pub fn write_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    let finals: Vec<StateId> = d.finals().collect();
    write_header(
        &mut out,
        d.state_count(),
        d.alphabet(),
        d.initial(),
        &finals,
    );
    for q in 0..d.state_count() {
        for (a, sym) in d.alphabet().symbols().iter().enumerate() {
            let _ = writeln!(out, "{q} {sym} {}", d.step(q, a));
        }
    }
    out
}

pub fn write_nfa(n: &EpsNfa) -> String {
    let mut out = String::new();
    let finals: Vec<StateId> = n.finals().collect();
    write_header(
        &mut out,
        n.state_count(),
        n.alphabet(),
        n.initial(),
        &finals,
    );
    for q in 0..n.state_count() {
        for (a, sym) in n.alphabet().symbols().iter().enumerate() {
            for &t in n.moves(q, a) {
                let _ = writeln!(out, "{q} {sym} {t}");
            }
        }
        for &t in n.eps(q) {
            let _ = writeln!(out, "{q} {EPSILON_TOKEN} {t}");
        }
    }
    out
}
