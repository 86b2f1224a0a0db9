//! Textual formats: the native `.oaut` automaton format, the `.otrans`
//! transducer format, and a minimal HOA dialect for state-based Buchi
//! automata.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::automaton::{AcceptanceMode, BuchiAutomaton, FiniteAutomaton, MullerAcceptance, MullerAutomaton, StateId};
use crate::error::{Error, Result};
use crate::transducer::TwoTapeTransducer;

/// Any automaton the `.oaut` format can carry.
#[derive(Debug, Clone)]
pub enum Automaton {
    Buchi(BuchiAutomaton),
    Muller(MullerAutomaton),
    Finite(FiniteAutomaton),
}

impl Automaton {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Automaton::Buchi(a) => a.alphabet(),
            Automaton::Muller(m) => m.alphabet(),
            Automaton::Finite(f) => f.alphabet(),
        }
    }

    pub fn expect_buchi(self) -> Result<BuchiAutomaton> {
        match self {
            Automaton::Buchi(a) => Ok(a),
            _ => Err(Error::Precondition("a Buchi or co-Buchi automaton".into())),
        }
    }

    pub fn expect_finite(self) -> Result<FiniteAutomaton> {
        match self {
            Automaton::Finite(f) => Ok(f),
            _ => Err(Error::Precondition("a finite-word automaton".into())),
        }
    }
}

struct Lines<'a> {
    // (1-based line number, content) with comments and blanks dropped
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn expect_field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        match self.next() {
            Some((n, l)) => match l.strip_prefix(key).and_then(|r| r.strip_prefix(':')) {
                Some(rest) => Ok((n, rest.trim())),
                None => Err(Error::parse(n, 1, format!("expected '{key}:' header"))),
            },
            None => Err(Error::parse(
                self.items.last().map_or(1, |&(n, _)| n + 1),
                1,
                format!("missing '{key}:' header"),
            )),
        }
    }
}

fn parse_alphabet(line: usize, value: &str) -> Result<Alphabet> {
    let mut symbols = Vec::new();
    for tok in value.split_whitespace() {
        let mut chars = tok.chars();
        let c = chars
            .next()
            .ok_or_else(|| Error::parse(line, 1, "empty alphabet symbol"))?;
        if chars.next().is_some() {
            return Err(Error::parse(line, 1, format!("symbol '{tok}' is not a single character")));
        }
        symbols.push(c);
    }
    Alphabet::new(symbols).map_err(|e| Error::parse(line, 1, e.to_string()))
}

fn parse_number(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, 1, format!("invalid {what} '{tok}'")))
}

fn parse_state(line: usize, tok: &str, num_states: usize) -> Result<StateId> {
    let s = parse_number(line, tok, "state id")?;
    if s >= num_states {
        return Err(Error::parse(line, 1, format!("state id {s} out of range")));
    }
    Ok(s)
}

/// Parses the native `.oaut` format.
pub fn parse_oaut(text: &str) -> Result<Automaton> {
    let mut lines = Lines::new(text);
    let (n, v) = lines.expect_field("alphabet")?;
    let alphabet = parse_alphabet(n, v)?;
    let (n, v) = lines.expect_field("states")?;
    let num_states = parse_number(n, v, "state count")?;
    let (n, v) = lines.expect_field("initial")?;
    let initial = parse_state(n, v, num_states)?;
    let (accline, acceptance) = lines.expect_field("acceptance")?;

    enum Acc {
        Finals(AcceptanceMode),
        Table,
        Rabin,
        Streett,
        Finite,
    }
    let acc = match acceptance {
        "buchi" => Acc::Finals(AcceptanceMode::Buchi),
        "cobuchi" => Acc::Finals(AcceptanceMode::CoBuchi),
        "muller" => Acc::Table,
        "rabin" => Acc::Rabin,
        "streett" => Acc::Streett,
        "finite" => Acc::Finite,
        other => {
            return Err(Error::parse(accline, 1, format!("unknown acceptance '{other}'")));
        }
    };

    let mut finals = Vec::new();
    let mut table: Vec<BTreeSet<StateId>> = Vec::new();
    let mut pairs: Vec<crate::graph::LoopPair> = Vec::new();
    match &acc {
        Acc::Table => {
            let (n, v) = lines.expect_field("table")?;
            let mut rest = v;
            while let Some(open) = rest.find('{') {
                let close = rest[open..]
                    .find('}')
                    .ok_or_else(|| Error::parse(n, open + 1, "unclosed '{' in table"))?;
                let mut set = BTreeSet::new();
                for tok in rest[open + 1..open + close].split_whitespace() {
                    set.insert(parse_state(n, tok, num_states)?);
                }
                table.push(set);
                rest = &rest[open + close + 1..];
            }
            if !rest.trim().is_empty() {
                return Err(Error::parse(n, 1, "trailing tokens after table"));
            }
        }
        Acc::Rabin | Acc::Streett => {
            // pairs: {stay-states | hit-states} ...
            let (n, v) = lines.expect_field("pairs")?;
            let mut rest = v;
            while let Some(open) = rest.find('{') {
                let close = rest[open..]
                    .find('}')
                    .ok_or_else(|| Error::parse(n, open + 1, "unclosed '{' in pairs"))?;
                let body = &rest[open + 1..open + close];
                let (stay_part, hit_part) = body
                    .split_once('|')
                    .ok_or_else(|| Error::parse(n, open + 1, "pair lacks a '|' separator"))?;
                let mut pair = crate::graph::LoopPair {
                    stay: vec![false; num_states],
                    hit: vec![false; num_states],
                };
                for tok in stay_part.split_whitespace() {
                    pair.stay[parse_state(n, tok, num_states)?] = true;
                }
                for tok in hit_part.split_whitespace() {
                    pair.hit[parse_state(n, tok, num_states)?] = true;
                }
                pairs.push(pair);
                rest = &rest[open + close + 1..];
            }
            if !rest.trim().is_empty() {
                return Err(Error::parse(n, 1, "trailing tokens after pairs"));
            }
        }
        _ => {
            let (n, v) = lines.expect_field("finals")?;
            for tok in v.split_whitespace() {
                finals.push(parse_state(n, tok, num_states)?);
            }
        }
    }

    let mut transitions: Vec<(usize, StateId, char, StateId)> = Vec::new();
    while let Some((n, l)) = lines.next() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::parse(n, 1, "expected 'src sym dst'"));
        }
        let src = parse_state(n, toks[0], num_states)?;
        let mut chars = toks[1].chars();
        let sym = chars.next().unwrap();
        if chars.next().is_some() {
            return Err(Error::parse(n, 1, format!("symbol '{}' is not a single character", toks[1])));
        }
        if !alphabet.contains(sym) {
            return Err(Error::parse(n, 1, format!("symbol '{sym}' is not in the alphabet")));
        }
        let dst = parse_state(n, toks[2], num_states)?;
        transitions.push((n, src, sym, dst));
    }

    match acc {
        Acc::Finals(mode) => {
            let mut a = BuchiAutomaton::new(alphabet, num_states, initial, mode)?;
            for (_, src, sym, dst) in transitions {
                a.add_transition(src, sym, dst)?;
            }
            for s in finals {
                a.set_final(s, true);
            }
            if mode == AcceptanceMode::CoBuchi {
                a.validate().map_err(|e| Error::parse(accline, 1, e.to_string()))?;
            }
            Ok(Automaton::Buchi(a))
        }
        Acc::Finite => {
            let mut a = FiniteAutomaton::new(alphabet, num_states, initial)?;
            for (_, src, sym, dst) in transitions {
                a.add_transition(src, sym, dst)?;
            }
            for s in finals {
                a.set_final(s, true);
            }
            Ok(Automaton::Finite(a))
        }
        Acc::Table | Acc::Rabin | Acc::Streett => {
            let k = alphabet.len();
            let mut delta = vec![vec![usize::MAX; k]; num_states];
            for (n, src, sym, dst) in transitions {
                let idx = alphabet.index_of(sym)?;
                if delta[src][idx] != usize::MAX {
                    return Err(Error::parse(n, 1, "duplicate transition in a Muller automaton"));
                }
                delta[src][idx] = dst;
            }
            for (s, row) in delta.iter().enumerate() {
                if let Some(idx) = row.iter().position(|&t| t == usize::MAX) {
                    return Err(Error::parse(
                        accline,
                        1,
                        format!("state {s} lacks a transition on '{}'", alphabet.symbol(idx)),
                    ));
                }
            }
            let acceptance = match acc {
                Acc::Table => MullerAcceptance::Table(table),
                Acc::Rabin => MullerAcceptance::Rabin(pairs),
                _ => MullerAcceptance::Streett(pairs),
            };
            Ok(Automaton::Muller(MullerAutomaton::with_acceptance(
                alphabet, delta, initial, acceptance,
            )?))
        }
    }
}

/// Emits the native `.oaut` format.
pub fn emit_oaut(a: &Automaton) -> String {
    let mut out = String::new();
    let alphabet = a.alphabet();
    let symbols: Vec<String> = alphabet.symbols().iter().map(|c| c.to_string()).collect();
    writeln!(out, "alphabet: {}", symbols.join(" ")).unwrap();
    match a {
        Automaton::Buchi(b) => {
            writeln!(out, "states: {}", b.num_states()).unwrap();
            writeln!(out, "initial: {}", b.initial()).unwrap();
            let mode = match b.mode() {
                AcceptanceMode::Buchi => "buchi",
                AcceptanceMode::CoBuchi => "cobuchi",
            };
            writeln!(out, "acceptance: {mode}").unwrap();
            let finals: Vec<String> = b.finals().map(|s| s.to_string()).collect();
            writeln!(out, "finals: {}", finals.join(" ")).unwrap();
            for s in 0..b.num_states() {
                for (i, &c) in alphabet.symbols().iter().enumerate() {
                    for &t in b.successors(s, i) {
                        writeln!(out, "{s} {c} {t}").unwrap();
                    }
                }
            }
        }
        Automaton::Muller(m) => {
            writeln!(out, "states: {}", m.num_states()).unwrap();
            writeln!(out, "initial: {}", m.initial()).unwrap();
            let ids = |mask: &[bool]| -> String {
                let v: Vec<String> = mask
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| b)
                    .map(|(s, _)| s.to_string())
                    .collect();
                v.join(" ")
            };
            match m.acceptance() {
                MullerAcceptance::Table(table) => {
                    writeln!(out, "acceptance: muller").unwrap();
                    let sets: Vec<String> = table
                        .iter()
                        .map(|set| {
                            let v: Vec<String> = set.iter().map(|s| s.to_string()).collect();
                            format!("{{{}}}", v.join(" "))
                        })
                        .collect();
                    writeln!(out, "table: {}", sets.join(" ")).unwrap();
                }
                MullerAcceptance::Rabin(pairs) | MullerAcceptance::Streett(pairs) => {
                    let kind = if matches!(m.acceptance(), MullerAcceptance::Rabin(_)) {
                        "rabin"
                    } else {
                        "streett"
                    };
                    writeln!(out, "acceptance: {kind}").unwrap();
                    let sets: Vec<String> = pairs
                        .iter()
                        .map(|p| format!("{{{} | {}}}", ids(&p.stay), ids(&p.hit)))
                        .collect();
                    writeln!(out, "pairs: {}", sets.join(" ")).unwrap();
                }
            }
            for s in 0..m.num_states() {
                for (i, &c) in alphabet.symbols().iter().enumerate() {
                    writeln!(out, "{s} {c} {}", m.successor(s, i)).unwrap();
                }
            }
        }
        Automaton::Finite(f) => {
            writeln!(out, "states: {}", f.num_states()).unwrap();
            writeln!(out, "initial: {}", f.initial()).unwrap();
            writeln!(out, "acceptance: finite").unwrap();
            let finals: Vec<String> = (0..f.num_states())
                .filter(|&s| f.is_final(s))
                .map(|s| s.to_string())
                .collect();
            writeln!(out, "finals: {}", finals.join(" ")).unwrap();
            for s in 0..f.num_states() {
                for (i, &c) in alphabet.symbols().iter().enumerate() {
                    for &t in f.successors(s, i) {
                        writeln!(out, "{s} {c} {t}").unwrap();
                    }
                }
            }
        }
    }
    out
}

/// Parses the `.otrans` transducer format.
pub fn parse_otrans(text: &str) -> Result<TwoTapeTransducer> {
    let mut lines = Lines::new(text);
    let (n, v) = lines.expect_field("input")?;
    let input_alphabet = parse_alphabet(n, v)?;
    let (n, v) = lines.expect_field("output")?;
    let output_alphabet = parse_alphabet(n, v)?;
    let (n, v) = lines.expect_field("states")?;
    let num_states = parse_number(n, v, "state count")?;
    let (n, v) = lines.expect_field("initial")?;
    let initial = parse_state(n, v, num_states)?;
    let (n, v) = lines.expect_field("finals")?;
    let mut finals = Vec::new();
    for tok in v.split_whitespace() {
        finals.push(parse_state(n, tok, num_states)?);
    }
    let (n, v) = lines.expect_field("synchronous")?;
    let synchronous = match v {
        "yes" => true,
        "no" => false,
        other => return Err(Error::parse(n, 1, format!("expected yes|no, found '{other}'"))),
    };

    let mut t = TwoTapeTransducer::new(input_alphabet, output_alphabet, num_states, initial, synchronous)?;
    for s in finals {
        t.set_final(s, true);
    }
    while let Some((n, l)) = lines.next() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::parse(n, 1, "expected 'src u|v dst'"));
        }
        let src = parse_state(n, toks[0], num_states)?;
        let (u, v) = toks[1]
            .split_once('|')
            .ok_or_else(|| Error::parse(n, 1, "label must be 'u|v'"))?;
        let word = |w: &str| -> Vec<char> {
            if w == "-" {
                Vec::new()
            } else {
                w.chars().collect()
            }
        };
        let dst = parse_state(n, toks[2], num_states)?;
        t.add_transition(src, word(u), word(v), dst)
            .map_err(|e| Error::parse(n, 1, e.to_string()))?;
    }
    Ok(t)
}

/// Emits the `.otrans` transducer format.
pub fn emit_otrans(t: &TwoTapeTransducer) -> String {
    let mut out = String::new();
    let syms = |a: &Alphabet| {
        a.symbols()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "input: {}", syms(t.input_alphabet())).unwrap();
    writeln!(out, "output: {}", syms(t.output_alphabet())).unwrap();
    writeln!(out, "states: {}", t.num_states()).unwrap();
    writeln!(out, "initial: {}", t.initial()).unwrap();
    let finals: Vec<String> = (0..t.num_states())
        .filter(|&s| t.is_final(s))
        .map(|s| s.to_string())
        .collect();
    writeln!(out, "finals: {}", finals.join(" ")).unwrap();
    writeln!(out, "synchronous: {}", if t.synchronous() { "yes" } else { "no" }).unwrap();
    let word = |w: &[char]| {
        if w.is_empty() {
            "-".to_string()
        } else {
            w.iter().collect()
        }
    };
    for tr in t.transitions() {
        writeln!(out, "{} {}|{} {}", tr.src, word(&tr.input), word(&tr.output), tr.dst).unwrap();
    }
    out
}

// --- HOA ------------------------------------------------------------------

/// Emits a state-based Buchi automaton as HOA v1. Each alphabet symbol
/// becomes one atomic proposition and edge labels are the one-hot conjunction
/// selecting it.
pub fn emit_hoa(a: &BuchiAutomaton) -> Result<String> {
    if a.mode() != AcceptanceMode::Buchi {
        return Err(Error::Precondition("Buchi acceptance for HOA export".into()));
    }
    let k = a.alphabet().len();
    let mut out = String::new();
    writeln!(out, "HOA: v1").unwrap();
    writeln!(out, "States: {}", a.num_states()).unwrap();
    writeln!(out, "Start: {}", a.initial()).unwrap();
    let names: Vec<String> = a.alphabet().symbols().iter().map(|c| format!("\"{c}\"")).collect();
    writeln!(out, "AP: {} {}", k, names.join(" ")).unwrap();
    writeln!(out, "acc-name: Buchi").unwrap();
    writeln!(out, "Acceptance: 1 Inf(0)").unwrap();
    writeln!(out, "--BODY--").unwrap();
    for s in 0..a.num_states() {
        if a.is_final(s) {
            writeln!(out, "State: {s} {{0}}").unwrap();
        } else {
            writeln!(out, "State: {s}").unwrap();
        }
        for sym in 0..k {
            let label: Vec<String> = (0..k)
                .map(|i| if i == sym { format!("{i}") } else { format!("!{i}") })
                .collect();
            for &t in a.successors(s, sym) {
                writeln!(out, "[{}] {t}", label.join("&")).unwrap();
            }
        }
    }
    writeln!(out, "--END--").unwrap();
    Ok(out)
}

/// Parses the HOA dialect produced by [`emit_hoa`]: state-based Buchi
/// acceptance, one-hot single-character propositions.
pub fn parse_hoa(text: &str) -> Result<BuchiAutomaton> {
    let mut num_states = None;
    let mut start = None;
    let mut aps: Vec<char> = Vec::new();
    let mut body = Vec::new();
    let mut in_body = false;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "--BODY--" {
            in_body = true;
            continue;
        }
        if line == "--END--" {
            break;
        }
        if in_body {
            body.push((n, line));
            continue;
        }
        if let Some(v) = line.strip_prefix("States:") {
            num_states = Some(parse_number(n, v.trim(), "state count")?);
        } else if let Some(v) = line.strip_prefix("Start:") {
            start = Some(parse_number(n, v.trim(), "start state")?);
        } else if let Some(v) = line.strip_prefix("AP:") {
            let toks: Vec<&str> = v.split_whitespace().collect();
            let count = parse_number(n, toks.first().copied().unwrap_or(""), "AP count")?;
            if toks.len() != count + 1 {
                return Err(Error::parse(n, 1, "AP count does not match the names given"));
            }
            for name in &toks[1..] {
                let inner = name.trim_matches('"');
                let mut chars = inner.chars();
                let c = chars
                    .next()
                    .ok_or_else(|| Error::parse(n, 1, "empty AP name"))?;
                if chars.next().is_some() {
                    return Err(Error::parse(n, 1, format!("AP name '{inner}' is not a single character")));
                }
                aps.push(c);
            }
        } else if let Some(v) = line.strip_prefix("Acceptance:") {
            if v.trim() != "1 Inf(0)" {
                return Err(Error::parse(n, 1, "only 'Acceptance: 1 Inf(0)' is supported"));
            }
        } else if line.starts_with("HOA:") || line.starts_with("acc-name:") {
            // accepted and ignored
        } else {
            return Err(Error::parse(n, 1, format!("unsupported HOA header '{line}'")));
        }
    }
    let num_states = num_states.ok_or_else(|| Error::parse(1, 1, "missing 'States:' header"))?;
    let start = start.ok_or_else(|| Error::parse(1, 1, "missing 'Start:' header"))?;
    let alphabet = Alphabet::new(aps.clone())?;
    let mut a = BuchiAutomaton::new(alphabet, num_states, start, AcceptanceMode::Buchi)?;

    let mut current: Option<StateId> = None;
    for (n, line) in body {
        if let Some(v) = line.strip_prefix("State:") {
            let v = v.trim();
            let (id_part, acc_part) = match v.split_once('{') {
                Some((l, r)) => (l.trim(), Some(r)),
                None => (v, None),
            };
            let s = parse_state(n, id_part, num_states)?;
            if let Some(acc) = acc_part {
                let acc = acc.trim_end_matches('}').trim();
                if acc != "0" {
                    return Err(Error::parse(n, 1, "only acceptance set 0 is supported"));
                }
                a.set_final(s, true);
            }
            current = Some(s);
            continue;
        }
        let Some(src) = current else {
            return Err(Error::parse(n, 1, "edge before any 'State:' line"));
        };
        let rest = line
            .strip_prefix('[')
            .ok_or_else(|| Error::parse(n, 1, "expected '[label] dst'"))?;
        let (label, dst_part) = rest
            .split_once(']')
            .ok_or_else(|| Error::parse(n, 1, "unclosed '[' in edge label"))?;
        // the label must be the one-hot conjunction for exactly one symbol
        let mut positive = None;
        for (i, lit) in label.split('&').enumerate() {
            let lit = lit.trim();
            if let Some(v) = lit.strip_prefix('!') {
                if parse_number(n, v, "AP index")? != i {
                    return Err(Error::parse(n, 1, "label is not a one-hot conjunction"));
                }
            } else {
                if parse_number(n, lit, "AP index")? != i || positive.is_some() {
                    return Err(Error::parse(n, 1, "label is not a one-hot conjunction"));
                }
                positive = Some(i);
            }
        }
        let sym = positive.ok_or_else(|| Error::parse(n, 1, "label selects no symbol"))?;
        let dst = parse_state(n, dst_part.trim(), num_states)?;
        a.add_transition_idx(src, sym, dst)?;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership;
    use crate::word::UPWord;

    #[test]
    fn oaut_roundtrip_buchi() {
        let text = "alphabet: a b\nstates: 2\ninitial: 0\nacceptance: buchi\nfinals: 1\n0 a 0\n0 b 1\n1 b 1\n";
        let a = parse_oaut(text).unwrap().expect_buchi().unwrap();
        assert!(membership::member_buchi(&a, &UPWord::parse("a(b)").unwrap()).unwrap());
        let emitted = emit_oaut(&Automaton::Buchi(a.clone()));
        let b = parse_oaut(&emitted).unwrap().expect_buchi().unwrap();
        assert_eq!(emit_oaut(&Automaton::Buchi(b)), emitted);
    }

    #[test]
    fn oaut_roundtrip_muller() {
        let text = "alphabet: a b\nstates: 2\ninitial: 0\nacceptance: muller\ntable: {0} {0 1}\n0 a 0\n0 b 1\n1 a 0\n1 b 1\n";
        let Automaton::Muller(m) = parse_oaut(text).unwrap() else {
            panic!("expected a Muller automaton");
        };
        let emitted = emit_oaut(&Automaton::Muller(m.clone()));
        let again = parse_oaut(&emitted).unwrap();
        assert_eq!(emit_oaut(&again), emitted);
    }

    #[test]
    fn oaut_roundtrip_pairs() {
        let text = "alphabet: a b\nstates: 2\ninitial: 0\nacceptance: rabin\npairs: {0 1 | 0} {1 | 1}\n0 a 0\n0 b 1\n1 a 0\n1 b 1\n";
        let Automaton::Muller(m) = parse_oaut(text).unwrap() else {
            panic!("expected a Muller automaton");
        };
        // pair 0 designates every loop through state 0
        assert!(membership::member_muller(&m, &UPWord::parse("(a)").unwrap()).unwrap());
        assert!(membership::member_muller(&m, &UPWord::parse("(b)").unwrap()).unwrap());
        let emitted = emit_oaut(&Automaton::Muller(m.clone()));
        let Automaton::Muller(again) = parse_oaut(&emitted).unwrap() else {
            panic!("expected a Muller automaton");
        };
        assert_eq!(again, m);
    }

    #[test]
    fn oaut_errors_carry_position() {
        let bad = "alphabet: a b\nstates: 2\ninitial: 5\nacceptance: buchi\nfinals:\n";
        match parse_oaut(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let bad = "alphabet: a b\nstates: 1\ninitial: 0\nacceptance: buchi\nfinals: 0\n0 c 0\n";
        match parse_oaut(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn otrans_roundtrip() {
        let text = "input: a b\noutput: a b\nstates: 2\ninitial: 0\nfinals: 1\nsynchronous: no\n0 ab|- 1\n1 a|ba 1\n1 -|b 0\n";
        let t = parse_otrans(text).unwrap();
        assert_eq!(t.transitions().len(), 3);
        let emitted = emit_otrans(&t);
        let again = parse_otrans(&emitted).unwrap();
        assert_eq!(emit_otrans(&again), emitted);
    }

    #[test]
    fn hoa_roundtrip() {
        // deterministic "infinitely many a" machine
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(0, true);
        let hoa = emit_hoa(&a).unwrap();
        let b = parse_hoa(&hoa).unwrap();
        for lit in ["(a)", "(ab)", "(b)", "ab(b)"] {
            let w = UPWord::parse(lit).unwrap();
            assert_eq!(
                membership::member_buchi(&a, &w).unwrap(),
                membership::member_buchi(&b, &w).unwrap(),
                "{lit}"
            );
        }
    }
}
