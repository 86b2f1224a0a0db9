//! Two-tape Buchi transducers over infinite words, the rational relations
//! they define, and the restriction construction that carves out a dense
//! Pi-0-2 set on which an omega-rational function is continuous.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::Alphabet;
use crate::automaton::{AcceptanceMode, BuchiAutomaton, FiniteAutomaton, StateId};
use crate::baire;
use crate::determinize;
use crate::error::{Error, Result};
use crate::graph;
use crate::membership::{self, LassoShape};
use crate::ops;
use crate::topology;
use crate::word::UPWord;

/// Per-prefix certificate data is recorded for output prefixes up to this
/// length; the global error set already aggregates every prefix, so the cap
/// affects diagnostics only.
pub const CERT_PREFIX_MAX: usize = 3;

/// Cap on the deterministic obligation machine built for the restriction set.
pub const OBLIGATION_STATE_CAP: usize = 100_000;

/// One transition of a two-tape transducer: reads a finite input word and a
/// finite output word in a single step (either may be empty).
#[derive(Debug, Clone)]
pub struct Transition {
    pub src: StateId,
    pub input: Vec<char>,
    pub output: Vec<char>,
    pub dst: StateId,
}

/// Buchi automaton over pairs of finite words, defining an infinitary
/// rational relation: a pair of infinite words is related iff some run
/// consuming both entirely visits a final state infinitely often.
#[derive(Debug, Clone)]
pub struct TwoTapeTransducer {
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    num_states: usize,
    initial: StateId,
    finals: Vec<bool>,
    transitions: Vec<Transition>,
    synchronous: bool,
}

impl TwoTapeTransducer {
    pub fn new(
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        num_states: usize,
        initial: StateId,
        synchronous: bool,
    ) -> Result<Self> {
        if initial >= num_states {
            return Err(Error::InvalidState(initial));
        }
        Ok(TwoTapeTransducer {
            input_alphabet,
            output_alphabet,
            num_states,
            initial,
            finals: vec![false; num_states],
            transitions: Vec::new(),
            synchronous,
        })
    }

    pub fn add_transition(
        &mut self,
        src: StateId,
        input: impl IntoIterator<Item = char>,
        output: impl IntoIterator<Item = char>,
        dst: StateId,
    ) -> Result<()> {
        if src >= self.num_states {
            return Err(Error::InvalidState(src));
        }
        if dst >= self.num_states {
            return Err(Error::InvalidState(dst));
        }
        let input: Vec<char> = input.into_iter().collect();
        let output: Vec<char> = output.into_iter().collect();
        for &c in &input {
            if !self.input_alphabet.contains(c) {
                return Err(Error::SymbolOutsideAlphabet(c));
            }
        }
        for &c in &output {
            if !self.output_alphabet.contains(c) {
                return Err(Error::SymbolOutsideAlphabet(c));
            }
        }
        if self.synchronous && (input.len() != 1 || output.len() != 1) {
            return Err(Error::Malformed(
                "synchronous transducer requires one-letter label pairs".into(),
            ));
        }
        self.transitions.push(Transition { src, input, output, dst });
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn synchronous(&self) -> bool {
        self.synchronous
    }

    /// Same machine started from a different state.
    pub fn with_initial(&self, q: StateId) -> Result<TwoTapeTransducer> {
        if q >= self.num_states {
            return Err(Error::InvalidState(q));
        }
        let mut t = self.clone();
        t.initial = q;
        Ok(t)
    }

    /// Tapes exchanged: the converse relation.
    pub fn swapped(&self) -> TwoTapeTransducer {
        TwoTapeTransducer {
            input_alphabet: self.output_alphabet.clone(),
            output_alphabet: self.input_alphabet.clone(),
            num_states: self.num_states,
            initial: self.initial,
            finals: self.finals.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    src: t.src,
                    input: t.output.clone(),
                    output: t.input.clone(),
                    dst: t.dst,
                })
                .collect(),
            synchronous: self.synchronous,
        }
    }
}

/// A pair of ultimately periodic words, candidate element of a relation.
#[derive(Debug, Clone)]
pub struct UPWordPair {
    pub input: UPWord,
    pub output: UPWord,
}

fn word_matches(shape: &LassoShape, word: &UPWord, mut pos: usize, label: &[char]) -> Option<usize> {
    for &c in label {
        if word.at(pos) != c {
            return None;
        }
        pos = shape.next(pos);
    }
    Some(pos)
}

/// Does the pair belong to the relation? Decided by a lasso search over the
/// configuration graph (state, input phase, output phase): an accepting run
/// exists iff some reachable SCC contains a final-state node, an edge that
/// consumes input, and an edge that consumes output.
pub fn relation_membership(t: &TwoTapeTransducer, p: &UPWordPair) -> Result<bool> {
    p.input.check_alphabet(&t.input_alphabet)?;
    p.output.check_alphabet(&t.output_alphabet)?;
    let xs = LassoShape::of(&p.input);
    let ys = LassoShape::of(&p.output);
    let (pi, po) = (xs.len(), ys.len());
    let total = t.num_states * pi * po;
    let id = |s: StateId, i: usize, j: usize| (s * pi + i) * po + j;

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    // edge flags parallel to adj: (consumed input, consumed output)
    let mut flags: Vec<Vec<(bool, bool)>> = vec![Vec::new(); total];
    for tr in &t.transitions {
        for i in 0..pi {
            let Some(i2) = word_matches(&xs, &p.input, i, &tr.input) else {
                continue;
            };
            for j in 0..po {
                let Some(j2) = word_matches(&ys, &p.output, j, &tr.output) else {
                    continue;
                };
                adj[id(tr.src, i, j)].push(id(tr.dst, i2, j2));
                flags[id(tr.src, i, j)].push((!tr.input.is_empty(), !tr.output.is_empty()));
            }
        }
    }
    let reach = graph::reachable(&adj, id(t.initial, 0, 0));
    for scc in graph::sccs(&adj) {
        if !scc.iter().any(|&v| reach[v]) {
            continue;
        }
        let inside: BTreeSet<usize> = scc.iter().copied().collect();
        let has_final = scc.iter().any(|&v| t.finals[v / (pi * po)]);
        let mut has_in = false;
        let mut has_out = false;
        for &v in &scc {
            for (e, &w) in adj[v].iter().enumerate() {
                if inside.contains(&w) {
                    has_in |= flags[v][e].0;
                    has_out |= flags[v][e].1;
                }
            }
        }
        // one cycle can thread the final node and both kinds of progress edge
        if has_final && has_in && has_out && graph::is_loop(&adj, &inside) {
            return Ok(true);
        }
    }
    Ok(false)
}

// --- single-tape projections ---------------------------------------------

/// Input projection of the transition graph, expanded to single-letter edges.
/// Node ids 0..num_states are the transducer's own states; the rest are
/// chain intermediates. `out_progress` marks edges whose originating
/// transition wrote at least one output letter.
struct SplitGraph {
    nodes: usize,
    eps: Vec<Vec<(usize, bool)>>,
    letter: Vec<Vec<(usize, usize, bool)>>,
}

fn split_input(t: &TwoTapeTransducer) -> Result<SplitGraph> {
    let mut g = SplitGraph {
        nodes: t.num_states,
        eps: vec![Vec::new(); t.num_states],
        letter: vec![Vec::new(); t.num_states],
    };
    for tr in &t.transitions {
        let op = !tr.output.is_empty();
        if tr.input.is_empty() {
            g.eps[tr.src].push((tr.dst, op));
            continue;
        }
        let mut cur = tr.src;
        for (i, &c) in tr.input.iter().enumerate() {
            let sym = t.input_alphabet.index_of(c)?;
            let nxt = if i + 1 == tr.input.len() {
                tr.dst
            } else {
                g.eps.push(Vec::new());
                g.letter.push(Vec::new());
                g.nodes += 1;
                g.nodes - 1
            };
            // output progress is charged to the first letter of the chain
            g.letter[cur].push((sym, nxt, op && i == 0));
            cur = nxt;
        }
    }
    Ok(g)
}

/// Domain of the relation: inputs admitting some related infinite output.
/// Projection plus epsilon elimination; acceptance demands final states and
/// output progress both infinitely often, so runs that starve the output
/// tape are excluded.
pub fn dom(t: &TwoTapeTransducer) -> Result<BuchiAutomaton> {
    let g = split_input(t)?;
    let is_final = |node: usize| node < t.num_states && t.finals[node];
    // generalized acceptance folded into a phase bit: phase 0 awaits a final
    // node, phase 1 awaits an output-progress edge; a wrap is one accept.
    let total = g.nodes * 2;
    let pid = |node: usize, phase: usize| node * 2 + phase;

    // epsilon closure over phased nodes, tracking accepts and finals passed
    // strictly after the starting node
    let step_eps = |node: usize, phase: usize| -> Vec<(usize, usize, bool)> {
        g.eps[node]
            .iter()
            .map(|&(dst, op)| {
                let mut ph = phase;
                if ph == 0 && is_final(node) {
                    ph = 1;
                }
                let mut acc = false;
                if ph == 1 && op {
                    ph = 0;
                    acc = true;
                }
                (dst, ph, acc)
            })
            .collect()
    };
    let step_letter = |node: usize, phase: usize, sym: usize| -> Vec<(usize, usize, bool)> {
        g.letter[node]
            .iter()
            .filter(|&&(s, _, _)| s == sym)
            .map(|&(_, dst, op)| {
                let mut ph = phase;
                if ph == 0 && is_final(node) {
                    ph = 1;
                }
                let mut acc = false;
                if ph == 1 && op {
                    ph = 0;
                    acc = true;
                }
                (dst, ph, acc)
            })
            .collect()
    };

    // eliminate epsilon edges: new states (phased node, accepted-on-arrival)
    let mut out = BuchiAutomaton::new(
        t.input_alphabet.clone(),
        total * 2,
        pid(t.initial, 0) * 2,
        AcceptanceMode::Buchi,
    )?;
    for node in 0..g.nodes {
        for phase in 0..2 {
            // closure with an accumulated accept flag per reached pair
            let mut seen: BTreeSet<(usize, usize, bool)> = BTreeSet::new();
            let mut queue: VecDeque<(usize, usize, bool)> = VecDeque::new();
            queue.push_back((node, phase, false));
            seen.insert((node, phase, false));
            let mut targets: BTreeSet<(usize, usize, usize, bool)> = BTreeSet::new();
            while let Some((n, ph, acc)) = queue.pop_front() {
                for sym in 0..t.input_alphabet.len() {
                    for (dst, ph2, acc2) in step_letter(n, ph, sym) {
                        targets.insert((sym, dst, ph2, acc || acc2));
                    }
                }
                for (dst, ph2, acc2) in step_eps(n, ph) {
                    let entry = (dst, ph2, acc || acc2);
                    if seen.insert(entry) {
                        queue.push_back(entry);
                    }
                }
            }
            for b in 0..2 {
                let src = pid(node, phase) * 2 + b;
                for &(sym, dst, ph2, acc) in &targets {
                    out.add_transition_idx(src, sym, pid(dst, ph2) * 2 + usize::from(acc))?;
                }
            }
        }
    }
    for node in 0..g.nodes {
        for phase in 0..2 {
            out.set_final(pid(node, phase) * 2 + 1, true);
        }
    }
    ops::trim(&out)
}

/// Image of the relation: the domain of the converse.
pub fn im(t: &TwoTapeTransducer) -> Result<BuchiAutomaton> {
    dom(&t.swapped())
}

// --- evaluation -----------------------------------------------------------

/// Apply a functional transducer to an input lasso and read the unique
/// output off an accepting lasso of the input-restricted configuration
/// graph. Distinct outputs across accepting components raise an error, as
/// does an accepting run that writes only finitely many letters.
pub fn evaluate(t: &TwoTapeTransducer, x: &UPWord) -> Result<UPWord> {
    x.check_alphabet(&t.input_alphabet)?;
    let xs = LassoShape::of(x);
    let pi = xs.len();
    let total = t.num_states * pi;
    let id = |s: StateId, i: usize| s * pi + i;

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    // parallel edge labels: (output word, consumed input)
    let mut labels: Vec<Vec<(&[char], bool)>> = vec![Vec::new(); total];
    for tr in &t.transitions {
        for i in 0..pi {
            if let Some(i2) = word_matches(&xs, x, i, &tr.input) {
                adj[id(tr.src, i)].push(id(tr.dst, i2));
                labels[id(tr.src, i)].push((&tr.output, !tr.input.is_empty()));
            }
        }
    }
    let start = id(t.initial, 0);
    let reach = graph::reachable(&adj, start);

    let mut result: Option<UPWord> = None;
    let mut starved = false;
    for scc in graph::sccs(&adj) {
        if !scc.iter().any(|&v| reach[v]) {
            continue;
        }
        let inside: BTreeSet<usize> = scc.iter().copied().collect();
        if !graph::is_loop(&adj, &inside) {
            continue;
        }
        let Some(&anchor) = scc.iter().find(|&&v| t.finals[v / pi]) else {
            continue;
        };
        let mut in_edge = None;
        let mut out_edge = None;
        for &v in &scc {
            for (e, &w) in adj[v].iter().enumerate() {
                if inside.contains(&w) {
                    if labels[v][e].1 && in_edge.is_none() {
                        in_edge = Some((v, e));
                    }
                    if !labels[v][e].0.is_empty() && out_edge.is_none() {
                        out_edge = Some((v, e));
                    }
                }
            }
        }
        let Some(in_edge) = in_edge else { continue };
        let Some(out_edge) = out_edge else {
            starved = true;
            continue;
        };
        // cycle: anchor -> in-edge -> out-edge -> anchor, outputs collected
        let mut period: Vec<char> = Vec::new();
        let mut cur = anchor;
        for (v, e) in [in_edge, out_edge] {
            period.extend(path_outputs(&adj, &labels, Some(&inside), cur, v));
            period.extend_from_slice(labels[v][e].0);
            cur = adj[v][e];
        }
        period.extend(path_outputs(&adj, &labels, Some(&inside), cur, anchor));
        let prefix = path_outputs(&adj, &labels, None, start, anchor);
        let y = UPWord::new(prefix, period)?;
        match &result {
            None => result = Some(y),
            Some(prev) if prev.same_word(&y) => {}
            Some(_) => return Err(Error::NonFunctional),
        }
    }
    match result {
        Some(y) => Ok(y),
        None if starved => Err(Error::NonOmegaOutput),
        None => Err(Error::OutsideDomain),
    }
}

/// BFS path, outputs concatenated; `within` restricts intermediate nodes.
fn path_outputs(
    adj: &[Vec<usize>],
    labels: &[Vec<(&[char], bool)>],
    within: Option<&BTreeSet<usize>>,
    from: usize,
    to: usize,
) -> Vec<char> {
    if from == to {
        return Vec::new();
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    queue.push_back(from);
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for (e, &w) in adj[v].iter().enumerate() {
            if let Some(set) = within {
                if !set.contains(&w) {
                    continue;
                }
            }
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    let mut rev: Vec<&[char]> = Vec::new();
    let mut cur = to;
    while cur != from {
        let (v, e) = prev[cur].expect("path exists inside a strongly connected set");
        rev.push(labels[v][e].0);
        cur = v;
    }
    rev.iter().rev().flat_map(|w| w.iter().copied()).collect()
}

// --- functionality --------------------------------------------------------

/// Is the relation a partial function? Synchronous transducers only: the
/// self-product over a shared input carries a sticky divergence flag set
/// when the two copies emit different letters, and the relation is
/// non-functional iff the diverged region admits a doubly accepting lasso.
pub fn functionality_check_sync(t: &TwoTapeTransducer) -> Result<bool> {
    if !t.synchronous {
        return Err(Error::Precondition(
            "a synchronous transducer for the functionality check".into(),
        ));
    }
    let n = t.num_states;
    // state: ((s1 * n + s2) * 2 + div) * 2 + phase
    let id = |s1: usize, s2: usize, d: usize, ph: usize| ((s1 * n + s2) * 2 + d) * 2 + ph;
    let mut a = BuchiAutomaton::new(
        t.input_alphabet.clone(),
        n * n * 4,
        id(t.initial, t.initial, 0, 0),
        AcceptanceMode::Buchi,
    )?;
    for t1 in &t.transitions {
        for t2 in &t.transitions {
            if t1.input != t2.input {
                continue;
            }
            let split = usize::from(t1.output != t2.output);
            for d in 0..2 {
                let d2 = d | split;
                for ph in 0..2 {
                    // phase 0 awaits a diverged final in the first copy,
                    // phase 1 one in the second; a wrap marks acceptance
                    let cond = if ph == 0 {
                        d == 1 && t.finals[t1.src]
                    } else {
                        d == 1 && t.finals[t2.src]
                    };
                    let ph2 = if cond { 1 - ph } else { ph };
                    let sym = t.input_alphabet.index_of(t1.input[0])?;
                    a.add_transition_idx(id(t1.src, t2.src, d, ph), sym, id(t1.dst, t2.dst, d2, ph2))?;
                }
            }
        }
    }
    for s1 in 0..n {
        for s2 in 0..n {
            if t.finals[s2] {
                a.set_final(id(s1, s2, 1, 1), true);
            }
        }
    }
    Ok(membership::is_empty_buchi(&a))
}

// --- finite behaviors and preimages ---------------------------------------

/// Finite-word pair behavior up to a state: the transducer reinterpreted
/// with unique accepting state `q` under finite semantics, together with the
/// input projection of those partial computations.
pub fn finite_behavior(t: &TwoTapeTransducer, q: StateId) -> Result<(TwoTapeTransducer, FiniteAutomaton)> {
    if q >= t.num_states {
        return Err(Error::InvalidState(q));
    }
    let mut b = t.clone();
    b.finals = vec![false; t.num_states];
    b.finals[q] = true;
    let g = split_input(t)?;
    let mut finals = vec![false; g.nodes];
    finals[q] = true;
    let c = eliminate_eps_finite(&t.input_alphabet, &g, t.initial, &finals)?;
    Ok((b, c))
}

/// Finite-word epsilon elimination over a split graph.
fn eliminate_eps_finite(
    alphabet: &Alphabet,
    g: &SplitGraph,
    initial: usize,
    finals: &[bool],
) -> Result<FiniteAutomaton> {
    let closure = |start: usize| -> Vec<usize> {
        let mut seen = vec![false; g.nodes];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        let mut out = vec![start];
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &g.eps[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    };
    let mut out = FiniteAutomaton::new(alphabet.clone(), g.nodes, initial)?;
    for v in 0..g.nodes {
        let mut is_final = false;
        for w in closure(v) {
            is_final |= finals[w];
            for &(sym, dst, _) in &g.letter[w] {
                out.add_transition_idx(v, sym, dst)?;
            }
        }
        out.set_final(v, is_final);
    }
    Ok(out)
}

/// Finite input words whose partial computation from the initial state ends
/// in `q` having written exactly `u` — transitions are atomic, so the last
/// transition must land precisely on the end of `u`.
pub fn exact_output_reader(t: &TwoTapeTransducer, u: &[char], q: StateId) -> Result<FiniteAutomaton> {
    if q >= t.num_states {
        return Err(Error::InvalidState(q));
    }
    for &c in u {
        if !t.output_alphabet.contains(c) {
            return Err(Error::SymbolOutsideAlphabet(c));
        }
    }
    let m = u.len();
    // nodes (transducer state, output position) plus input chain intermediates
    let base = t.num_states * (m + 1);
    let id = |s: StateId, j: usize| s * (m + 1) + j;
    let mut g = SplitGraph {
        nodes: base,
        eps: vec![Vec::new(); base],
        letter: vec![Vec::new(); base],
    };
    for tr in &t.transitions {
        for j in 0..=m {
            if j + tr.output.len() > m || tr.output.as_slice() != &u[j..j + tr.output.len()] {
                continue;
            }
            let j2 = j + tr.output.len();
            if tr.input.is_empty() {
                g.eps[id(tr.src, j)].push((id(tr.dst, j2), false));
                continue;
            }
            let mut cur = id(tr.src, j);
            for (i, &c) in tr.input.iter().enumerate() {
                let sym = t.input_alphabet.index_of(c)?;
                let nxt = if i + 1 == tr.input.len() {
                    id(tr.dst, j2)
                } else {
                    g.eps.push(Vec::new());
                    g.letter.push(Vec::new());
                    g.nodes += 1;
                    g.nodes - 1
                };
                g.letter[cur].push((sym, nxt, false));
                cur = nxt;
            }
        }
    }
    let mut finals = vec![false; g.nodes];
    finals[id(q, m)] = true;
    eliminate_eps_finite(&t.input_alphabet, &g, id(t.initial, 0), &finals)
}

/// Inputs whose image starts with `u`: for each state q, inputs reading
/// exactly `u` up to q continued by anything in the domain from q.
pub fn preimage_basic(t: &TwoTapeTransducer, u: &[char]) -> Result<BuchiAutomaton> {
    let mut acc = BuchiAutomaton::empty(t.input_alphabet.clone());
    for q in 0..t.num_states {
        let reader = exact_output_reader(t, u, q)?;
        if reader.is_empty() {
            continue;
        }
        let tail = dom(&t.with_initial(q)?)?;
        acc = ops::union(&acc, &ops::concat_left(&reader, &tail)?)?;
    }
    ops::trim(&acc)
}

// --- the continuity restriction ------------------------------------------

/// Certificate for the restriction construction: `g` is a deterministic
/// Buchi automaton for a dense Pi-0-2 set disjoint from the error set, and
/// the function is continuous on it.
#[derive(Debug, Clone)]
pub struct ContinuityCertificate {
    /// Deterministic Buchi automaton for the restriction set G.
    pub g: BuchiAutomaton,
    /// The aggregated error set F, a meager set containing every point of
    /// possible discontinuity.
    pub error_set: BuchiAutomaton,
    pub density_checked: bool,
    pub per_n_data: Vec<PrefixTriple>,
}

/// Diagnostic triple for one output prefix u: the preimage of u followed by
/// anything, its open approximation, and the meager error margin. The
/// symmetric difference of the first two is contained in the third because
/// each per-state decomposition is verified exactly and concatenation and
/// union preserve the inclusion.
#[derive(Debug, Clone)]
pub struct PrefixTriple {
    pub u: Vec<char>,
    pub preimage: BuchiAutomaton,
    pub open_approx: BuchiAutomaton,
    pub error_margin: BuchiAutomaton,
}

struct StateData {
    reader_nonempty: bool,
    open_part: BuchiAutomaton,
    /// Meager error set of this state's domain as a piece union over a
    /// deterministic base machine, if it has any pieces.
    meager: Option<baire::MeagerUnion>,
}

/// Theorem-12 style construction: a dense Pi-0-2 restriction set on which
/// the function realized by `t` is continuous.
pub fn continuity_restriction(t: &TwoTapeTransducer) -> Result<ContinuityCertificate> {
    let mut per_state: Vec<StateData> = Vec::with_capacity(t.num_states);
    for q in 0..t.num_states {
        let (_, c_q) = finite_behavior(t, q)?;
        let reader_nonempty = !c_q.is_empty();
        let domain = dom(&t.with_initial(q)?)?;
        let dec = baire::automatic_baire(&domain)?;
        let meager = (dec.meager_part.num_pieces() > 0).then(|| dec.meager_part.clone());
        per_state.push(StateData {
            reader_nonempty,
            open_part: dec.open_part(),
            meager,
        });
    }

    // F = union over q of (inputs reaching q) . (meager error set at q)
    let mut error_set = BuchiAutomaton::empty(t.input_alphabet.clone());
    for q in 0..t.num_states {
        if !per_state[q].reader_nonempty {
            continue;
        }
        let Some(w) = &per_state[q].meager else { continue };
        let wa = determinize::minimize_det(&w.automaton())?;
        let (_, c_q) = finite_behavior(t, q)?;
        error_set = ops::union(&error_set, &ops::concat_left(&c_q, &ops::cobuchi_to_nba(&wa)?)?)?;
    }
    error_set = ops::trim(&error_set)?;

    let g = restriction_automaton(t, &per_state)?;

    // fail closed on every certificate obligation
    if !topology::is_dense(&g)? {
        return Err(Error::Construction(
            "restriction set is not dense; the error set should be meager".into(),
        ));
    }
    if !membership::is_empty_buchi(&ops::intersection(&g, &error_set)?) {
        return Err(Error::Construction(
            "restriction set meets the error set".into(),
        ));
    }

    let mut per_n_data = Vec::new();
    for u in t.output_alphabet.words_up_to(CERT_PREFIX_MAX) {
        let mut open_approx = BuchiAutomaton::empty(t.input_alphabet.clone());
        let mut error_margin = BuchiAutomaton::empty(t.input_alphabet.clone());
        for q in 0..t.num_states {
            let reader = exact_output_reader(t, &u, q)?;
            if reader.is_empty() {
                continue;
            }
            open_approx = ops::union(&open_approx, &ops::concat_left(&reader, &per_state[q].open_part)?)?;
            if let Some(w) = &per_state[q].meager {
                let wa = determinize::minimize_det(&w.automaton())?;
                error_margin =
                    ops::union(&error_margin, &ops::concat_left(&reader, &ops::cobuchi_to_nba(&wa)?)?)?;
            }
        }
        per_n_data.push(PrefixTriple {
            preimage: preimage_basic(t, &u)?,
            open_approx: ops::trim(&open_approx)?,
            error_margin: ops::trim(&error_margin)?,
            u,
        });
    }

    Ok(ContinuityCertificate {
        g,
        error_set,
        density_checked: true,
        per_n_data,
    })
}

/// Deterministic Buchi automaton for the complement of F, built directly.
///
/// A word avoids F iff for every state q and every position where q is
/// input-reachable, the suffix avoids q's meager error set. One obligation
/// machine per state is built and the deterministic products are minimized
/// between intersections.
fn restriction_automaton(t: &TwoTapeTransducer, per_state: &[StateData]) -> Result<BuchiAutomaton> {
    let active: Vec<StateId> = (0..t.num_states)
        .filter(|&q| per_state[q].reader_nonempty && per_state[q].meager.is_some())
        .collect();
    if active.is_empty() {
        return Ok(BuchiAutomaton::universal(t.input_alphabet.clone()));
    }
    obligation_machine(t, per_state, &active)
}

/// The obligation machine: a complete deterministic Buchi automaton for the
/// inputs whose every suffix taken at a position reaching an active state q
/// avoids q's meager error set.
///
/// A suffix avoids a piece union iff its base-machine run hits every
/// piece's bad set infinitely often. Suffix runs from different positions
/// are tracked as one state set per active q (the base machines are
/// deterministic, so copies merge), and the universal "every run hits every
/// bad set infinitely often" condition becomes Buchi via a single focus
/// rotating over all (state, piece) pairs with a breakpoint set: owing runs
/// are those of the focused state's machine without a hit of the focused
/// bad set since the focus last advanced; when none are owing the state is
/// accepting, the focus moves on, and the newly focused machine's tracked
/// runs start owing. Sharing one focus across all runs and all pairs keeps
/// the state space near the product of the tracked sets alone.
fn obligation_machine(
    t: &TwoTapeTransducer,
    per_state: &[StateData],
    active: &[StateId],
) -> Result<BuchiAutomaton> {
    let split = split_input(t)?;
    // focus rotation order: all (active slot, piece) pairs
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (slot, &q) in active.iter().enumerate() {
        let w = per_state[q].meager.as_ref().unwrap();
        for i in 0..w.piece_bad_sets().len() {
            pairs.push((slot, i));
        }
    }
    let union = |slot: usize| per_state[active[slot]].meager.as_ref().unwrap();

    let eps_closure = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut queue: VecDeque<usize> = out.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for &(dst, _) in &split.eps[v] {
                if out.insert(dst) {
                    queue.push_back(dst);
                }
            }
        }
        out
    };
    let spawn = |p: &BTreeSet<usize>, tracked: &mut [BTreeSet<StateId>]| {
        for (slot, &q) in active.iter().enumerate() {
            if p.contains(&q) {
                tracked[slot].insert(union(slot).base_initial());
            }
        }
    };

    // (reachable split nodes, tracked runs per slot, owing runs, focus, accepted)
    type Key = (BTreeSet<usize>, Vec<BTreeSet<StateId>>, BTreeSet<StateId>, usize, bool);

    let mut initial_p = BTreeSet::new();
    initial_p.insert(t.initial);
    let initial_p = eps_closure(&initial_p);
    let mut tracked = vec![BTreeSet::new(); active.len()];
    spawn(&initial_p, &mut tracked);
    let (slot0, piece0) = pairs[0];
    let bad0 = &union(slot0).piece_bad_sets()[piece0];
    let owing: BTreeSet<StateId> = tracked[slot0].iter().copied().filter(|&s| !bad0[s]).collect();
    let initial: Key = (initial_p, tracked, owing, 0, false);

    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut states: Vec<Key> = vec![initial.clone()];
    index.insert(initial, 0);
    let mut transitions: Vec<Vec<StateId>> = Vec::new();
    let mut frontier = 0;
    while frontier < states.len() {
        let (pset, tracked, owing, focus, _) = states[frontier].clone();
        let mut row = Vec::with_capacity(t.input_alphabet.len());
        for sym in 0..t.input_alphabet.len() {
            let mut p2: BTreeSet<usize> = BTreeSet::new();
            for &v in &pset {
                for &(s, dst, _) in &split.letter[v] {
                    if s == sym {
                        p2.insert(dst);
                    }
                }
            }
            let p2 = eps_closure(&p2);
            let mut tracked2: Vec<BTreeSet<StateId>> = tracked
                .iter()
                .enumerate()
                .map(|(slot, set)| {
                    let delta = union(slot).base_delta();
                    set.iter().map(|&s| delta[s][sym]).collect()
                })
                .collect();
            spawn(&p2, &mut tracked2);
            let (fslot, fpiece) = pairs[focus];
            let delta = union(fslot).base_delta();
            let bad = &union(fslot).piece_bad_sets()[fpiece];
            let mut owing2: BTreeSet<StateId> = owing
                .iter()
                .map(|&s| delta[s][sym])
                .filter(|&s2| !bad[s2])
                .collect();
            let accepted = owing2.is_empty();
            let focus2 = if accepted { (focus + 1) % pairs.len() } else { focus };
            if accepted {
                let (nslot, npiece) = pairs[focus2];
                let nbad = &union(nslot).piece_bad_sets()[npiece];
                owing2 = tracked2[nslot].iter().copied().filter(|&s| !nbad[s]).collect();
            }
            let key: Key = (p2, tracked2, owing2, focus2, accepted);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    if id >= OBLIGATION_STATE_CAP {
                        return Err(Error::Capacity(
                            "restriction obligation machine".into(),
                            OBLIGATION_STATE_CAP,
                        ));
                    }
                    states.push(key.clone());
                    index.insert(key, id);
                    id
                }
            };
            row.push(id);
        }
        transitions.push(row);
        frontier += 1;
    }

    let mut g = BuchiAutomaton::new(t.input_alphabet.clone(), states.len(), 0, AcceptanceMode::Buchi)?;
    for (s, row) in transitions.iter().enumerate() {
        for (sym, &dst) in row.iter().enumerate() {
            g.add_transition_idx(s, sym, dst)?;
        }
    }
    for (s, key) in states.iter().enumerate() {
        if key.4 {
            g.set_final(s, true);
        }
    }
    determinize::minimize_det(&g)
}

// --- prefix metric and the empirical probe --------------------------------

/// Nonnegative dyadic distance value: zero or a power 2^(-l).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    neg_log: Option<u32>,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { neg_log: None };

    pub fn pow(l: u32) -> Dyadic {
        Dyadic { neg_log: Some(l) }
    }

    pub fn is_zero(&self) -> bool {
        self.neg_log.is_none()
    }

    pub fn neg_log(&self) -> Option<u32> {
        self.neg_log
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // larger exponent means smaller value; zero is least
        match (self.neg_log, other.neg_log) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.neg_log {
            None => write!(f, "0"),
            Some(l) => write!(f, "2^-{l}"),
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    a / gcd(a, b) * b
}

/// Distance 2^(-l) with l the longest common prefix, or zero for equal
/// words; exact on lassos by comparing up to the joint periodic horizon.
pub fn prefix_distance(x: &UPWord, y: &UPWord) -> Dyadic {
    let horizon = x.prefix().len().max(y.prefix().len()) + lcm(x.period().len(), y.period().len());
    for i in 0..horizon {
        if x.at(i) != y.at(i) {
            return Dyadic::pow(i as u32);
        }
    }
    Dyadic::ZERO
}

/// Modulus-of-continuity table at a point, or a violating pair.
#[derive(Debug, Clone)]
pub struct ProbeEntry {
    pub n: u32,
    /// Smallest k whose neighborhood keeps outputs within 2^-n, when found.
    pub modulus: Option<u32>,
    /// Closest corpus point breaking the bound when no k works.
    pub witness: Option<(UPWord, Dyadic, Dyadic)>,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub x: UPWord,
    pub entries: Vec<ProbeEntry>,
    pub violation: bool,
}

/// Bounded empirical continuity check of the function at `x` restricted to
/// `g`: for each output precision n a modulus k is sought such that every
/// corpus lasso in the restriction within 2^-k of `x` maps within 2^-n of
/// f(x). A neighborhood that still contains corpus points but only
/// violating ones at every radius yields a violation witness; this is
/// evidence, not a proof.
pub fn restricted_continuity_probe(
    t: &TwoTapeTransducer,
    g: &BuchiAutomaton,
    x: &UPWord,
    n_max: u32,
    k_max: u32,
    lasso_bound: usize,
) -> Result<ProbeReport> {
    let domain = dom(t)?;
    if !membership::member_buchi(g, x)? || !membership::member_buchi(&domain, x)? {
        return Err(Error::Precondition(
            "a probe point inside the restriction set and the domain".into(),
        ));
    }
    let fx = evaluate(t, x)?;

    // corpus points of the restriction, with input and output distances to x
    let mut samples: Vec<(UPWord, Dyadic, Dyadic)> = Vec::new();
    for y in crate::word::enumerate_lassos(t.input_alphabet(), lasso_bound, lasso_bound) {
        if y.same_word(x)
            || !membership::member_buchi(g, &y)?
            || !membership::member_buchi(&domain, &y)?
        {
            continue;
        }
        let din = prefix_distance(x, &y);
        let dout = prefix_distance(&fx, &evaluate(t, &y)?);
        samples.push((y, din, dout));
    }

    let mut entries = Vec::new();
    let mut violation = false;
    for n in 1..=n_max {
        let bound = Dyadic::pow(n);
        let mut modulus = None;
        let mut witness: Option<(UPWord, Dyadic, Dyadic)> = None;
        for k in n..=k_max {
            let radius = Dyadic::pow(k);
            let shell: Vec<&(UPWord, Dyadic, Dyadic)> =
                samples.iter().filter(|(_, din, _)| *din < radius).collect();
            if shell.is_empty() {
                break;
            }
            match shell.iter().filter(|(_, _, dout)| *dout >= bound).min_by_key(|(_, din, _)| *din) {
                None => {
                    modulus = Some(k);
                    break;
                }
                Some(&bad) => witness = Some(bad.clone()),
            }
        }
        if modulus.is_none() {
            match witness.take() {
                // corpus points persist at every radius yet keep violating
                Some(w) => {
                    violation = true;
                    entries.push(ProbeEntry { n, modulus: None, witness: Some(w) });
                    continue;
                }
                // no corpus point near x at all: vacuous modulus
                None => modulus = Some(n),
            }
        }
        entries.push(ProbeEntry { n, modulus, witness: None });
    }
    Ok(ProbeReport { x: x.clone(), entries, violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::ab()
    }

    /// Copies its input letter by letter.
    fn identity() -> TwoTapeTransducer {
        let mut t = TwoTapeTransducer::new(sigma(), sigma(), 1, 0, true).unwrap();
        t.add_transition(0, ['a'], ['a'], 0).unwrap();
        t.add_transition(0, ['b'], ['b'], 0).unwrap();
        t.set_final(0, true);
        t
    }

    /// Outputs b^w on inputs with infinitely many b, a^w otherwise: the
    /// machine guesses which case holds up front.
    fn b_counter() -> TwoTapeTransducer {
        let mut t = TwoTapeTransducer::new(sigma(), sigma(), 4, 0, false).unwrap();
        // state 1: committed to infinitely many b, emits b on each b read;
        // starves the output tape otherwise, so finitely-many-b inputs die
        t.add_transition(0, [], [], 1).unwrap();
        t.add_transition(1, ['a'], [], 1).unwrap();
        t.add_transition(1, ['b'], ['b'], 1).unwrap();
        // states 2 and 3: committed to finitely many b, emitting a per
        // letter; the guessed jump to 3 must outlast every b
        t.add_transition(0, [], [], 2).unwrap();
        t.add_transition(2, ['a'], ['a'], 2).unwrap();
        t.add_transition(2, ['b'], ['a'], 2).unwrap();
        t.add_transition(2, [], [], 3).unwrap();
        t.add_transition(3, ['a'], ['a'], 3).unwrap();
        t.set_final(1, true);
        t.set_final(3, true);
        t
    }

    fn up(s: &str) -> UPWord {
        UPWord::parse(s).unwrap()
    }

    #[test]
    fn relation_membership_identity_and_counter() {
        let idt = identity();
        let yes = UPWordPair { input: up("(ab)"), output: up("(ab)") };
        let no = UPWordPair { input: up("(a)"), output: up("(b)") };
        assert!(relation_membership(&idt, &yes).unwrap());
        assert!(!relation_membership(&idt, &no).unwrap());

        let f = b_counter();
        let p = UPWordPair { input: up("(ab)"), output: up("(b)") };
        assert!(relation_membership(&f, &p).unwrap());
        let q = UPWordPair { input: up("(ab)"), output: up("(a)") };
        assert!(!relation_membership(&f, &q).unwrap());
    }

    #[test]
    fn dom_and_im() {
        let f = b_counter();
        let d = dom(&f).unwrap();
        for w in ["(a)", "(b)", "ab(ba)", "(aab)"] {
            assert!(membership::member_buchi(&d, &up(w)).unwrap(), "{w} in dom");
        }
        let i = im(&f).unwrap();
        assert!(membership::member_buchi(&i, &up("(a)")).unwrap());
        assert!(membership::member_buchi(&i, &up("(b)")).unwrap());
        assert!(!membership::member_buchi(&i, &up("(ab)")).unwrap());
        assert!(!membership::member_buchi(&i, &up("ba(a)")).unwrap());

        let mut dead = identity();
        dead.set_final(0, false);
        assert!(membership::is_empty_buchi(&dom(&dead).unwrap()));
        assert!(membership::is_empty_buchi(&im(&dead).unwrap()));
    }

    #[test]
    fn evaluate_identity_and_counter() {
        let idt = identity();
        let x = up("ab(ba)");
        assert!(evaluate(&idt, &x).unwrap().same_word(&x));

        let f = b_counter();
        assert!(evaluate(&f, &up("(ab)")).unwrap().same_word(&up("(b)")));
        assert!(evaluate(&f, &up("ab(a)")).unwrap().same_word(&up("(a)")));
    }

    #[test]
    fn evaluate_error_paths() {
        // no accepting run at all from an empty relation
        let mut dead = identity();
        dead.set_final(0, false);
        assert!(matches!(evaluate(&dead, &up("(a)")), Err(Error::OutsideDomain)));

        // consumes input forever but stops writing
        let mut starve = TwoTapeTransducer::new(sigma(), sigma(), 1, 0, false).unwrap();
        starve.add_transition(0, ['a'], [], 0).unwrap();
        starve.add_transition(0, ['b'], [], 0).unwrap();
        starve.set_final(0, true);
        assert!(matches!(evaluate(&starve, &up("(a)")), Err(Error::NonOmegaOutput)));

        // relates every input to both a^w and b^w
        let mut two = TwoTapeTransducer::new(sigma(), sigma(), 3, 0, false).unwrap();
        two.add_transition(0, [], [], 1).unwrap();
        two.add_transition(0, [], [], 2).unwrap();
        for s in [1, 2] {
            let o = if s == 1 { 'a' } else { 'b' };
            two.add_transition(s, ['a'], [o], s).unwrap();
            two.add_transition(s, ['b'], [o], s).unwrap();
            two.set_final(s, true);
        }
        assert!(matches!(evaluate(&two, &up("(a)")), Err(Error::NonFunctional)));
    }

    #[test]
    fn functionality_sync() {
        assert!(functionality_check_sync(&identity()).unwrap());
        assert!(matches!(
            functionality_check_sync(&b_counter()),
            Err(Error::Precondition(_))
        ));

        let mut two = TwoTapeTransducer::new(sigma(), sigma(), 1, 0, true).unwrap();
        two.add_transition(0, ['a'], ['a'], 0).unwrap();
        two.add_transition(0, ['a'], ['b'], 0).unwrap();
        two.add_transition(0, ['b'], ['a'], 0).unwrap();
        two.set_final(0, true);
        assert!(!functionality_check_sync(&two).unwrap());

        let mut empty = TwoTapeTransducer::new(sigma(), sigma(), 1, 0, true).unwrap();
        empty.add_transition(0, ['a'], ['a'], 0).unwrap();
        assert!(functionality_check_sync(&empty).unwrap());
    }

    #[test]
    fn preimage_identity_and_counter() {
        let idt = identity();
        let pa = preimage_basic(&idt, &['a']).unwrap();
        assert!(membership::member_buchi(&pa, &up("a(b)")).unwrap());
        assert!(!membership::member_buchi(&pa, &up("b(a)")).unwrap());
        let pe = preimage_basic(&idt, &[]).unwrap();
        assert!(membership::member_buchi(&pe, &up("(ba)")).unwrap());

        // f(x) starts with b iff x has infinitely many b
        let f = b_counter();
        let pb = preimage_basic(&f, &['b']).unwrap();
        assert!(membership::member_buchi(&pb, &up("(ab)")).unwrap());
        assert!(membership::member_buchi(&pb, &up("aa(b)")).unwrap());
        assert!(!membership::member_buchi(&pb, &up("bb(a)")).unwrap());
    }

    #[test]
    fn finite_behavior_projection() {
        let f = b_counter();
        let (_, c0) = finite_behavior(&f, 0).unwrap();
        assert!(c0.accepts(&[]).unwrap());
        let (_, c1) = finite_behavior(&f, 1).unwrap();
        assert!(c1.accepts(&[]).unwrap());
        assert!(c1.accepts(&['a', 'b']).unwrap());
    }

    #[test]
    fn prefix_distance_cases() {
        assert!(prefix_distance(&up("(ab)"), &up("ab(ab)")).is_zero());
        assert_eq!(prefix_distance(&up("(a)"), &up("(b)")), Dyadic::pow(0));
        assert_eq!(prefix_distance(&up("ab(a)"), &up("ab(b)")), Dyadic::pow(2));
        assert!(Dyadic::ZERO < Dyadic::pow(5));
        assert!(Dyadic::pow(5) < Dyadic::pow(2));
    }

    #[test]
    fn continuity_certificate_identity() {
        let cert = continuity_restriction(&identity()).unwrap();
        assert!(cert.density_checked);
        assert!(membership::member_buchi(&cert.g, &up("(ab)")).unwrap());
        assert!(membership::is_empty_buchi(&cert.error_set));
    }

    #[test]
    fn continuity_certificate_counter() {
        let f = b_counter();
        let cert = continuity_restriction(&f).unwrap();
        assert!(cert.density_checked);
        assert!(topology::is_dense(&cert.g).unwrap());
        assert!(membership::is_empty_buchi(
            &ops::intersection(&cert.g, &cert.error_set).unwrap()
        ));

        // the probe passes on the constructed restriction
        let x = up("(ab)");
        if membership::member_buchi(&cert.g, &x).unwrap() {
            let report = restricted_continuity_probe(&f, &cert.g, &x, 4, 12, 4).unwrap();
            assert!(!report.violation, "constructed restriction must pass");
        }

        // A deliberately universal restriction is refuted with a witness:
        // a^w is discontinuous (ever-closer inputs with infinitely many b
        // map to b^w) yet the fake restriction set claims it.
        let universal = BuchiAutomaton::universal(sigma());
        let report = restricted_continuity_probe(&f, &universal, &up("(a)"), 4, 12, 4).unwrap();
        assert!(report.violation);
        let bad = report.entries.iter().find(|e| e.witness.is_some()).unwrap();
        let (y, _, dout) = bad.witness.as_ref().unwrap();
        // the witness is a nearby finitely-many-b input mapped far away
        assert!(membership::member_buchi(&dom(&f).unwrap(), y).unwrap());
        assert_eq!(*dout, Dyadic::pow(0));
    }
}
