use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use std::collections::BTreeSet;

pub type StateId = usize;

/// Acceptance mode of a [`BuchiAutomaton`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptanceMode {
    /// Some final state is visited infinitely often.
    Buchi,
    /// Final states are visited only finitely often. Requires a deterministic
    /// and complete transition relation.
    CoBuchi,
}

/// Nondeterministic acceptor of omega-words with final-state infinite-visit
/// acceptance, or (in co-Buchi mode) a deterministic complete acceptor whose
/// runs must visit the marked set only finitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    alphabet: Alphabet,
    /// transitions[state][symbol] -> successor states
    transitions: Vec<Vec<Vec<StateId>>>,
    initial: StateId,
    finals: Vec<bool>,
    mode: AcceptanceMode,
}

impl BuchiAutomaton {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: StateId,
        mode: AcceptanceMode,
    ) -> Result<Self> {
        if initial >= num_states {
            return Err(Error::InvalidState(initial));
        }
        let k = alphabet.len();
        Ok(BuchiAutomaton {
            alphabet,
            transitions: vec![vec![Vec::new(); k]; num_states],
            initial,
            finals: vec![false; num_states],
            mode,
        })
    }

    pub fn add_transition(&mut self, src: StateId, symbol: char, dst: StateId) -> Result<()> {
        let s = self.alphabet.index_of(symbol)?;
        self.add_transition_idx(src, s, dst)
    }

    pub fn add_transition_idx(&mut self, src: StateId, symbol: usize, dst: StateId) -> Result<()> {
        if src >= self.num_states() {
            return Err(Error::InvalidState(src));
        }
        if dst >= self.num_states() {
            return Err(Error::InvalidState(dst));
        }
        if !self.transitions[src][symbol].contains(&dst) {
            self.transitions[src][symbol].push(dst);
        }
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn mode(&self) -> AcceptanceMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: AcceptanceMode) {
        self.mode = mode;
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&s| self.finals[s])
    }

    pub fn successors(&self, state: StateId, symbol: usize) -> &[StateId] {
        &self.transitions[state][symbol]
    }

    /// Successor graph ignoring symbols.
    pub fn adjacency(&self) -> Vec<Vec<StateId>> {
        self.transitions
            .iter()
            .map(|per_sym| {
                let mut out: Vec<StateId> = per_sym.iter().flatten().copied().collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.transitions
            .iter()
            .all(|per_sym| per_sym.iter().all(|succ| succ.len() <= 1))
    }

    pub fn is_complete(&self) -> bool {
        self.transitions
            .iter()
            .all(|per_sym| per_sym.iter().all(|succ| !succ.is_empty()))
    }

    /// The unique successor in a deterministic automaton, if present.
    pub fn det_successor(&self, state: StateId, symbol: usize) -> Option<StateId> {
        self.transitions[state][symbol].first().copied()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == AcceptanceMode::CoBuchi && !(self.is_deterministic() && self.is_complete())
        {
            return Err(Error::Malformed(
                "co-Buchi mode requires a deterministic complete transition relation".into(),
            ));
        }
        Ok(())
    }

    /// Adds a rejecting sink so every (state, symbol) has a successor.
    pub fn completed(&self) -> BuchiAutomaton {
        if self.is_complete() {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.num_states();
        out.transitions
            .push(vec![vec![sink]; out.alphabet.len()]);
        out.finals.push(false);
        for state in 0..sink {
            for sym in 0..out.alphabet.len() {
                if out.transitions[state][sym].is_empty() {
                    out.transitions[state][sym].push(sink);
                }
            }
        }
        out
    }

    /// Universal automaton over the alphabet.
    pub fn universal(alphabet: Alphabet) -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(alphabet, 1, 0, AcceptanceMode::Buchi).unwrap();
        for sym in 0..a.alphabet.len() {
            a.add_transition_idx(0, sym, 0).unwrap();
        }
        a.set_final(0, true);
        a
    }

    /// Automaton accepting the empty language.
    pub fn empty(alphabet: Alphabet) -> BuchiAutomaton {
        BuchiAutomaton::new(alphabet, 1, 0, AcceptanceMode::Buchi).unwrap()
    }
}

/// How a deterministic Muller automaton designates infinity sets. Explicit
/// tables stay exact for small machines; pair-based forms avoid enumerating
/// the (possibly astronomically many) loops of a large machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MullerAcceptance {
    /// The designated loops, listed explicitly.
    Table(Vec<BTreeSet<StateId>>),
    /// Designated iff some pair has the loop inside `stay` and meeting `hit`.
    Rabin(Vec<crate::graph::LoopPair>),
    /// Designated iff no pair has the loop inside `stay` and meeting `hit`
    /// (the exact complement of the Rabin reading of the same pairs).
    Streett(Vec<crate::graph::LoopPair>),
}

impl MullerAcceptance {
    pub fn designates(&self, set: &BTreeSet<StateId>) -> bool {
        match self {
            MullerAcceptance::Table(table) => table.iter().any(|f| f == set),
            MullerAcceptance::Rabin(pairs) => pair_holds(pairs, set),
            MullerAcceptance::Streett(pairs) => !pair_holds(pairs, set),
        }
    }
}

fn pair_holds(pairs: &[crate::graph::LoopPair], set: &BTreeSet<StateId>) -> bool {
    pairs
        .iter()
        .any(|p| set.iter().all(|&q| p.stay[q]) && set.iter().any(|&q| p.hit[q]))
}

/// Deterministic, complete acceptor with a family of designated state sets:
/// a run is accepting iff its set of infinitely visited states is designated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MullerAutomaton {
    alphabet: Alphabet,
    /// delta[state][symbol] -> successor
    delta: Vec<Vec<StateId>>,
    initial: StateId,
    acceptance: MullerAcceptance,
}

impl MullerAutomaton {
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<StateId>>,
        initial: StateId,
        table: Vec<BTreeSet<StateId>>,
    ) -> Result<Self> {
        let mut table = table;
        table.sort();
        table.dedup();
        MullerAutomaton::with_acceptance(alphabet, delta, initial, MullerAcceptance::Table(table))
    }

    pub fn with_acceptance(
        alphabet: Alphabet,
        delta: Vec<Vec<StateId>>,
        initial: StateId,
        acceptance: MullerAcceptance,
    ) -> Result<Self> {
        let n = delta.len();
        if initial >= n {
            return Err(Error::InvalidState(initial));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(Error::Malformed(
                    "Muller automaton must be complete: one successor per symbol".into(),
                ));
            }
            for &d in row {
                if d >= n {
                    return Err(Error::InvalidState(d));
                }
            }
        }
        match &acceptance {
            MullerAcceptance::Table(table) => {
                for set in table {
                    for &q in set {
                        if q >= n {
                            return Err(Error::InvalidState(q));
                        }
                    }
                }
            }
            MullerAcceptance::Rabin(pairs) | MullerAcceptance::Streett(pairs) => {
                for p in pairs {
                    if p.stay.len() != n || p.hit.len() != n {
                        return Err(Error::Malformed(
                            "acceptance pair masks must cover every state".into(),
                        ));
                    }
                }
            }
        }
        Ok(MullerAutomaton {
            alphabet,
            delta,
            initial,
            acceptance,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn successor(&self, state: StateId, symbol: usize) -> StateId {
        self.delta[state][symbol]
    }

    pub fn delta(&self) -> &Vec<Vec<StateId>> {
        &self.delta
    }

    pub fn acceptance(&self) -> &MullerAcceptance {
        &self.acceptance
    }

    /// The explicit loop table, when this machine carries one.
    pub fn table(&self) -> Option<&[BTreeSet<StateId>]> {
        match &self.acceptance {
            MullerAcceptance::Table(table) => Some(table),
            _ => None,
        }
    }

    pub fn designates(&self, set: &BTreeSet<StateId>) -> bool {
        self.acceptance.designates(set)
    }

    pub fn with_table(&self, table: Vec<BTreeSet<StateId>>) -> MullerAutomaton {
        MullerAutomaton::new(self.alphabet.clone(), self.delta.clone(), self.initial, table)
            .expect("same transition structure")
    }

    pub fn adjacency(&self) -> Vec<Vec<StateId>> {
        self.delta
            .iter()
            .map(|row| {
                let mut out = row.clone();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }
}

/// Nondeterministic finite automaton over finite words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAutomaton {
    alphabet: Alphabet,
    transitions: Vec<Vec<Vec<StateId>>>,
    initial: StateId,
    finals: Vec<bool>,
}

impl FiniteAutomaton {
    pub fn new(alphabet: Alphabet, num_states: usize, initial: StateId) -> Result<Self> {
        if initial >= num_states {
            return Err(Error::InvalidState(initial));
        }
        let k = alphabet.len();
        Ok(FiniteAutomaton {
            alphabet,
            transitions: vec![vec![Vec::new(); k]; num_states],
            initial,
            finals: vec![false; num_states],
        })
    }

    pub fn add_transition(&mut self, src: StateId, symbol: char, dst: StateId) -> Result<()> {
        let s = self.alphabet.index_of(symbol)?;
        self.add_transition_idx(src, s, dst)
    }

    pub fn add_transition_idx(&mut self, src: StateId, symbol: usize, dst: StateId) -> Result<()> {
        if src >= self.num_states() || dst >= self.num_states() {
            return Err(Error::InvalidState(src.max(dst)));
        }
        if !self.transitions[src][symbol].contains(&dst) {
            self.transitions[src][symbol].push(dst);
        }
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn successors(&self, state: StateId, symbol: usize) -> &[StateId] {
        &self.transitions[state][symbol]
    }

    /// Membership of a finite word.
    pub fn accepts(&self, word: &[char]) -> Result<bool> {
        let encoded = self.alphabet.encode(word)?;
        let mut current: BTreeSet<StateId> = BTreeSet::from([self.initial]);
        for sym in encoded {
            let mut next = BTreeSet::new();
            for &s in &current {
                next.extend(self.transitions[s][sym].iter().copied());
            }
            current = next;
        }
        Ok(current.iter().any(|&s| self.finals[s]))
    }

    /// True iff the automaton accepts no finite word.
    pub fn is_empty(&self) -> bool {
        let adj = self
            .transitions
            .iter()
            .map(|per_sym| per_sym.iter().flatten().copied().collect::<Vec<_>>())
            .collect::<Vec<_>>();
        let reach = crate::graph::reachable(&adj, self.initial);
        !(0..self.num_states()).any(|s| reach[s] && self.finals[s])
    }

    /// Automaton accepting only the empty word.
    pub fn epsilon(alphabet: Alphabet) -> FiniteAutomaton {
        let mut a = FiniteAutomaton::new(alphabet, 1, 0).unwrap();
        a.set_final(0, true);
        a
    }

    /// Automaton accepting all finite words.
    pub fn all_words(alphabet: Alphabet) -> FiniteAutomaton {
        let mut a = FiniteAutomaton::new(alphabet, 1, 0).unwrap();
        for sym in 0..a.alphabet.len() {
            a.add_transition_idx(0, sym, 0).unwrap();
        }
        a.set_final(0, true);
        a
    }
}
