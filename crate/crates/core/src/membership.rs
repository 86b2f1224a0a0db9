//! Exact membership and emptiness decisions on ultimately periodic words,
//! via lasso-product search.

use crate::automaton::{AcceptanceMode, BuchiAutomaton, MullerAcceptance, MullerAutomaton, StateId};
use crate::error::{Error, Result};
use crate::graph;
use crate::word::UPWord;
use std::collections::BTreeSet;

/// Position arithmetic over the lasso shape of a UP word: positions
/// `0..prefix+period`, wrapping from the end of the period back to its start.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LassoShape {
    pub prefix: usize,
    pub period: usize,
}

impl LassoShape {
    pub fn of(word: &UPWord) -> Self {
        LassoShape {
            prefix: word.prefix().len(),
            period: word.period().len(),
        }
    }

    pub fn len(&self) -> usize {
        self.prefix + self.period
    }

    pub fn next(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.prefix
        }
    }

}

/// Membership of a UP word in a Buchi (or deterministic co-Buchi) automaton.
pub fn member_buchi(a: &BuchiAutomaton, x: &UPWord) -> Result<bool> {
    x.check_alphabet(a.alphabet())?;
    a.validate()?;
    let x = x.canonical();
    match a.mode() {
        AcceptanceMode::Buchi => member_nba(a, &x),
        AcceptanceMode::CoBuchi => {
            let (_, loop_states) = det_run_loop(
                |s, sym| a.det_successor(s, sym).expect("co-Buchi automata are complete"),
                a.initial(),
                a.alphabet(),
                &x,
            )?;
            Ok(loop_states.iter().all(|&s| !a.is_final(s)))
        }
    }
}

/// Membership of a UP word in a deterministic Muller automaton.
pub fn member_muller(m: &MullerAutomaton, x: &UPWord) -> Result<bool> {
    x.check_alphabet(m.alphabet())?;
    let x = x.canonical();
    let (_, loop_states) = det_run_loop(|s, sym| m.successor(s, sym), m.initial(), m.alphabet(), &x)?;
    Ok(m.designates(&loop_states))
}

fn member_nba(a: &BuchiAutomaton, x: &UPWord) -> Result<bool> {
    let shape = LassoShape::of(x);
    let n = a.num_states();
    let total = shape.len();
    // Product of A with the lasso shape: node (state, position).
    let node = |s: StateId, p: usize| s * total + p;
    let mut adj = vec![Vec::new(); n * total];
    for s in 0..n {
        for p in 0..total {
            let sym = a.alphabet().index_of(x.at(p))?;
            let p2 = shape.next(p);
            for &t in a.successors(s, sym) {
                adj[node(s, p)].push(node(t, p2));
            }
        }
    }
    let start = node(a.initial(), 0);
    let reach = graph::reachable(&adj, start);
    for comp in graph::sccs(&adj) {
        if !comp.iter().any(|&v| reach[v]) {
            continue;
        }
        let has_cycle = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
        if !has_cycle {
            continue;
        }
        if comp.iter().any(|&v| a.is_final(v / total)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Runs a deterministic machine on a UP word until the (state, position) pair
/// repeats; returns the entry configuration and the set of loop states.
pub(crate) fn det_run_loop(
    step: impl Fn(StateId, usize) -> StateId,
    initial: StateId,
    alphabet: &crate::alphabet::Alphabet,
    x: &UPWord,
) -> Result<(StateId, BTreeSet<StateId>)> {
    let shape = LassoShape::of(x);
    let mut seen: std::collections::HashMap<(StateId, usize), usize> = Default::default();
    let mut trace: Vec<(StateId, usize)> = Vec::new();
    let mut state = initial;
    let mut pos = 0usize;
    loop {
        if pos >= shape.prefix {
            if let Some(&idx) = seen.get(&(state, pos)) {
                let loop_states: BTreeSet<StateId> =
                    trace[idx..].iter().map(|&(s, _)| s).collect();
                return Ok((state, loop_states));
            }
            seen.insert((state, pos), trace.len());
        }
        trace.push((state, pos));
        let sym = alphabet.index_of(x.at(pos))?;
        state = step(state, sym);
        pos = shape.next(pos);
    }
}

/// Emptiness of a Buchi or deterministic co-Buchi automaton.
pub fn is_empty_buchi(a: &BuchiAutomaton) -> bool {
    accepting_lasso(a).is_none()
}

/// A witness UP word when the language is non-empty.
pub fn accepting_lasso(a: &BuchiAutomaton) -> Option<UPWord> {
    match a.mode() {
        AcceptanceMode::Buchi => {
            let adj = a.adjacency();
            let reach = graph::reachable(&adj, a.initial());
            for comp in graph::sccs(&adj) {
                if !comp.iter().any(|&v| reach[v]) {
                    continue;
                }
                let has_cycle = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
                if !has_cycle {
                    continue;
                }
                if let Some(&f) = comp.iter().find(|&&v| a.is_final(v)) {
                    return Some(extract_lasso(a, f, &comp));
                }
            }
            None
        }
        AcceptanceMode::CoBuchi => {
            // A run accepts iff its infinity set avoids F: look for a reachable
            // cycle entirely within non-final states.
            let adj = a.adjacency();
            let reach = graph::reachable(&adj, a.initial());
            let alive: Vec<bool> = (0..a.num_states()).map(|s| !a.is_final(s)).collect();
            let filtered: Vec<Vec<usize>> = adj
                .iter()
                .enumerate()
                .map(|(v, succs)| {
                    if alive[v] {
                        succs.iter().copied().filter(|&w| alive[w]).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            for comp in graph::sccs(&filtered) {
                if comp.iter().any(|&v| !alive[v]) {
                    continue;
                }
                let has_cycle = comp.len() > 1 || filtered[comp[0]].contains(&comp[0]);
                if !has_cycle {
                    continue;
                }
                if let Some(&v) = comp.iter().find(|&&v| reach[v]) {
                    return Some(extract_lasso(a, v, &comp));
                }
            }
            None
        }
    }
}

/// Builds a concrete UP word from a pivot state on an accepting cycle.
fn extract_lasso(a: &BuchiAutomaton, pivot: StateId, comp: &[StateId]) -> UPWord {
    let prefix = symbol_path(a, a.initial(), pivot, None).expect("pivot is reachable");
    // Closed walk pivot -> pivot within the component.
    let restrict: Option<BTreeSet<StateId>> = if comp.len() > 1 {
        Some(comp.iter().copied().collect())
    } else {
        None
    };
    let period = if comp.len() == 1 {
        // Self-loop: any symbol that loops.
        let mut p = None;
        'outer: for sym in 0..a.alphabet().len() {
            for &t in a.successors(pivot, sym) {
                if t == pivot {
                    p = Some(vec![a.alphabet().symbol(sym)]);
                    break 'outer;
                }
            }
        }
        p.expect("component has a cycle")
    } else {
        // Step off pivot once, then path back.
        let mut best = None;
        'outer2: for sym in 0..a.alphabet().len() {
            for &t in a.successors(pivot, sym) {
                if comp.contains(&t) {
                    if let Some(back) = symbol_path(a, t, pivot, restrict.as_ref()) {
                        let mut w = vec![a.alphabet().symbol(sym)];
                        w.extend(back);
                        best = Some(w);
                        break 'outer2;
                    }
                }
            }
        }
        best.expect("component is strongly connected")
    };
    UPWord::new(prefix, period).expect("period non-empty")
}

/// BFS path labelled by symbols, optionally restricted to a state set.
pub(crate) fn symbol_path(
    a: &BuchiAutomaton,
    from: StateId,
    to: StateId,
    within: Option<&BTreeSet<StateId>>,
) -> Option<Vec<char>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: Vec<Option<(StateId, usize)>> = vec![None; a.num_states()];
    let mut queue = std::collections::VecDeque::from([from]);
    let mut seen = vec![false; a.num_states()];
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for sym in 0..a.alphabet().len() {
            for &w in a.successors(v, sym) {
                if let Some(set) = within {
                    if !set.contains(&w) {
                        continue;
                    }
                }
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((v, sym));
                    if w == to {
                        let mut path = Vec::new();
                        let mut cur = to;
                        while cur != from {
                            let (p, s) = prev[cur].unwrap();
                            path.push(a.alphabet().symbol(s));
                            cur = p;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
    }
    None
}

/// Emptiness of a deterministic Muller automaton: some designated set must be
/// a reachable loop.
pub fn is_empty_muller(m: &MullerAutomaton) -> bool {
    let adj = m.adjacency();
    let reach = graph::reachable(&adj, m.initial());
    match m.acceptance() {
        MullerAcceptance::Table(table) => !table
            .iter()
            .any(|f| f.iter().all(|&q| reach[q]) && graph::is_loop(&adj, f)),
        MullerAcceptance::Rabin(pairs) => !pairs.iter().any(|p| {
            let allowed: Vec<bool> = (0..m.num_states()).map(|q| reach[q] && p.stay[q]).collect();
            graph::constrained_loop(&adj, &allowed, &[&p.hit]).is_some()
        }),
        MullerAcceptance::Streett(pairs) => {
            graph::streett_loop(&adj, &reach, pairs, &[]).is_none()
        }
    }
}

/// Nonemptiness of the intersection of a Buchi language with a deterministic
/// Muller language, with an ultimately periodic witness. Decided on the
/// synchronised product: pair masks lift through the Muller projection, and a
/// final Buchi state becomes one more set the witness loop must meet.
pub fn intersection_witness_muller(
    a: &BuchiAutomaton,
    m: &MullerAutomaton,
) -> Result<Option<UPWord>> {
    if a.alphabet() != m.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let a = crate::ops::to_buchi(a)?;
    let k = m.num_states();
    let n = a.num_states() * k;
    let idx = |s: StateId, t: StateId| s * k + t;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut labels: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for s in 0..a.num_states() {
        for t in 0..k {
            for sym in 0..a.alphabet().len() {
                let t2 = m.successor(t, sym);
                for &s2 in a.successors(s, sym) {
                    adj[idx(s, t)].push(idx(s2, t2));
                    labels[idx(s, t)].push((sym, idx(s2, t2)));
                }
            }
        }
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    let start = idx(a.initial(), m.initial());
    let reach = graph::reachable(&adj, start);
    let finals: Vec<bool> = (0..n).map(|v| a.is_final(v / k)).collect();
    let lift = |mask: &[bool]| -> Vec<bool> { (0..n).map(|v| mask[v % k]).collect() };
    let found = match m.acceptance() {
        MullerAcceptance::Table(table) => table.iter().find_map(|f| {
            let allowed: Vec<bool> =
                (0..n).map(|v| reach[v] && f.contains(&(v % k))).collect();
            // the loop must cover f on the Muller side and touch a final state
            let require: Vec<Vec<bool>> = f
                .iter()
                .map(|&q| (0..n).map(|v| v % k == q).collect())
                .chain([finals.clone()])
                .collect();
            let refs: Vec<&[bool]> = require.iter().map(|r| r.as_slice()).collect();
            graph::constrained_loop(&adj, &allowed, &refs)
        }),
        MullerAcceptance::Rabin(pairs) => pairs.iter().find_map(|p| {
            let stay = lift(&p.stay);
            let hit = lift(&p.hit);
            let allowed: Vec<bool> = (0..n).map(|v| reach[v] && stay[v]).collect();
            graph::constrained_loop(&adj, &allowed, &[&hit, &finals])
        }),
        MullerAcceptance::Streett(pairs) => {
            let lifted: Vec<graph::LoopPair> = pairs
                .iter()
                .map(|p| graph::LoopPair { stay: lift(&p.stay), hit: lift(&p.hit) })
                .collect();
            graph::streett_loop(&adj, &reach, &lifted, &[&finals])
        }
    };
    let Some(comp) = found else { return Ok(None) };
    // stitch a lasso: path from start to the component, then a closed walk
    // through every component state.
    let word_of = |path: &[ (usize, usize) ]| -> Vec<usize> { path.iter().map(|&(s, _)| s).collect() };
    let bfs = |from: usize, goal: &dyn Fn(usize) -> bool, within: Option<&BTreeSet<usize>>| -> Option<Vec<(usize, usize)>> {
        let mut prev: Vec<Option<(usize, usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([from]);
        seen[from] = true;
        if goal(from) {
            return Some(Vec::new());
        }
        while let Some(v) = queue.pop_front() {
            for &(sym, w) in &labels[v] {
                if within.is_some_and(|set| !set.contains(&w)) || seen[w] {
                    continue;
                }
                seen[w] = true;
                prev[w] = Some((v, sym, w));
                if goal(w) {
                    let mut path = Vec::new();
                    let mut cur = w;
                    while cur != from {
                        let (p2, s2, _) = prev[cur].unwrap();
                        path.push((s2, cur));
                        cur = p2;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    };
    let entry = *comp.iter().next().unwrap();
    let prefix_path = bfs(start, &|v| v == entry, None).expect("component is reachable");
    let mut cycle: Vec<(usize, usize)> = Vec::new();
    let mut at = entry;
    for &q in &comp {
        if q == at {
            continue;
        }
        let leg = bfs(at, &|v| v == q, Some(&comp)).expect("component is strongly connected");
        at = leg.last().map(|&(_, w)| w).unwrap_or(at);
        cycle.extend(leg);
    }
    let back = bfs(at, &|v| v == entry, Some(&comp)).expect("component is strongly connected");
    cycle.extend(back);
    if cycle.is_empty() {
        // single state with a self-loop
        let (sym, w) = labels[entry]
            .iter()
            .copied()
            .find(|&(_, w)| w == entry)
            .expect("component supports a closed walk");
        cycle.push((sym, w));
    }
    let alphabet = a.alphabet();
    let prefix: Vec<char> = word_of(&prefix_path).iter().map(|&s| alphabet.symbol(s)).collect();
    let period: Vec<char> = word_of(&cycle).iter().map(|&s| alphabet.symbol(s)).collect();
    Ok(Some(UPWord::new(prefix, period)?.canonical()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    /// 2-state Buchi automaton for "infinitely many a" over {a,b}.
    pub fn inf_a() -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        // state 0: just read a (final), state 1: just read b
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(0, true);
        a
    }

    fn up(lit: &str) -> UPWord {
        UPWord::parse(lit).unwrap()
    }

    #[test]
    fn universal_accepts_everything() {
        let u = BuchiAutomaton::universal(Alphabet::ab());
        assert!(member_buchi(&u, &up("(ab)")).unwrap());
        assert!(member_buchi(&u, &up("b(a)")).unwrap());
    }

    #[test]
    fn first_letter_cylinder() {
        // a . Sigma^omega
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 1).unwrap();
        a.add_transition(1, 'a', 1).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(1, true);
        assert!(member_buchi(&a, &up("a(b)")).unwrap());
        assert!(!member_buchi(&a, &up("(b)")).unwrap());
    }

    #[test]
    fn infinitely_many_a() {
        let a = inf_a();
        assert!(member_buchi(&a, &up("(ab)")).unwrap());
        // a.b^omega has only finitely many a
        assert!(!member_buchi(&a, &up("a(b)")).unwrap());
    }

    #[test]
    fn emptiness() {
        assert!(is_empty_buchi(&BuchiAutomaton::empty(Alphabet::ab())));
        assert!(!is_empty_buchi(&BuchiAutomaton::universal(Alphabet::ab())));
        // Final state unreachable.
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 0).unwrap();
        a.add_transition(1, 'a', 1).unwrap();
        a.set_final(1, true);
        assert!(is_empty_buchi(&a));
    }

    #[test]
    fn muller_inf_a() {
        // deterministic 2-state machine, designated sets {{0}, {0,1}}
        let m = MullerAutomaton::new(
            Alphabet::ab(),
            vec![vec![0, 1], vec![0, 1]],
            0,
            vec![BTreeSet::from([0]), BTreeSet::from([0, 1])],
        )
        .unwrap();
        assert!(member_muller(&m, &up("(ab)")).unwrap());
        assert!(!member_muller(&m, &up("a(b)")).unwrap());
        assert!(!is_empty_muller(&m));
    }

    #[test]
    fn cobuchi_finitely_many_b() {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::CoBuchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(1, true); // visiting "just read b" infinitely often rejects
        assert!(member_buchi(&a, &up("ab(a)")).unwrap());
        assert!(!member_buchi(&a, &up("(ab)")).unwrap());
        assert!(!is_empty_buchi(&a));
    }

    #[test]
    fn witness_lasso_is_accepted() {
        let a = inf_a();
        let w = accepting_lasso(&a).unwrap();
        assert!(member_buchi(&a, &w).unwrap());
    }
}
