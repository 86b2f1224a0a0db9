//! Topological operators on omega-regular languages for the Cantor topology
//! on infinite words: closure, interior, density, the prefix-limit operator,
//! and classification in the first levels of the Borel hierarchy.

use crate::automaton::{AcceptanceMode, BuchiAutomaton, FiniteAutomaton, MullerAcceptance, MullerAutomaton, StateId};
use crate::determinize::{self, MACRO_STATE_CAP};
use crate::error::{Error, Result};
use crate::graph;
use crate::ops;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Topological closure. The result is a safety automaton: the language of
/// infinite runs through states that still admit an accepting continuation.
pub fn closure(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    if a.mode() == AcceptanceMode::CoBuchi {
        // live = can reach a loop avoiding the final states; the machine stays
        // deterministic, unlike after the generic co-Buchi translation
        let adj = a.adjacency();
        let mut on_quiet_cycle = vec![false; a.num_states()];
        let nonfinal: Vec<bool> = (0..a.num_states()).map(|v| !a.is_final(v)).collect();
        for comp in graph::component_loops(&adj, &nonfinal) {
            for &v in &comp {
                on_quiet_cycle[v] = true;
            }
        }
        let live = graph::can_reach(&adj, &on_quiet_cycle);
        if !live[a.initial()] {
            return Ok(BuchiAutomaton::empty(a.alphabet().clone()));
        }
        let mut out = BuchiAutomaton::new(
            a.alphabet().clone(),
            a.num_states(),
            a.initial(),
            AcceptanceMode::Buchi,
        )?;
        for s in 0..a.num_states() {
            if !live[s] {
                continue;
            }
            out.set_final(s, true);
            for sym in 0..a.alphabet().len() {
                for &t in a.successors(s, sym) {
                    if live[t] {
                        out.add_transition_idx(s, sym, t)?;
                    }
                }
            }
        }
        return ops::trim(&out);
    }
    let a = ops::to_buchi(a)?;
    let live = ops::live_states(&a);
    if !live[a.initial()] {
        return Ok(BuchiAutomaton::empty(a.alphabet().clone()));
    }
    let mut out = BuchiAutomaton::new(a.alphabet().clone(), a.num_states(), a.initial(), AcceptanceMode::Buchi)?;
    for s in 0..a.num_states() {
        if !live[s] {
            continue;
        }
        out.set_final(s, true);
        for sym in 0..a.alphabet().len() {
            for &t in a.successors(s, sym) {
                if live[t] {
                    out.add_transition_idx(s, sym, t)?;
                }
            }
        }
    }
    ops::trim(&out)
}

/// Topological interior: the complement of the closure of the complement.
pub fn interior(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    let c = closure(&determinize::complement(a)?)?;
    // closure output is safety and may be incomplete; completing it keeps the
    // language and preserves the deterministic complementation fast path
    let c = if c.is_deterministic() { c.completed() } else { c };
    determinize::complement(&c)
}

/// Whether the language is dense (its closure is the full space): every
/// finite word must extend to a live run. Decided on the subset automaton of
/// the live part.
pub fn is_dense(a: &BuchiAutomaton) -> Result<bool> {
    let c = closure(a)?;
    if c.num_states() == 0 {
        return Ok(false);
    }
    let mut seen: HashMap<BTreeSet<StateId>, ()> = HashMap::new();
    let init: BTreeSet<StateId> = BTreeSet::from([c.initial()]);
    let mut queue = VecDeque::from([init.clone()]);
    seen.insert(init, ());
    while let Some(set) = queue.pop_front() {
        for sym in 0..c.alphabet().len() {
            let mut next = BTreeSet::new();
            for &s in &set {
                next.extend(c.successors(s, sym).iter().copied());
            }
            if next.is_empty() {
                return Ok(false);
            }
            if !seen.contains_key(&next) {
                if seen.len() >= MACRO_STATE_CAP {
                    return Err(Error::Capacity("density subset states".into(), MACRO_STATE_CAP));
                }
                seen.insert(next.clone(), ());
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

/// The limit language of a finite-word language W: infinite words with
/// infinitely many prefixes in W. Deterministic Buchi via the subset
/// automaton of W, accepting at macro-states containing a final state.
pub fn w_delta(w: &FiniteAutomaton) -> Result<BuchiAutomaton> {
    let mut index: HashMap<BTreeSet<StateId>, usize> = HashMap::new();
    let mut sets: Vec<BTreeSet<StateId>> = Vec::new();
    let init: BTreeSet<StateId> = BTreeSet::from([w.initial()]);
    index.insert(init.clone(), 0);
    sets.push(init);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::new();
        for sym in 0..w.alphabet().len() {
            let mut next = BTreeSet::new();
            for &s in &sets[i] {
                next.extend(w.successors(s, sym).iter().copied());
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = sets.len();
                    if j >= MACRO_STATE_CAP {
                        return Err(Error::Capacity("limit subset states".into(), MACRO_STATE_CAP));
                    }
                    index.insert(next.clone(), j);
                    sets.push(next);
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        delta.push(row);
    }
    let mut out = BuchiAutomaton::new(w.alphabet().clone(), sets.len(), 0, AcceptanceMode::Buchi)?;
    for (i, row) in delta.iter().enumerate() {
        out.set_final(i, sets[i].iter().any(|&s| w.is_final(s)));
        for (sym, &j) in row.iter().enumerate() {
            out.add_transition_idx(i, sym, j)?;
        }
    }
    Ok(out)
}

/// Position of a language in the low Borel hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BorelClassReport {
    pub is_open: bool,
    pub is_closed: bool,
    pub is_sigma2: bool,
    pub is_pi2: bool,
}

/// Loop structure of a deterministic Muller automaton, shared by the
/// classification predicates.
pub struct LoopStructure {
    pub loops: Vec<BTreeSet<StateId>>,
    pub accepting: Vec<bool>,
}

pub fn loop_structure(m: &MullerAutomaton) -> Result<LoopStructure> {
    let loops = determinize::reachable_loops(m)?;
    let accepting = loops.iter().map(|s| m.designates(s)).collect();
    Ok(LoopStructure { loops, accepting })
}

impl LoopStructure {
    /// Closed under designated-loop supersets (within loops).
    pub fn superset_closed(&self) -> bool {
        self.pairwise(|small_acc, large_acc| !small_acc || large_acc)
    }

    /// Closed under designated-loop subsets (within loops).
    pub fn subset_closed(&self) -> bool {
        self.pairwise(|small_acc, large_acc| !large_acc || small_acc)
    }

    fn pairwise(&self, ok: impl Fn(bool, bool) -> bool) -> bool {
        for (i, s) in self.loops.iter().enumerate() {
            for (j, t) in self.loops.iter().enumerate() {
                if s.is_subset(t) && !ok(self.accepting[i], self.accepting[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// States lying on some reachable designated loop.
pub fn designated_loop_states(m: &MullerAutomaton, adj: &[Vec<usize>], reach: &[bool]) -> Vec<bool> {
    let n = m.num_states();
    let mut good = vec![false; n];
    let mark = |comp: &BTreeSet<usize>, good: &mut Vec<bool>| {
        for &v in comp {
            good[v] = true;
        }
    };
    match m.acceptance() {
        MullerAcceptance::Table(table) => {
            for f in table {
                if f.iter().all(|&q| reach[q]) && graph::is_loop(adj, f) {
                    mark(f, &mut good);
                }
            }
        }
        MullerAcceptance::Rabin(pairs) => {
            // any SCC of a stay region meeting the hit set is itself designated
            for p in pairs {
                let allowed: Vec<bool> = (0..n).map(|v| reach[v] && p.stay[v]).collect();
                for comp in graph::component_loops(adj, &allowed) {
                    if comp.iter().any(|&v| p.hit[v]) {
                        mark(&comp, &mut good);
                    }
                }
            }
        }
        MullerAcceptance::Streett(pairs) => {
            // untrapped components are designated whole; trapped ones only
            // contribute through sub-loops avoiding the trapped hit states
            let mut frontier: Vec<Vec<bool>> = vec![reach.to_vec()];
            while let Some(region) = frontier.pop() {
                for comp in graph::component_loops(adj, &region) {
                    let trapped: Vec<&graph::LoopPair> = pairs
                        .iter()
                        .filter(|p| {
                            comp.iter().all(|&v| p.stay[v]) && comp.iter().any(|&v| p.hit[v])
                        })
                        .collect();
                    if trapped.is_empty() {
                        mark(&comp, &mut good);
                        continue;
                    }
                    let mut shrunk = vec![false; n];
                    for &v in &comp {
                        shrunk[v] = !trapped.iter().any(|p| p.hit[v]);
                    }
                    frontier.push(shrunk);
                }
            }
        }
    }
    good
}

/// Whether a deterministic Muller automaton accepts a closed language: every
/// loop reachable inside the live part must be designated.
pub fn muller_is_closed(m: &MullerAutomaton) -> Result<bool> {
    let adj = m.adjacency();
    let reach = graph::reachable(&adj, m.initial());
    // Live states: those from which some designated realizable loop is
    // reachable.
    let in_good = designated_loop_states(m, &adj, &reach);
    let live = graph::can_reach(&adj, &in_good);
    if !live[m.initial()] {
        return Ok(true); // empty language
    }
    let mut alive = vec![false; m.num_states()];
    for v in 0..m.num_states() {
        alive[v] = live[v] && reach[v];
    }
    // No loop of the live part may escape designation.
    match m.acceptance() {
        MullerAcceptance::Table(_) => {
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
            let loops = graph::enumerate_loops(&filtered, &alive, graph::LOOP_ENUM_SCC_MAX)?;
            Ok(loops.iter().all(|s| m.designates(s)))
        }
        MullerAcceptance::Rabin(pairs) => {
            Ok(graph::streett_loop(&adj, &alive, pairs, &[]).is_none())
        }
        MullerAcceptance::Streett(pairs) => Ok(pairs.iter().all(|p| {
            let allowed: Vec<bool> =
                (0..m.num_states()).map(|v| alive[v] && p.stay[v]).collect();
            graph::constrained_loop(&adj, &allowed, &[&p.hit]).is_none()
        })),
    }
}

/// Classifies an omega-regular language in the low Borel hierarchy,
/// deterministic machines directly and everything else via determinization.
pub fn classify(a: &BuchiAutomaton) -> Result<BorelClassReport> {
    if a.is_deterministic() && a.is_complete() {
        return match a.mode() {
            AcceptanceMode::Buchi => classify_det_buchi(a),
            AcceptanceMode::CoBuchi => {
                Ok(dual(classify_det_buchi(&determinize::complement(a)?)?))
            }
        };
    }
    let m = determinize::determinize(a)?;
    classify_muller(&m)
}

fn dual(r: BorelClassReport) -> BorelClassReport {
    BorelClassReport {
        is_open: r.is_closed,
        is_closed: r.is_open,
        is_sigma2: r.is_pi2,
        is_pi2: r.is_sigma2,
    }
}

/// Deterministic complete Buchi machine: always Pi-2; Sigma-2 fails exactly
/// when some loop meets the final states while a loop inside it avoids them.
fn classify_det_buchi(a: &BuchiAutomaton) -> Result<BorelClassReport> {
    let n = a.num_states();
    let adj = a.adjacency();
    let alive = graph::reachable(&adj, a.initial());
    let mut is_sigma2 = true;
    for comp in graph::component_loops(&adj, &alive) {
        if comp.iter().any(|&v| a.is_final(v)) {
            let inner: Vec<bool> = (0..n).map(|v| comp.contains(&v) && !a.is_final(v)).collect();
            if graph::constrained_loop(&adj, &inner, &[]).is_some() {
                is_sigma2 = false;
                break;
            }
        }
    }
    Ok(BorelClassReport {
        is_open: determinize::equivalent(a, &interior(a)?)?,
        is_closed: determinize::equivalent(a, &closure(a)?)?,
        is_sigma2,
        is_pi2: true,
    })
}

pub fn classify_muller(m: &MullerAutomaton) -> Result<BorelClassReport> {
    let is_closed = muller_is_closed(m)?;
    let comp = determinize::muller_complement(m)?;
    let is_open = muller_is_closed(&comp)?;
    let (subset_closed, superset_closed) = match m.acceptance() {
        MullerAcceptance::Table(_) => {
            let st = loop_structure(m)?;
            (st.subset_closed(), st.superset_closed())
        }
        // subset-closure of the designated family is superset-closure of the
        // complement's, so one one-sided test on a Rabin view covers both
        MullerAcceptance::Rabin(pairs) => (
            rabin_subset_closed(m, pairs),
            rabin_superset_closed(m, pairs),
        ),
        MullerAcceptance::Streett(_) => {
            let MullerAcceptance::Rabin(pairs) = comp.acceptance() else {
                unreachable!("complement of a Streett view is a Rabin view");
            };
            (
                rabin_superset_closed(&comp, pairs),
                rabin_subset_closed(&comp, pairs),
            )
        }
    };
    Ok(BorelClassReport {
        is_open,
        is_closed,
        is_sigma2: subset_closed || is_open,
        is_pi2: superset_closed || is_closed,
    })
}

/// No reachable designated loop may contain an undesignated loop. A maximal
/// designated witness is an SCC of some stay region meeting its hit set, so
/// those suffice as the outer loops.
fn rabin_subset_closed(m: &MullerAutomaton, pairs: &[graph::LoopPair]) -> bool {
    let n = m.num_states();
    let adj = m.adjacency();
    let reach = graph::reachable(&adj, m.initial());
    for p in pairs {
        let allowed: Vec<bool> = (0..n).map(|v| reach[v] && p.stay[v]).collect();
        for comp in graph::component_loops(&adj, &allowed) {
            if !comp.iter().any(|&v| p.hit[v]) {
                continue;
            }
            let inside: Vec<bool> = (0..n).map(|v| comp.contains(&v)).collect();
            if graph::streett_loop(&adj, &inside, pairs, &[]).is_some() {
                return false;
            }
        }
    }
    true
}

/// No reachable undesignated loop may contain a designated loop. The
/// undesignated outer candidates are the components visited by the Streett
/// emptiness recursion.
fn rabin_superset_closed(m: &MullerAutomaton, pairs: &[graph::LoopPair]) -> bool {
    let n = m.num_states();
    let adj = m.adjacency();
    let reach = graph::reachable(&adj, m.initial());
    let mut frontier: Vec<Vec<bool>> = vec![reach.clone()];
    while let Some(region) = frontier.pop() {
        for comp in graph::component_loops(&adj, &region) {
            let trapped: Vec<&graph::LoopPair> = pairs
                .iter()
                .filter(|p| comp.iter().all(|&v| p.stay[v]) && comp.iter().any(|&v| p.hit[v]))
                .collect();
            if !trapped.is_empty() {
                let mut shrunk = vec![false; n];
                for &v in &comp {
                    shrunk[v] = !trapped.iter().any(|p| p.hit[v]);
                }
                frontier.push(shrunk);
                continue;
            }
            // comp is an undesignated loop; any designated loop inside it?
            for p in pairs {
                let allowed: Vec<bool> =
                    (0..n).map(|v| comp.contains(&v) && p.stay[v]).collect();
                if graph::constrained_loop(&adj, &allowed, &[&p.hit]).is_some() {
                    return false;
                }
            }
        }
    }
    true
}

/// Builds a deterministic Buchi automaton equivalent to a Muller automaton
/// whose table is closed under loop supersets. Accumulates visited states and
/// takes a breakpoint whenever the accumulator covers a designated loop; the
/// result is checked against the input before being returned.
pub fn to_dba(m: &MullerAutomaton) -> Result<BuchiAutomaton> {
    // Canonicalize the table to realizable designated loops.
    let st = loop_structure(m)?;
    let table: Vec<BTreeSet<StateId>> = st
        .loops
        .iter()
        .zip(&st.accepting)
        .filter(|&(_, &acc)| acc)
        .map(|(s, _)| s.clone())
        .collect();
    let canon = m.with_table(table.clone());
    if !loop_structure(&canon)?.superset_closed() {
        return Err(Error::Precondition(
            "to_dba needs a table closed under loop supersets".into(),
        ));
    }
    // Breakpoint state: (machine state, accumulator, breakpoint-entry flag).
    type S = (StateId, BTreeSet<StateId>, bool);
    let covers = |r: &BTreeSet<StateId>| table.iter().any(|f| f.is_subset(r));
    let start: S = (canon.initial(), BTreeSet::new(), false);
    let mut index: HashMap<S, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states: Vec<S> = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (q, r, _) = states[i].clone();
        let mut row = Vec::new();
        for sym in 0..canon.alphabet().len() {
            let q2 = canon.successor(q, sym);
            let mut r2 = r.clone();
            r2.insert(q2);
            let next: S = if covers(&r2) {
                (q2, BTreeSet::new(), true)
            } else {
                (q2, r2, false)
            };
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = states.len();
                    if j >= MACRO_STATE_CAP {
                        return Err(Error::Capacity("breakpoint states".into(), MACRO_STATE_CAP));
                    }
                    index.insert(next.clone(), j);
                    states.push(next);
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        delta.push(row);
    }
    let mut out = BuchiAutomaton::new(canon.alphabet().clone(), states.len(), 0, AcceptanceMode::Buchi)?;
    for (i, row) in delta.iter().enumerate() {
        out.set_final(i, states[i].2);
        for (sym, &j) in row.iter().enumerate() {
            out.add_transition_idx(i, sym, j)?;
        }
    }
    let out = determinize::minimize_det(&out)?;
    if !determinize::dba_equals_muller(&out, &canon)? {
        return Err(Error::Construction(
            "breakpoint automaton disagrees with its Muller source".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::membership::{is_empty_buchi, member_buchi};
    use crate::word::UPWord;

    fn up(lit: &str) -> UPWord {
        UPWord::parse(lit).unwrap()
    }

    fn inf_a() -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(0, true);
        a
    }

    fn a_cylinder() -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 1).unwrap();
        a.add_transition(1, 'a', 1).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(1, true);
        a
    }

    /// {a^omega}
    fn a_omega() -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::ab(), 1, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.set_final(0, true);
        a
    }

    #[test]
    fn closure_of_inf_a_is_everything() {
        let c = closure(&inf_a()).unwrap();
        assert!(member_buchi(&c, &up("a(b)")).unwrap());
        assert!(member_buchi(&c, &up("(b)")).unwrap());
        assert!(is_dense(&inf_a()).unwrap());
    }

    #[test]
    fn closure_of_cylinder_is_itself() {
        let c = closure(&a_cylinder()).unwrap();
        assert!(member_buchi(&c, &up("a(b)")).unwrap());
        assert!(!member_buchi(&c, &up("(b)")).unwrap());
        assert!(!is_dense(&a_cylinder()).unwrap());
    }

    #[test]
    fn interior_of_singleton_is_empty() {
        let i = interior(&a_omega()).unwrap();
        assert!(is_empty_buchi(&i));
        // but a cylinder is open: interior is itself
        let i = interior(&a_cylinder()).unwrap();
        assert!(member_buchi(&i, &up("a(b)")).unwrap());
        assert!(!member_buchi(&i, &up("(b)")).unwrap());
    }

    #[test]
    fn classification_fixtures() {
        // cylinder: clopen
        let r = classify(&a_cylinder()).unwrap();
        assert!(r.is_open && r.is_closed && r.is_sigma2 && r.is_pi2);
        // {a^omega}: closed, not open
        let r = classify(&a_omega()).unwrap();
        assert!(!r.is_open && r.is_closed && r.is_sigma2 && r.is_pi2);
        // inf a: Pi2-complete, not Sigma2
        let r = classify(&inf_a()).unwrap();
        assert!(!r.is_open && !r.is_closed && !r.is_sigma2 && r.is_pi2);
        // fin a = complement of inf a: Sigma2, not Pi2
        let comp = determinize::complement(&inf_a()).unwrap();
        let r = classify(&comp).unwrap();
        assert!(!r.is_open && !r.is_closed && r.is_sigma2 && !r.is_pi2);
    }

    #[test]
    fn w_delta_of_prefix_closed_words() {
        // W = a*: W^delta = {a^omega}
        let mut w = FiniteAutomaton::new(Alphabet::ab(), 1, 0).unwrap();
        w.add_transition(0, 'a', 0).unwrap();
        w.set_final(0, true);
        let l = w_delta(&w).unwrap();
        assert!(member_buchi(&l, &up("(a)")).unwrap());
        assert!(!member_buchi(&l, &up("(ab)")).unwrap());
        assert!(!member_buchi(&l, &up("b(a)")).unwrap());
    }

    #[test]
    fn to_dba_on_inf_a() {
        let m = determinize::determinize(&inf_a()).unwrap();
        let d = to_dba(&m).unwrap();
        assert!(d.is_deterministic() && d.is_complete());
        for lit in ["(a)", "(b)", "(ab)", "a(b)", "b(a)"] {
            assert_eq!(
                member_buchi(&d, &up(lit)).unwrap(),
                member_buchi(&inf_a(), &up(lit)).unwrap()
            );
        }
    }

    #[test]
    fn to_dba_rejects_sigma2_complete() {
        // finitely many a is not Pi2
        let m = determinize::determinize(&determinize::complement(&inf_a()).unwrap()).unwrap();
        assert!(matches!(to_dba(&m), Err(Error::Precondition(_))));
    }
}
