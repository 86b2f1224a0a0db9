//! Boolean and rational operations on Buchi automata.

use crate::automaton::{AcceptanceMode, BuchiAutomaton, FiniteAutomaton, StateId};
use crate::error::{Error, Result};
use crate::graph;

fn check_alphabets(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Converts a deterministic co-Buchi automaton into an equivalent
/// nondeterministic Buchi automaton (two-copy construction: guess the point
/// after which no rejecting state is visited).
pub fn cobuchi_to_nba(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    a.validate()?;
    if a.mode() != AcceptanceMode::CoBuchi {
        return Err(Error::Precondition(
            "cobuchi_to_nba expects a co-Buchi automaton".into(),
        ));
    }
    let n = a.num_states();
    // States 0..n are the waiting copy, n..2n the committed copy (restricted
    // to non-final states, all accepting).
    let mut out = BuchiAutomaton::new(a.alphabet().clone(), 2 * n, a.initial(), AcceptanceMode::Buchi)?;
    for s in 0..n {
        for sym in 0..a.alphabet().len() {
            let t = a.det_successor(s, sym).expect("co-Buchi automata are complete");
            out.add_transition_idx(s, sym, t)?;
            if !a.is_final(t) {
                out.add_transition_idx(s, sym, n + t)?;
                if !a.is_final(s) {
                    out.add_transition_idx(n + s, sym, n + t)?;
                }
            }
        }
    }
    for s in 0..n {
        out.set_final(n + s, true);
    }
    Ok(out)
}

/// Coerces any accepted automaton shape into plain Buchi mode.
pub fn to_buchi(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    match a.mode() {
        AcceptanceMode::Buchi => Ok(a.clone()),
        AcceptanceMode::CoBuchi => cobuchi_to_nba(a),
    }
}

/// Union via disjoint sum with a fresh initial state.
pub fn union(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    check_alphabets(a, b)?;
    let a = to_buchi(a)?;
    let b = to_buchi(b)?;
    let na = a.num_states();
    let nb = b.num_states();
    let init = na + nb;
    let mut out = BuchiAutomaton::new(a.alphabet().clone(), na + nb + 1, init, AcceptanceMode::Buchi)?;
    for s in 0..na {
        for sym in 0..a.alphabet().len() {
            for &t in a.successors(s, sym) {
                out.add_transition_idx(s, sym, t)?;
                if s == a.initial() {
                    out.add_transition_idx(init, sym, t)?;
                }
            }
        }
        out.set_final(s, a.is_final(s));
    }
    for s in 0..nb {
        for sym in 0..b.alphabet().len() {
            for &t in b.successors(s, sym) {
                out.add_transition_idx(na + s, sym, na + t)?;
                if s == b.initial() {
                    out.add_transition_idx(init, sym, na + t)?;
                }
            }
        }
        out.set_final(na + s, b.is_final(s));
    }
    Ok(out)
}

/// Intersection via the two-flag product: the flag tracks which operand still
/// owes a visit to its final set.
pub fn intersection(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    check_alphabets(a, b)?;
    let a = to_buchi(a)?;
    let b = to_buchi(b)?;
    let na = a.num_states();
    let nb = b.num_states();
    // state = ((s, t), flag) with flag in {0,1}
    let idx = |s: StateId, t: StateId, f: usize| (s * nb + t) * 2 + f;
    let mut out = BuchiAutomaton::new(
        a.alphabet().clone(),
        na * nb * 2,
        idx(a.initial(), b.initial(), 0),
        AcceptanceMode::Buchi,
    )?;
    for s in 0..na {
        for t in 0..nb {
            for f in 0..2 {
                // The flag flips on leaving a final state of the operand it
                // currently watches; both flip infinitely often iff both
                // operands accept.
                let f2 = match f {
                    0 if a.is_final(s) => 1,
                    1 if b.is_final(t) => 0,
                    _ => f,
                };
                for sym in 0..a.alphabet().len() {
                    for &s2 in a.successors(s, sym) {
                        for &t2 in b.successors(t, sym) {
                            out.add_transition_idx(idx(s, t, f), sym, idx(s2, t2, f2))?;
                        }
                    }
                }
                out.set_final(idx(s, t, f), f == 1 && b.is_final(t));
            }
        }
    }
    trim(&out)
}

/// Left concatenation W . L of a finite-word language with an omega language.
/// The result guesses the split point; if the empty word belongs to W the
/// omega part is reachable directly.
pub fn concat_left(w: &FiniteAutomaton, l: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    if w.alphabet() != l.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let l = to_buchi(l)?;
    let nw = w.num_states();
    let nl = l.num_states();
    let fresh = nw + nl;
    let linit = nw + l.initial();
    let mut out = BuchiAutomaton::new(l.alphabet().clone(), nw + nl + 1, fresh, AcceptanceMode::Buchi)?;
    for s in 0..nw {
        for sym in 0..w.alphabet().len() {
            for &t in w.successors(s, sym) {
                out.add_transition_idx(s, sym, t)?;
                if s == w.initial() {
                    out.add_transition_idx(fresh, sym, t)?;
                }
                if w.is_final(t) {
                    // Entering t completes a W-word; continue as L from its
                    // initial state (the copied state linit).
                    out.add_transition_idx(s, sym, linit)?;
                    if s == w.initial() {
                        out.add_transition_idx(fresh, sym, linit)?;
                    }
                }
            }
        }
    }
    for s in 0..nl {
        for sym in 0..l.alphabet().len() {
            for &t in l.successors(s, sym) {
                out.add_transition_idx(nw + s, sym, nw + t)?;
            }
        }
        out.set_final(nw + s, l.is_final(s));
    }
    if w.is_final(w.initial()) {
        // epsilon in W: the fresh initial behaves like L's initial too.
        for sym in 0..l.alphabet().len() {
            let succs: Vec<StateId> = l.successors(l.initial(), sym).to_vec();
            for t in succs {
                out.add_transition_idx(fresh, sym, nw + t)?;
            }
        }
        out.set_final(fresh, l.is_final(l.initial()));
    }
    trim(&out)
}

/// Removes states that are unreachable from the initial state. Keeps the
/// automaton shape (mode, alphabet); deterministic completeness is not
/// preserved, so this is only applied to plain Buchi automata.
pub fn trim(a: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    let adj = a.adjacency();
    let reach = graph::reachable(&adj, a.initial());
    let mut map = vec![usize::MAX; a.num_states()];
    let mut count = 0;
    for s in 0..a.num_states() {
        if reach[s] {
            map[s] = count;
            count += 1;
        }
    }
    let mut out = BuchiAutomaton::new(a.alphabet().clone(), count, map[a.initial()], a.mode())?;
    for s in 0..a.num_states() {
        if !reach[s] {
            continue;
        }
        out.set_final(map[s], a.is_final(s));
        for sym in 0..a.alphabet().len() {
            for &t in a.successors(s, sym) {
                if reach[t] {
                    out.add_transition_idx(map[s], sym, map[t])?;
                }
            }
        }
    }
    Ok(out)
}

/// States from which some accepting run can start: states that can reach a
/// cycle through a final state (Buchi mode only).
pub fn live_states(a: &BuchiAutomaton) -> Vec<bool> {
    debug_assert_eq!(a.mode(), AcceptanceMode::Buchi);
    let adj = a.adjacency();
    let mut on_good_cycle = vec![false; a.num_states()];
    for comp in graph::sccs(&adj) {
        let has_cycle = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
        if has_cycle && comp.iter().any(|&v| a.is_final(v)) {
            for &v in &comp {
                on_good_cycle[v] = true;
            }
        }
    }
    graph::can_reach(&adj, &on_good_cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::membership::member_buchi;
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

    fn inf_b() -> BuchiAutomaton {
        let mut a = inf_a();
        a.set_final(0, false);
        a.set_final(1, true);
        a
    }

    #[test]
    fn union_and_intersection() {
        let u = union(&inf_a(), &inf_b()).unwrap();
        assert!(member_buchi(&u, &up("(a)")).unwrap());
        assert!(member_buchi(&u, &up("(b)")).unwrap());
        let i = intersection(&inf_a(), &inf_b()).unwrap();
        assert!(member_buchi(&i, &up("(ab)")).unwrap());
        assert!(!member_buchi(&i, &up("(a)")).unwrap());
        assert!(!member_buchi(&i, &up("(b)")).unwrap());
    }

    #[test]
    fn cobuchi_roundtrip() {
        // finitely many b, as deterministic co-Buchi
        let mut c = BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::CoBuchi).unwrap();
        c.add_transition(0, 'a', 0).unwrap();
        c.add_transition(0, 'b', 1).unwrap();
        c.add_transition(1, 'a', 0).unwrap();
        c.add_transition(1, 'b', 1).unwrap();
        c.set_final(1, true);
        let n = cobuchi_to_nba(&c).unwrap();
        for lit in ["(a)", "bb(a)", "(ab)", "(b)", "a(b)"] {
            assert_eq!(
                member_buchi(&n, &up(lit)).unwrap(),
                member_buchi(&c, &up(lit)).unwrap(),
                "word {lit}"
            );
        }
    }

    #[test]
    fn concat_basic() {
        // W = {"ab"}, L = b^omega  =>  W.L = ab.b^omega = a(b)
        let mut w = FiniteAutomaton::new(Alphabet::ab(), 3, 0).unwrap();
        w.add_transition(0, 'a', 1).unwrap();
        w.add_transition(1, 'b', 2).unwrap();
        w.set_final(2, true);
        let mut l = BuchiAutomaton::new(Alphabet::ab(), 1, 0, AcceptanceMode::Buchi).unwrap();
        l.add_transition(0, 'b', 0).unwrap();
        l.set_final(0, true);
        let c = concat_left(&w, &l).unwrap();
        assert!(member_buchi(&c, &up("a(b)")).unwrap());
        assert!(member_buchi(&c, &up("ab(b)")).unwrap());
        assert!(!member_buchi(&c, &up("(b)")).unwrap());
        assert!(!member_buchi(&c, &up("a(ab)")).unwrap());
    }

    #[test]
    fn concat_with_epsilon() {
        // W = {epsilon, "a"}, L = b^omega
        let mut w = FiniteAutomaton::new(Alphabet::ab(), 2, 0).unwrap();
        w.add_transition(0, 'a', 1).unwrap();
        w.set_final(0, true);
        w.set_final(1, true);
        let mut l = BuchiAutomaton::new(Alphabet::ab(), 1, 0, AcceptanceMode::Buchi).unwrap();
        l.add_transition(0, 'b', 0).unwrap();
        l.set_final(0, true);
        let c = concat_left(&w, &l).unwrap();
        assert!(member_buchi(&c, &up("(b)")).unwrap());
        assert!(member_buchi(&c, &up("a(b)")).unwrap());
        assert!(!member_buchi(&c, &up("aa(b)")).unwrap());
    }
}
