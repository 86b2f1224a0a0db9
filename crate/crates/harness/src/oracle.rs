//! Brute-force membership oracle, written independently of the optimized
//! decision procedures in the library so the two can cross-check each other.

use std::collections::BTreeSet;

use obaire::automaton::AcceptanceMode;
use obaire::format::Automaton;
use obaire::{BuchiAutomaton, MullerAutomaton, Result, StateId, UPWord};

/// Naive membership for any automaton kind carried by the file format.
pub fn member(a: &Automaton, x: &UPWord) -> Result<bool> {
    match a {
        Automaton::Buchi(b) => match b.mode() {
            AcceptanceMode::Buchi => member_buchi_naive(b, x),
            AcceptanceMode::CoBuchi => {
                let (_, visited) = settled_cycle(
                    |s, sym| b.det_successor(s, sym).expect("validated machine"),
                    b.initial(),
                    b.alphabet(),
                    x,
                )?;
                Ok(visited.iter().all(|&s| !b.is_final(s)))
            }
        },
        Automaton::Muller(m) => member_muller_naive(m, x),
        Automaton::Finite(_) => Err(obaire::Error::Precondition(
            "an omega-automaton for lasso membership".into(),
        )),
    }
}

/// Naive nondeterministic Buchi membership on `u (v)^omega`: collect the
/// state set after `u`, build the one-period hop relation with a
/// passed-final flag by direct simulation, and look for a reachable state
/// that hops back to itself with a final on the way (or is itself final).
pub fn member_buchi_naive(a: &BuchiAutomaton, x: &UPWord) -> Result<bool> {
    x.check_alphabet(a.alphabet())?;
    let x = x.canonical();
    let n = a.num_states();

    let mut after_prefix: BTreeSet<StateId> = BTreeSet::new();
    after_prefix.insert(a.initial());
    for &c in x.prefix() {
        let sym = a.alphabet().index_of(c)?;
        after_prefix = after_prefix
            .iter()
            .flat_map(|&s| a.successors(s, sym).iter().copied())
            .collect();
    }

    // hop[s] = (t, f): running one period from s can end in t, f = some
    // final state was entered along the way
    let mut hop: Vec<BTreeSet<(StateId, bool)>> = Vec::with_capacity(n);
    for s in 0..n {
        let mut cur: BTreeSet<(StateId, bool)> = BTreeSet::new();
        cur.insert((s, false));
        for &c in x.period() {
            let sym = a.alphabet().index_of(c)?;
            let mut next = BTreeSet::new();
            for (q, f) in cur {
                for &t in a.successors(q, sym) {
                    next.insert((t, f || a.is_final(t)));
                }
            }
            cur = next;
        }
        hop.push(cur);
    }

    // states on some period boundary of some run
    let mut boundary = after_prefix.clone();
    loop {
        let grown: BTreeSet<StateId> = boundary
            .iter()
            .flat_map(|&s| hop[s].iter().map(|&(t, _)| t))
            .chain(boundary.iter().copied())
            .collect();
        if grown == boundary {
            break;
        }
        boundary = grown;
    }

    for &s in &boundary {
        // multi-hop search from s for a flagged return to s
        let mut seen: BTreeSet<(StateId, bool)> = hop[s].clone();
        let mut frontier: Vec<(StateId, bool)> = seen.iter().copied().collect();
        while let Some((q, f)) = frontier.pop() {
            if q == s && (f || a.is_final(s)) {
                return Ok(true);
            }
            for &(t, f2) in &hop[q] {
                let entry = (t, f || f2);
                if seen.insert(entry) {
                    frontier.push(entry);
                }
            }
        }
    }
    Ok(false)
}

/// Naive deterministic Muller membership: find the settled cycle of period
/// boundaries and collect every state visited along it.
pub fn member_muller_naive(m: &MullerAutomaton, x: &UPWord) -> Result<bool> {
    x.check_alphabet(m.alphabet())?;
    let (_, visited) = settled_cycle(|s, sym| m.successor(s, sym), m.initial(), m.alphabet(), x)?;
    Ok(m.designates(&visited))
}

/// Runs a deterministic machine on the lasso until the state at a period
/// boundary repeats; returns that state and all states visited during the
/// repeating stretch of whole periods.
fn settled_cycle(
    step: impl Fn(StateId, usize) -> StateId,
    initial: StateId,
    alphabet: &obaire::Alphabet,
    x: &UPWord,
) -> Result<(StateId, BTreeSet<StateId>)> {
    let x = x.canonical();
    let mut s = initial;
    for &c in x.prefix() {
        s = step(s, alphabet.index_of(c)?);
    }
    let one_period = |mut q: StateId| -> Result<(StateId, Vec<StateId>)> {
        let mut visited = Vec::new();
        for &c in x.period() {
            q = step(q, alphabet.index_of(c)?);
            visited.push(q);
        }
        Ok((q, visited))
    };
    let mut boundaries = vec![s];
    loop {
        let (t, _) = one_period(s)?;
        if let Some(idx) = boundaries.iter().position(|&b| b == t) {
            let mut visited = BTreeSet::new();
            let mut q = boundaries[idx];
            loop {
                let (t2, vs) = one_period(q)?;
                visited.extend(vs);
                q = t2;
                if q == boundaries[idx] {
                    break;
                }
            }
            return Ok((boundaries[idx], visited));
        }
        boundaries.push(t);
        s = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use obaire::membership;

    fn up(lit: &str) -> UPWord {
        UPWord::parse(lit).unwrap()
    }

    fn inf_a() -> BuchiAutomaton {
        let mut a =
            BuchiAutomaton::new(obaire::Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(0, true);
        a
    }

    #[test]
    fn oracle_matches_optimized_on_fixture() {
        let a = inf_a();
        for lit in ["(a)", "(b)", "(ab)", "ab(b)", "ba(ab)", "bbb(a)"] {
            let w = up(lit);
            assert_eq!(
                member_buchi_naive(&a, &w).unwrap(),
                membership::member_buchi(&a, &w).unwrap(),
                "{lit}"
            );
        }
    }

    #[test]
    fn nondeterministic_guessing_automaton() {
        // "finitely many b": guess the last b nondeterministically
        let mut a =
            BuchiAutomaton::new(obaire::Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 0).unwrap();
        a.add_transition(0, 'a', 1).unwrap();
        a.add_transition(1, 'a', 1).unwrap();
        a.set_final(1, true);
        assert!(member_buchi_naive(&a, &up("bbb(a)")).unwrap());
        assert!(!member_buchi_naive(&a, &up("(ba)")).unwrap());
        assert!(!member_buchi_naive(&a, &up("(b)")).unwrap());
    }
}
