//! Hand-built languages over {a, b} with known topological status, plus the
//! two reference transducers.

use obaire::automaton::AcceptanceMode;
use obaire::transducer::TwoTapeTransducer;
use obaire::{ops, Alphabet, BuchiAutomaton};

fn nba(states: usize, finals: &[usize], edges: &[(usize, char, usize)]) -> BuchiAutomaton {
    let mut a = BuchiAutomaton::new(Alphabet::ab(), states, 0, AcceptanceMode::Buchi).unwrap();
    for &(s, c, d) in edges {
        a.add_transition(s, c, d).unwrap();
    }
    for &f in finals {
        a.set_final(f, true);
    }
    a
}

pub fn empty() -> BuchiAutomaton {
    BuchiAutomaton::empty(Alphabet::ab())
}

pub fn universal() -> BuchiAutomaton {
    BuchiAutomaton::universal(Alphabet::ab())
}

/// a.Sigma^omega — a clopen cylinder.
pub fn cyl_a() -> BuchiAutomaton {
    nba(2, &[1], &[(0, 'a', 1), (1, 'a', 1), (1, 'b', 1)])
}

/// {a^omega} — closed, not open.
pub fn only_a() -> BuchiAutomaton {
    nba(1, &[0], &[(0, 'a', 0)])
}

/// Complement of {a^omega}: some b occurs — open, not closed.
pub fn some_b() -> BuchiAutomaton {
    nba(2, &[1], &[(0, 'a', 0), (0, 'b', 1), (1, 'a', 1), (1, 'b', 1)])
}

/// Finitely many b — Sigma^0_2, not Pi^0_2.
pub fn fin_b() -> BuchiAutomaton {
    nba(2, &[1], &[(0, 'a', 0), (0, 'b', 0), (0, 'a', 1), (1, 'a', 1)])
}

/// Finitely many a — Sigma^0_2, not Pi^0_2.
pub fn fin_a() -> BuchiAutomaton {
    nba(2, &[1], &[(0, 'a', 0), (0, 'b', 0), (0, 'b', 1), (1, 'b', 1)])
}

/// Infinitely many a — Pi^0_2, not Sigma^0_2.
pub fn inf_a() -> BuchiAutomaton {
    nba(2, &[0], &[(0, 'a', 0), (0, 'b', 1), (1, 'a', 0), (1, 'b', 1)])
}

/// Infinitely many b — Pi^0_2, not Sigma^0_2.
pub fn inf_b() -> BuchiAutomaton {
    nba(2, &[0], &[(0, 'b', 0), (0, 'a', 1), (1, 'b', 0), (1, 'a', 1)])
}

/// {a^omega} union b.Sigma^omega — closed but not meager.
pub fn only_a_or_cyl_b() -> BuchiAutomaton {
    nba(
        3,
        &[0, 2],
        &[(0, 'a', 0), (0, 'b', 1), (1, 'a', 2), (1, 'b', 2), (2, 'a', 2), (2, 'b', 2)],
    )
}

/// (Finitely many a) union a.(infinitely many b) — a Boolean combination of
/// Sigma^0_2 sets lying in neither Sigma^0_2 nor Pi^0_2.
pub fn neither_class() -> BuchiAutomaton {
    // a.(inf b): an initial a, then infinitely many b
    let guarded_inf_b = nba(
        3,
        &[1],
        &[(0, 'a', 1), (1, 'b', 1), (1, 'a', 2), (2, 'b', 1), (2, 'a', 2)],
    );
    ops::union(&fin_a(), &guarded_inf_b).unwrap()
}

/// The identity function on Sigma^omega as a synchronous transducer.
pub fn identity() -> TwoTapeTransducer {
    let ab = Alphabet::ab();
    let mut t = TwoTapeTransducer::new(ab.clone(), ab, 1, 0, true).unwrap();
    t.add_transition(0, ['a'], ['a'], 0).unwrap();
    t.add_transition(0, ['b'], ['b'], 0).unwrap();
    t.set_final(0, true);
    t
}

/// The b-counting function: outputs one b per input b, so inputs with
/// infinitely many b map to b^omega and inputs with finitely many b map to
/// a^omega. Discontinuous at every word with finitely many b.
pub fn b_counter() -> TwoTapeTransducer {
    let ab = Alphabet::ab();
    let mut t = TwoTapeTransducer::new(ab.clone(), ab, 4, 0, false).unwrap();
    t.add_transition(0, [], [], 1).unwrap();
    t.add_transition(1, ['a'], [], 1).unwrap();
    t.add_transition(1, ['b'], ['b'], 1).unwrap();
    t.set_final(1, true);
    t.add_transition(0, [], [], 2).unwrap();
    t.add_transition(2, ['a'], ['a'], 2).unwrap();
    t.add_transition(2, ['b'], ['a'], 2).unwrap();
    t.add_transition(2, [], [], 3).unwrap();
    t.add_transition(3, ['a'], ['a'], 3).unwrap();
    t.set_final(3, true);
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use obaire::{baire, topology};

    #[test]
    fn classifications_match_construction() {
        let report = |a: &BuchiAutomaton| topology::classify(a).unwrap();
        let r = report(&cyl_a());
        assert!(r.is_open && r.is_closed);
        let r = report(&only_a());
        assert!(r.is_closed && !r.is_open);
        let r = report(&some_b());
        assert!(r.is_open && !r.is_closed);
        let r = report(&fin_a());
        assert!(r.is_sigma2 && !r.is_pi2);
        let r = report(&inf_a());
        assert!(r.is_pi2 && !r.is_sigma2);
        let r = report(&neither_class());
        assert!(!r.is_sigma2 && !r.is_pi2, "expected neither class");
    }

    #[test]
    fn meagerness_truth_table() {
        assert!(baire::is_meager(&empty()).unwrap());
        assert!(!baire::is_meager(&universal()).unwrap());
        assert!(!baire::is_meager(&cyl_a()).unwrap());
        assert!(baire::is_meager(&only_a()).unwrap());
        assert!(baire::is_meager(&fin_b()).unwrap());
        assert!(!baire::is_meager(&inf_a()).unwrap());
        assert!(!baire::is_meager(&only_a_or_cyl_b()).unwrap());
    }
}
