//! The release gate: seven independent criteria, each printing one
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any failure fails the corresponding test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use obaire::format::Automaton;
use obaire::transducer::{self, TwoTapeTransducer};
use obaire::{baire, determinize, membership, ops, topology};
use obaire::{Alphabet, BuchiAutomaton, UPWord};

use obaire_cli::check;
use obaire_cli::corpus::{self, LassoCorpus};
use obaire_cli::fixtures;
use obaire_cli::oracle;

fn gate(criterion: u32, label: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("criterion {criterion} ({label}): pass"),
        Err(why) => {
            println!("criterion {criterion} ({label}): fail — {why}");
            panic!("criterion {criterion} failed: {why}");
        }
    }
}

fn corpus33() -> LassoCorpus {
    LassoCorpus::new(Alphabet::ab(), 3, 3)
}

#[test]
fn criterion_1_baire_contract() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ab = Alphabet::ab();
        let corpus = corpus33();
        for i in 0..200 {
            let a = corpus::random_nba(&mut rng, &ab, 5);
            let dec = baire::automatic_baire(&a).map_err(|e| format!("nba {i}: {e}"))?;
            let report = check::check_baire_triple(&Automaton::Buchi(a), &dec, &corpus)
                .map_err(|e| format!("nba {i}: {e}"))?;
            if !report.verdict {
                return Err(format!("nba {i}: {:?}", report.counterexamples));
            }
        }
        for i in 0..100 {
            let m = corpus::random_dma(&mut rng, &ab, 5);
            let dec = baire::automatic_baire_muller(&m).map_err(|e| format!("dma {i}: {e}"))?;
            let report = check::check_baire_triple(&Automaton::Muller(m), &dec, &corpus)
                .map_err(|e| format!("dma {i}: {e}"))?;
            if !report.verdict {
                return Err(format!("dma {i}: {:?}", report.counterexamples));
            }
        }
        Ok(())
    };
    gate(1, "Baire decomposition contract on 300 random automata", run());
}

#[test]
fn criterion_2_meagerness_decisions() {
    let run = || -> Result<(), String> {
        let table: [(&str, BuchiAutomaton, bool); 7] = [
            ("empty", fixtures::empty(), true),
            ("universal", fixtures::universal(), false),
            ("a-cylinder", fixtures::cyl_a(), false),
            ("only-a", fixtures::only_a(), true),
            ("finitely-many-b", fixtures::fin_b(), true),
            ("infinitely-many-a", fixtures::inf_a(), false),
            ("only-a-or-b-cylinder", fixtures::only_a_or_cyl_b(), false),
        ];
        for (name, a, expected) in table {
            let got = baire::is_meager(&a).map_err(|e| format!("{name}: {e}"))?;
            if got != expected {
                return Err(format!("{name}: is_meager = {got}, expected {expected}"));
            }
        }
        Ok(())
    };
    gate(2, "meagerness decision against hand-derived truth", run());
}

#[test]
fn criterion_3_determinization_soundness() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ab = Alphabet::ab();
        let corpus = corpus33();
        for i in 0..200 {
            let a = corpus::random_nba(&mut rng, &ab, 5);
            let m = determinize::determinize(&a).map_err(|e| format!("nba {i}: {e}"))?;
            for x in &corpus.words {
                let lhs = membership::member_buchi(&a, x).map_err(|e| format!("nba {i}: {e}"))?;
                let rhs = membership::member_muller(&m, x).map_err(|e| format!("nba {i}: {e}"))?;
                if lhs != rhs {
                    return Err(format!("nba {i}: determinization disagrees on {x}"));
                }
            }
            let mc = determinize::muller_complement(&m).map_err(|e| format!("nba {i}: {e}"))?;
            let c = determinize::muller_to_buchi(&mc).map_err(|e| format!("nba {i}: {e}"))?;
            let clash = ops::intersection(&a, &c).map_err(|e| format!("nba {i}: {e}"))?;
            if let Some(x) = membership::accepting_lasso(&clash) {
                return Err(format!("nba {i}: complement overlaps on {x}"));
            }
            // the complement automaton may not leak back into the original
            // determinized language either
            if let Some(x) = membership::intersection_witness_muller(&c, &m)
                .map_err(|e| format!("nba {i}: {e}"))?
            {
                return Err(format!("nba {i}: complement overlaps the muller language on {x}"));
            }
            // covering is spot-checked per lasso (a full symbolic check would
            // need the complement being validated)
            for x in &corpus.words {
                let in_c = membership::member_buchi(&c, x).map_err(|e| format!("nba {i}: {e}"))?;
                if in_c
                    != membership::member_muller(&mc, x).map_err(|e| format!("nba {i}: {e}"))?
                {
                    return Err(format!("nba {i}: complement translation disagrees on {x}"));
                }
                if !in_c && !membership::member_buchi(&a, x).map_err(|e| format!("nba {i}: {e}"))? {
                    return Err(format!("nba {i}: complement fails to cover {x}"));
                }
            }
        }
        Ok(())
    };
    gate(3, "determinization and complement on 200 random automata", run());
}

#[test]
fn criterion_4_topological_classification() {
    let run = || -> Result<(), String> {
        // (fixture, open, closed, sigma2, pi2)
        let table: [(&str, BuchiAutomaton, [bool; 4]); 8] = [
            ("a-cylinder", fixtures::cyl_a(), [true, true, true, true]),
            ("only-a", fixtures::only_a(), [false, true, true, true]),
            ("some-b", fixtures::some_b(), [true, false, true, true]),
            ("finitely-many-a", fixtures::fin_a(), [false, false, true, false]),
            ("infinitely-many-a", fixtures::inf_a(), [false, false, false, true]),
            ("universal", fixtures::universal(), [true, true, true, true]),
            ("empty", fixtures::empty(), [true, true, true, true]),
            ("neither-class", fixtures::neither_class(), [false, false, false, false]),
        ];
        for (name, a, [open, closed, sigma2, pi2]) in table {
            let r = topology::classify(&a).map_err(|e| format!("{name}: {e}"))?;
            if (r.is_open, r.is_closed, r.is_sigma2, r.is_pi2) != (open, closed, sigma2, pi2) {
                return Err(format!(
                    "{name}: classified ({}, {}, {}, {})",
                    r.is_open, r.is_closed, r.is_sigma2, r.is_pi2
                ));
            }
            if pi2 {
                let m = determinize::determinize(&a).map_err(|e| format!("{name}: {e}"))?;
                let dba = topology::to_dba(&m).map_err(|e| format!("{name}: {e}"))?;
                if !determinize::equivalent(&dba, &a).map_err(|e| format!("{name}: {e}"))? {
                    return Err(format!("{name}: deterministic Buchi form is not equivalent"));
                }
            }
        }
        Ok(())
    };
    gate(4, "classification of eight canonical languages", run());
}

fn certified_transducers() -> Result<Vec<(String, TwoTapeTransducer)>, String> {
    let mut ts = vec![
        ("identity".to_string(), fixtures::identity()),
        ("b-counter".to_string(), fixtures::b_counter()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ab = Alphabet::ab();
    for i in 0..20 {
        let t = corpus::random_sync_functional(&mut rng, &ab, 4)
            .map_err(|e| format!("random transducer {i}: {e}"))?;
        ts.push((format!("random-{i}"), t));
    }
    Ok(ts)
}

/// A few probe points inside the restriction and the domain.
fn probe_points(
    g: &BuchiAutomaton,
    domain: &BuchiAutomaton,
    corpus: &LassoCorpus,
) -> Result<Vec<UPWord>, String> {
    let mut points = Vec::new();
    for x in &corpus.words {
        if membership::member_buchi(g, x).map_err(|e| e.to_string())?
            && membership::member_buchi(domain, x).map_err(|e| e.to_string())?
        {
            points.push(x.clone());
            if points.len() == 3 {
                break;
            }
        }
    }
    Ok(points)
}

#[test]
fn criterion_5_continuity_restriction() {
    let run = || -> Result<(), String> {
        let corpus = LassoCorpus::new(Alphabet::ab(), 2, 2);
        for (name, t) in certified_transducers()? {
            let cert = transducer::continuity_restriction(&t).map_err(|e| format!("{name}: {e}"))?;
            let class = topology::classify(&cert.g).map_err(|e| format!("{name}: {e}"))?;
            if !class.is_pi2 {
                return Err(format!("{name}: restriction set is not Pi^0_2"));
            }
            if !topology::is_dense(&cert.g).map_err(|e| format!("{name}: {e}"))? {
                return Err(format!("{name}: restriction set is not dense"));
            }
            let overlap = ops::intersection(&cert.g, &cert.error_set)
                .map_err(|e| format!("{name}: {e}"))?;
            if let Some(x) = membership::accepting_lasso(&overlap) {
                return Err(format!("{name}: restriction meets the error set at {x}"));
            }
            let domain = transducer::dom(&t).map_err(|e| format!("{name}: {e}"))?;
            for x in probe_points(&cert.g, &domain, &corpus)? {
                let report = transducer::restricted_continuity_probe(&t, &cert.g, &x, 4, 12, 4)
                    .map_err(|e| format!("{name} at {x}: {e}"))?;
                if report.violation {
                    return Err(format!("{name}: probe found a violation at {x}"));
                }
            }
        }
        // a deliberately wrong certificate must be rejected with a witness
        let t = fixtures::b_counter();
        let wrong = BuchiAutomaton::universal(Alphabet::ab());
        let x = UPWord::parse("(a)").unwrap();
        let report = transducer::restricted_continuity_probe(&t, &wrong, &x, 4, 12, 4)
            .map_err(|e| e.to_string())?;
        if !report.violation {
            return Err("universal certificate for the b-counter was not rejected".into());
        }
        let witnessed = report.entries.iter().any(|e| e.witness.is_some());
        if !witnessed {
            return Err("rejection carries no witness pair".into());
        }
        Ok(())
    };
    gate(5, "dense continuity restriction with empirical probe", run());
}

fn char_at(x: &UPWord, i: usize) -> char {
    let p = x.prefix();
    if i < p.len() {
        p[i]
    } else {
        x.period()[(i - p.len()) % x.period().len()]
    }
}

#[test]
fn criterion_6_preimage_identity() {
    let run = || -> Result<(), String> {
        let ab = Alphabet::ab();
        let corpus = corpus33();
        let mut prefixes: Vec<Vec<char>> = vec![Vec::new()];
        for len in 1..=2 {
            for w in ab.words_of_length(len) {
                prefixes.push(w);
            }
        }
        for (name, t) in certified_transducers()? {
            for u in &prefixes {
                let pre = transducer::preimage_basic(&t, u).map_err(|e| format!("{name}: {e}"))?;
                for x in &corpus.words {
                    let direct = match transducer::evaluate(&t, x) {
                        Ok(y) => (0..u.len()).all(|i| char_at(&y, i) == u[i]),
                        Err(_) => false,
                    };
                    let via = membership::member_buchi(&pre, x)
                        .map_err(|e| format!("{name}: {e}"))?;
                    if direct != via {
                        return Err(format!(
                            "{name}: preimage of {:?} disagrees on {x} (direct {direct}, automaton {via})",
                            u.iter().collect::<String>()
                        ));
                    }
                }
            }
        }
        Ok(())
    };
    gate(6, "preimage automata versus direct evaluation", run());
}

#[test]
fn criterion_7_membership_cross_check() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ab = Alphabet::ab();
        let corpus = corpus33();
        let mut checked = 0usize;
        while checked < 10_000 {
            let a = if rng.gen_bool(0.5) {
                Automaton::Buchi(corpus::random_nba(&mut rng, &ab, 5))
            } else {
                Automaton::Muller(corpus::random_dma(&mut rng, &ab, 5))
            };
            for _ in 0..50 {
                let x = &corpus.words[rng.gen_range(0..corpus.words.len())];
                let naive = oracle::member(&a, x).map_err(|e| e.to_string())?;
                let fast = match &a {
                    Automaton::Buchi(b) => membership::member_buchi(b, x),
                    Automaton::Muller(m) => membership::member_muller(m, x),
                    Automaton::Finite(_) => unreachable!(),
                }
                .map_err(|e| e.to_string())?;
                if naive != fast {
                    return Err(format!("membership implementations disagree on {x}"));
                }
                checked += 1;
            }
        }
        Ok(())
    };
    gate(7, "naive versus optimized membership on 10000 samples", run());
}
