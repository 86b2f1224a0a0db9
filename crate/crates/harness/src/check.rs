//! Corpus-driven checks and their machine-readable reports.

use std::time::Instant;

use serde::Serialize;

use obaire::baire::{BaireDecomposition, LEVEL_CHECK_MAX};
use obaire::determinize;
use obaire::format::Automaton;
use obaire::membership;
use obaire::ops;
use obaire::topology;
use obaire::{BuchiAutomaton, Result, UPWord};

use crate::corpus::LassoCorpus;

/// Outcome of one check command; pass exactly when no counterexample.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub command: String,
    pub verdict: bool,
    pub counterexamples: Vec<String>,
    /// True when some obligation could not be checked (e.g. no meagerness
    /// certificate was available) and the verdict covers the rest only.
    pub partial: bool,
    pub millis: u128,
}

impl CheckReport {
    fn start(command: impl Into<String>) -> (CheckReport, Instant) {
        (
            CheckReport {
                command: command.into(),
                verdict: true,
                counterexamples: Vec::new(),
                partial: false,
                millis: 0,
            },
            Instant::now(),
        )
    }

    fn fail(&mut self, witness: impl Into<String>) {
        self.verdict = false;
        self.counterexamples.push(witness.into());
    }

    fn finish(mut self, started: Instant) -> CheckReport {
        self.millis = started.elapsed().as_millis();
        self
    }
}

fn member_auto(a: &Automaton, x: &UPWord) -> Result<bool> {
    match a {
        Automaton::Buchi(b) => membership::member_buchi(b, x),
        Automaton::Muller(m) => membership::member_muller(m, x),
        Automaton::Finite(_) => Err(obaire::Error::Precondition(
            "an omega-automaton for membership comparison".into(),
        )),
    }
}

/// Pointwise membership comparison over the corpus; first disagreement wins.
pub fn oracle_compare(a1: &Automaton, a2: &Automaton, corpus: &LassoCorpus) -> Result<CheckReport> {
    if a1.alphabet() != a2.alphabet() {
        return Err(obaire::Error::AlphabetMismatch);
    }
    let (mut report, started) = CheckReport::start("oracle-compare");
    for x in &corpus.words {
        if member_auto(a1, x)? != member_auto(a2, x)? {
            report.fail(x.to_string());
            break;
        }
    }
    Ok(report.finish(started))
}

/// Is the language of this automaton open? Decided exactly via the interior.
fn is_open(a: &BuchiAutomaton) -> Result<bool> {
    determinize::equivalent(a, &topology::interior(a)?)
}

/// Full verification of a decomposition produced by the library against its
/// source automaton: symbolic loop-level contract, level certificates,
/// openness of the open part, and corpus-level agreement of all three
/// languages with the source.
pub fn check_baire_triple(
    source: &Automaton,
    dec: &BaireDecomposition,
    corpus: &LassoCorpus,
) -> Result<CheckReport> {
    let (mut report, started) = CheckReport::start("check-baire");
    if let Err(e) = dec.verify() {
        report.fail(format!("decomposition contract: {e}"));
    }
    if let Err(e) = dec.meager_part.check_certificate(LEVEL_CHECK_MAX) {
        report.fail(format!("level certificate: {e}"));
    }
    let b = dec.open_part();
    if !is_open(&b)? {
        report.fail("open part is not an open set");
    }
    let c = dec.meager_part.automaton();
    for x in &corpus.words {
        let in_a = member_auto(source, x)?;
        if in_a != dec.contains_original(x)? {
            report.fail(format!("{x}: decomposition base disagrees with the source"));
            break;
        }
        let in_b = membership::member_buchi(&b, x)?;
        let in_c = membership::member_buchi(&c, x)?;
        if (in_a != in_b) && !in_c {
            report.fail(format!("{x}: in the symmetric difference but not the meager part"));
            break;
        }
    }
    Ok(report.finish(started))
}

/// The same contract checked on three loose automata: openness of B,
/// symbolic emptiness of (A Δ B) ∩ ¬C, and meagerness of C. Without a
/// construction certificate the per-level checks cannot run, so the verdict
/// is flagged partial.
pub fn check_baire_triple_files(
    a: &BuchiAutomaton,
    b: &BuchiAutomaton,
    c: &BuchiAutomaton,
    corpus: &LassoCorpus,
) -> Result<CheckReport> {
    let (mut report, started) = CheckReport::start("check-baire");
    report.partial = true;
    if !is_open(b)? {
        report.fail("B is not an open set");
    }
    let not_c = determinize::complement(c)?;
    let diff1 = ops::intersection(&ops::intersection(a, &determinize::complement(b)?)?, &not_c)?;
    let diff2 = ops::intersection(&ops::intersection(b, &determinize::complement(a)?)?, &not_c)?;
    for d in [diff1, diff2] {
        if let Some(x) = membership::accepting_lasso(&d) {
            report.fail(format!("{x}: in the symmetric difference but not in C"));
        }
    }
    if !obaire::baire::is_meager(c)? {
        report.fail("C is not meager");
    }
    // corpus spot-check of the same inclusion
    for x in &corpus.words {
        let in_a = membership::member_buchi(a, x)?;
        let in_b = membership::member_buchi(b, x)?;
        if (in_a != in_b) && !membership::member_buchi(c, x)? {
            report.fail(format!("{x}: corpus point outside C in the difference"));
            break;
        }
    }
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use obaire::baire::automatic_baire;
    use obaire::Alphabet;

    fn corpus() -> LassoCorpus {
        LassoCorpus::new(Alphabet::ab(), 3, 3)
    }

    fn inf_a() -> BuchiAutomaton {
        use obaire::automaton::AcceptanceMode;
        let mut a =
            BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
        a.add_transition(0, 'a', 0).unwrap();
        a.add_transition(0, 'b', 1).unwrap();
        a.add_transition(1, 'a', 0).unwrap();
        a.add_transition(1, 'b', 1).unwrap();
        a.set_final(0, true);
        a
    }

    #[test]
    fn self_compare_passes() {
        let a = Automaton::Buchi(inf_a());
        let r = oracle_compare(&a, &a, &corpus()).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn different_cylinders_fail_with_witness() {
        use obaire::automaton::AcceptanceMode;
        let cyl = |first: char| {
            let mut a =
                BuchiAutomaton::new(Alphabet::ab(), 2, 0, AcceptanceMode::Buchi).unwrap();
            a.add_transition(0, first, 1).unwrap();
            a.add_transition(1, 'a', 1).unwrap();
            a.add_transition(1, 'b', 1).unwrap();
            a.set_final(1, true);
            Automaton::Buchi(a)
        };
        let r = oracle_compare(&cyl('a'), &cyl('b'), &corpus()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.counterexamples.len(), 1);
    }

    #[test]
    fn constructed_decomposition_passes() {
        let a = inf_a();
        let dec = automatic_baire(&a).unwrap();
        let r = check_baire_triple(&Automaton::Buchi(a), &dec, &corpus()).unwrap();
        assert!(r.verdict, "{:?}", r.counterexamples);
    }

    #[test]
    fn corrupted_triple_fails() {
        let universal = BuchiAutomaton::universal(Alphabet::ab());
        let empty = BuchiAutomaton::empty(Alphabet::ab());
        let r = check_baire_triple_files(&universal, &empty, &empty, &corpus()).unwrap();
        assert!(!r.verdict);
        assert!(r.partial);

        let ok = check_baire_triple_files(&empty, &empty, &empty, &corpus()).unwrap();
        assert!(ok.verdict);
    }
}
