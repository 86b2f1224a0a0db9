//! Exhaustive lasso corpora and seeded random instance generators.

use std::collections::BTreeSet;

use rand::Rng;

use obaire::automaton::AcceptanceMode;
use obaire::transducer::{self, TwoTapeTransducer};
use obaire::word;
use obaire::{Alphabet, BuchiAutomaton, MullerAutomaton, Result, UPWord};

/// Every canonical ultimately periodic word within the given bounds.
#[derive(Debug, Clone)]
pub struct LassoCorpus {
    pub alphabet: Alphabet,
    pub max_prefix: usize,
    pub max_period: usize,
    pub words: Vec<UPWord>,
}

impl LassoCorpus {
    pub fn new(alphabet: Alphabet, max_prefix: usize, max_period: usize) -> LassoCorpus {
        let words = word::enumerate_lassos(&alphabet, max_prefix, max_period);
        LassoCorpus { alphabet, max_prefix, max_period, words }
    }
}

/// Random nondeterministic Buchi automaton; edge density is tuned so the
/// typical instance has about 1.5 successors per state and symbol.
pub fn random_nba(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize) -> BuchiAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut a = BuchiAutomaton::new(alphabet.clone(), n, 0, AcceptanceMode::Buchi).unwrap();
    for s in 0..n {
        for sym in 0..alphabet.len() {
            for t in 0..n {
                if rng.gen_bool((1.5 / n as f64).min(1.0)) {
                    a.add_transition_idx(s, sym, t).unwrap();
                }
            }
        }
        if rng.gen_bool(0.4) {
            a.set_final(s, true);
        }
    }
    a
}

/// Random complete deterministic Muller automaton with an arbitrary table.
pub fn random_dma(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize) -> MullerAutomaton {
    let n = rng.gen_range(1..=max_states);
    let delta: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..alphabet.len()).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let mut table: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        if rng.gen_bool(0.3) {
            table.push((0..n).filter(|&s| mask & (1 << s) != 0).collect());
        }
    }
    MullerAutomaton::new(alphabet.clone(), delta, 0, table).unwrap()
}

/// Random synchronous transducer that passes the functionality check and has
/// a non-empty domain; retries until one is found. Mostly input-deterministic
/// with occasional extra branches, so functional instances are common.
pub fn random_sync_functional(
    rng: &mut impl Rng,
    alphabet: &Alphabet,
    max_states: usize,
) -> Result<TwoTapeTransducer> {
    loop {
        let n = rng.gen_range(1..=max_states);
        let mut t = TwoTapeTransducer::new(alphabet.clone(), alphabet.clone(), n, 0, true)?;
        for s in 0..n {
            for sym in 0..alphabet.len() {
                let branches = if rng.gen_bool(0.2) { 2 } else { 1 };
                for _ in 0..branches {
                    let out = alphabet.symbol(rng.gen_range(0..alphabet.len()));
                    let dst = rng.gen_range(0..n);
                    t.add_transition(s, [alphabet.symbol(sym)], [out], dst)?;
                }
            }
            if rng.gen_bool(0.6) {
                t.set_final(s, true);
            }
        }
        if !transducer::functionality_check_sync(&t)? {
            continue;
        }
        if obaire::membership::is_empty_buchi(&transducer::dom(&t)?) {
            continue;
        }
        return Ok(t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_is_exhaustive_and_duplicate_free() {
        let c = LassoCorpus::new(Alphabet::ab(), 3, 3);
        for w in &c.words {
            assert!(w.prefix().len() <= 3 && w.period().len() <= 3);
            assert_eq!(w, &w.canonical());
        }
        let as_set: BTreeSet<String> = c.words.iter().map(|w| w.to_string()).collect();
        assert_eq!(as_set.len(), c.words.len());
        // every bounded lasso denotes the same word as some corpus element
        for prefix in Alphabet::ab().words_up_to(3) {
            for period in Alphabet::ab().words_up_to(3) {
                if period.is_empty() {
                    continue;
                }
                let w = UPWord::new(prefix.clone(), period).unwrap();
                assert!(c.words.iter().any(|v| v.same_word(&w)), "{w} missing");
            }
        }
    }

    #[test]
    fn generators_are_deterministic_under_seed() {
        let gen = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_nba(&mut rng, &Alphabet::ab(), 5);
            let m = random_dma(&mut rng, &Alphabet::ab(), 5);
            use obaire::format::{emit_oaut, Automaton};
            (emit_oaut(&Automaton::Buchi(a)), emit_oaut(&Automaton::Muller(m)))
        };
        assert_eq!(gen(7), gen(7));
        assert_ne!(gen(7), gen(8));
    }

    #[test]
    fn random_transducers_are_functional() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let t = random_sync_functional(&mut rng, &Alphabet::ab(), 4).unwrap();
            assert!(transducer::functionality_check_sync(&t).unwrap());
        }
    }
}
