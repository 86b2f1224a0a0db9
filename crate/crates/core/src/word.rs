use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use std::fmt;

/// Ultimately periodic omega-word `prefix . period^omega`.
///
/// This is the finite witness type for every membership and oracle test in the
/// library: two `UPWord`s denote the same omega-word iff their canonical forms
/// are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPWord {
    prefix: Vec<char>,
    period: Vec<char>,
}

impl UPWord {
    pub fn new(prefix: impl IntoIterator<Item = char>, period: impl IntoIterator<Item = char>) -> Result<Self> {
        let prefix: Vec<char> = prefix.into_iter().collect();
        let period: Vec<char> = period.into_iter().collect();
        if period.is_empty() {
            return Err(Error::Malformed("period must be non-empty".into()));
        }
        Ok(UPWord { prefix, period })
    }

    /// Parses the literal syntax `u(v)`, e.g. `ab(ba)` for `ab.(ba)^omega`.
    pub fn parse(literal: &str) -> Result<Self> {
        let open = literal
            .find('(')
            .ok_or_else(|| Error::parse(1, 1, "expected '(' in word literal"))?;
        if !literal.ends_with(')') {
            return Err(Error::parse(1, literal.len(), "expected ')' at end of word literal"));
        }
        let prefix: Vec<char> = literal[..open].chars().collect();
        let period: Vec<char> = literal[open + 1..literal.len() - 1].chars().collect();
        if period.is_empty() {
            return Err(Error::parse(1, open + 1, "period must be non-empty"));
        }
        UPWord::new(prefix, period)
    }

    pub fn prefix(&self) -> &[char] {
        &self.prefix
    }

    pub fn period(&self) -> &[char] {
        &self.period
    }

    /// Symbol at 0-based position `i`.
    pub fn at(&self, i: usize) -> char {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        for &c in self.prefix.iter().chain(self.period.iter()) {
            if !alphabet.contains(c) {
                return Err(Error::SymbolOutsideAlphabet(c));
            }
        }
        Ok(())
    }

    /// Canonical form: primitive (minimal) period, then minimal prefix.
    pub fn canonical(&self) -> UPWord {
        let mut period = primitive_root(&self.period);
        let mut prefix = self.prefix.clone();
        // Absorb trailing prefix symbols into the period by rotating it.
        while let Some(&last) = prefix.last() {
            if last == *period.last().unwrap() {
                prefix.pop();
                let l = period.pop().unwrap();
                period.insert(0, l);
            } else {
                break;
            }
        }
        UPWord { prefix, period }
    }

    /// Equality as omega-words.
    pub fn same_word(&self, other: &UPWord) -> bool {
        self.canonical() == other.canonical()
    }

    /// Prepends a finite word.
    pub fn prepend(&self, word: &[char]) -> UPWord {
        let mut prefix = word.to_vec();
        prefix.extend_from_slice(&self.prefix);
        UPWord {
            prefix,
            period: self.period.clone(),
        }
    }
}

/// All distinct ultimately periodic words with prefix length up to
/// `max_prefix` and period length 1..=`max_period`, in canonical form,
/// length-lexicographic order, duplicates removed.
pub fn enumerate_lassos(alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Vec<UPWord> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for prefix in alphabet.words_up_to(max_prefix) {
        for period in alphabet.words_up_to(max_period) {
            if period.is_empty() {
                continue;
            }
            let c = UPWord::new(prefix.clone(), period).unwrap().canonical();
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out
}

/// Shortest word `w` such that the input is `w^k`.
fn primitive_root(period: &[char]) -> Vec<char> {
    let n = period.len();
    for d in 1..=n {
        if n % d == 0 && period.chunks(d).all(|c| c == &period[..d]) {
            return period[..d].to_vec();
        }
    }
    period.to_vec()
}

impl fmt::Display for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.prefix {
            write!(f, "{c}")?;
        }
        write!(f, "(")?;
        for c in &self.period {
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn up(lit: &str) -> UPWord {
        UPWord::parse(lit).unwrap()
    }

    #[test]
    fn canonical_identifies_rotations() {
        assert_eq!(up("a(ba)").canonical(), up("(ab)").canonical());
        assert_eq!(up("ab(ab)").canonical(), up("(ab)").canonical());
        assert!(up("a(ba)").same_word(&up("ab(ab)")));
        assert!(!up("(ab)").same_word(&up("(ba)")));
    }

    #[test]
    fn primitive_period() {
        assert_eq!(up("(abab)").canonical(), up("(ab)"));
        assert_eq!(up("(aaa)").canonical(), up("(a)"));
    }

    #[test]
    fn display_roundtrip() {
        let w = up("ab(ba)");
        assert_eq!(w.to_string(), "ab(ba)");
        assert_eq!(UPWord::parse(&w.to_string()).unwrap(), w);
    }

    proptest! {
        #[test]
        fn canonicalization_idempotent(p in proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..4),
                                       q in proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 1..4)) {
            let w = UPWord::new(p, q).unwrap();
            let c = w.canonical();
            prop_assert_eq!(c.canonical(), c.clone());
            // The canonical form denotes the same omega-word.
            for i in 0..12 {
                prop_assert_eq!(w.at(i), c.at(i));
            }
        }
    }
}
