use crate::error::{Error, Result};

/// Ordered finite set of single-character symbols.
///
/// The symbol order is fixed at construction and is total; it is used for the
/// length-lexicographic enumeration of finite words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::Malformed("alphabet must be non-empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Malformed(format!("duplicate symbol '{s}'")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The two-symbol alphabet {a, b} used throughout the test corpus.
    pub fn ab() -> Self {
        Alphabet {
            symbols: vec!['a', 'b'],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    pub fn index_of(&self, symbol: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&s| s == symbol)
            .ok_or(Error::SymbolOutsideAlphabet(symbol))
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.symbols.contains(&symbol)
    }

    /// Indices of a word's symbols, rejecting symbols outside the alphabet.
    pub fn encode(&self, word: &[char]) -> Result<Vec<usize>> {
        word.iter().map(|&c| self.index_of(c)).collect()
    }

    /// All words of the given length, in lexicographic symbol order.
    pub fn words_of_length(&self, len: usize) -> Vec<Vec<char>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &out {
                for &s in &self.symbols {
                    let mut w2 = w.clone();
                    w2.push(s);
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }

    /// Length-lexicographic enumeration of all finite words up to `max_len`,
    /// starting with the empty word.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<char>> {
        (0..=max_len)
            .flat_map(|l| self.words_of_length(l))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(Alphabet::new([]).is_err());
        assert!(Alphabet::new(['a', 'a']).is_err());
    }

    #[test]
    fn length_lex_enumeration() {
        let sigma = Alphabet::ab();
        let words = sigma.words_up_to(2);
        let rendered: Vec<String> = words.iter().map(|w| w.iter().collect()).collect();
        assert_eq!(rendered, vec!["", "a", "b", "aa", "ab", "ba", "bb"]);
    }
}
