use std::fmt;

use crate::error::{Error, Result};

/// A finite word, one symbol per element.
pub type Word = Vec<String>;

/// Splits text into a word: whitespace-separated symbols when the text
/// contains whitespace, one symbol per character otherwise. `""` and `ε`
/// denote the empty word.
pub fn parse_word(text: &str) -> Word {
    let text = text.trim();
    if text.is_empty() || text == "ε" {
        Vec::new()
    } else if text.contains(char::is_whitespace) {
        text.split_whitespace().map(str::to_owned).collect()
    } else {
        text.chars().map(String::from).collect()
    }
}

/// Renders a word compactly when every symbol is a single character.
pub fn format_word<W: AsRef<str>>(word: &[W]) -> String {
    if word.is_empty() {
        "ε".into()
    } else if word.iter().all(|s| s.as_ref().chars().count() == 1) {
        word.iter().map(AsRef::as_ref).collect()
    } else {
        word.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ")
    }
}

/// Ordered set of distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, T>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for s in symbols {
            let s = s.into();
            if out.contains(&s) {
                return Err(Error::DuplicateSymbol(s));
            }
            out.push(s);
        }
        Ok(Self { symbols: out })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_owned()))
    }

    pub fn encode<W: AsRef<str>>(&self, word: &[W]) -> Result<Vec<usize>> {
        word.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    /// Equal as sets, ignoring order.
    pub fn same_symbols(&self, other: &Self) -> bool {
        self.len() == other.len() && self.symbols.iter().all(|s| other.symbols.contains(s))
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for s in &self.symbols {
                    let mut v = w.clone();
                    v.push(s.clone());
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbols.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_in_shortlex_order() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let ws: Vec<String> = a.words_up_to(2).iter().map(|w| format_word(w)).collect();
        assert_eq!(ws, ["ε", "a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn duplicates_rejected() {
        assert_eq!(
            Alphabet::new(["a", "a"]),
            Err(Error::DuplicateSymbol("a".into()))
        );
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("aab"), ["a", "a", "b"]);
        assert_eq!(parse_word("foo bar"), ["foo", "bar"]);
        assert!(parse_word("").is_empty());
        assert!(parse_word("ε").is_empty());
    }
}
