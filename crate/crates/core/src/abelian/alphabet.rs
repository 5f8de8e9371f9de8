use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of the generating set, identified by its position in the total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterInfo {
    pub symbol: String,
    pub inverse: Letter,
}

/// Symmetric generating set with a total order; the order is the position in `letters`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedAlphabet {
    letters: Vec<LetterInfo>,
}

impl OrderedAlphabet {
    /// Builds an alphabet from symbols in order and inverse pairs given by position.
    pub fn new(symbols: Vec<String>, inverse_of: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidPresentation("alphabet is empty".into()));
        }
        if symbols.len() != inverse_of.len() {
            return Err(Error::InvalidPresentation(
                "inverse table length does not match the alphabet".into(),
            ));
        }
        if symbols.len() > u16::MAX as usize {
            return Err(Error::InvalidPresentation("alphabet too large".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidPresentation("empty letter symbol".into()));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidPresentation(format!(
                    "letter `{s}` declared twice"
                )));
            }
        }
        for (i, &j) in inverse_of.iter().enumerate() {
            if j >= symbols.len() || inverse_of[j] != i {
                return Err(Error::NotInverseClosed(format!(
                    "inverse of `{}` is not an involution",
                    symbols[i]
                )));
            }
        }
        let letters = symbols
            .into_iter()
            .zip(inverse_of)
            .map(|(symbol, inv)| LetterInfo {
                symbol,
                inverse: Letter(inv as u16),
            })
            .collect();
        Ok(OrderedAlphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(|i| Letter(i as u16))
    }

    pub fn info(&self, letter: Letter) -> &LetterInfo {
        &self.letters[letter.index()]
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.letters[letter.index()].symbol
    }

    pub fn inverse(&self, letter: Letter) -> Letter {
        self.letters[letter.index()].inverse
    }

    pub fn is_self_inverse(&self, letter: Letter) -> bool {
        self.inverse(letter) == letter
    }

    pub fn lookup(&self, symbol: &str) -> Option<Letter> {
        self.letters
            .iter()
            .position(|l| l.symbol == symbol)
            .map(|i| Letter(i as u16))
    }

    /// Splits a whitespace-free string into letters, matching the longest declared symbol first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut rest = text;
        let mut letters = Vec::new();
        while !rest.is_empty() {
            let best = self
                .letters
                .iter()
                .enumerate()
                .filter(|(_, l)| rest.starts_with(l.symbol.as_str()))
                .max_by_key(|(_, l)| l.symbol.len());
            match best {
                Some((i, l)) => {
                    letters.push(Letter(i as u16));
                    rest = &rest[l.symbol.len()..];
                }
                None => {
                    let symbol = rest.chars().next().map(String::from).unwrap_or_default();
                    return Err(Error::UndeclaredLetter { symbol, line: 0 });
                }
            }
        }
        Ok(Word::from(letters))
    }

    pub fn render(&self, word: &Word) -> String {
        word.letters().iter().map(|&l| self.symbol(l)).collect()
    }
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self, alphabet: &OrderedAlphabet) -> Word {
        Word(self.0.iter().rev().map(|&l| alphabet.inverse(l)).collect())
    }

    /// Shortlex comparison: shorter first, then lexicographic by letter order.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
