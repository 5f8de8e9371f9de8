//! Group presentations: an ordered symmetric alphabet plus a list of relators.
//!
//! Text form, one statement per line (or separated by `;`), `#` starts a comment:
//!
//! ```text
//! gens a, b, c
//! inv  a~A, b~B, c~C
//! rel  abAB
//! rel  c=ab
//! ```
//!
//! Letters named only in `inv` are inserted directly after their partner, so the
//! example above orders the alphabet `a < A < b < B < c < C`. `x~x` declares an
//! involution. A relator `u=v` stands for the word `u v⁻¹`.
//!
//! JSON form: `{"generators": [..], "inverses": [[x, y], ..], "relators": [[x, ..], ..]}`.

use serde::{Deserialize, Serialize};

use super::alphabet::{OrderedAlphabet, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub alphabet: OrderedAlphabet,
    pub relators: Vec<Word>,
}

impl GroupSpec {
    pub fn new(alphabet: OrderedAlphabet, relators: Vec<Word>) -> Result<Self> {
        if relators.iter().any(Word::is_empty) {
            return Err(Error::InvalidPresentation("empty relator".into()));
        }
        Ok(GroupSpec { alphabet, relators })
    }

    /// Total length of the declared relators.
    pub fn mu(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            parse_json(text)
        } else {
            parse_text(text)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSpec {
    generators: Vec<String>,
    #[serde(default)]
    inverses: Vec<(String, String)>,
    #[serde(default)]
    relators: Vec<Vec<String>>,
}

fn parse_json(text: &str) -> Result<GroupSpec> {
    let raw: JsonSpec = serde_json::from_str(text)?;
    let pairs: Vec<Positioned<(String, String)>> = raw
        .inverses
        .into_iter()
        .map(|p| Positioned {
            value: p,
            line: 0,
            column: 0,
        })
        .collect();
    let gens: Vec<Positioned<String>> = raw
        .generators
        .into_iter()
        .map(|g| Positioned {
            value: g,
            line: 0,
            column: 0,
        })
        .collect();
    let alphabet = build_alphabet(&gens, &pairs)?;
    let mut relators = Vec::new();
    for rel in raw.relators {
        let mut word = Word::empty();
        for sym in rel {
            let l = alphabet.lookup(&sym).ok_or(Error::UndeclaredLetter {
                symbol: sym.clone(),
                line: 0,
            })?;
            word.push(l);
        }
        relators.push(word);
    }
    GroupSpec::new(alphabet, relators)
}

struct Positioned<T> {
    value: T,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits `text` into (line, column, item) triples, items separated by commas or whitespace.
fn items(line: usize, base_col: usize, text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch == ',' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((line, base_col + s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((line, base_col + s, &text[s..]));
    }
    out
}

fn parse_text(text: &str) -> Result<GroupSpec> {
    let mut gens = Vec::new();
    let mut pairs = Vec::new();
    let mut rels: Vec<(usize, usize, &str)> = Vec::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in content.split(';') {
            let stmt_col = offset + 1;
            offset += stmt.len() + 1;
            let trimmed = stmt.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let lead = stmt.len() - trimmed.len();
            let kw_end = trimmed
                .find(|c: char| c.is_whitespace())
                .unwrap_or(trimmed.len());
            let keyword = &trimmed[..kw_end];
            let body = &trimmed[kw_end..];
            let body_col = stmt_col + lead + kw_end;
            match keyword {
                "gens" => {
                    for (l, c, sym) in items(line, body_col, body) {
                        if sym.contains('~') || sym.contains('=') {
                            return Err(syntax(l, c, format!("invalid letter symbol `{sym}`")));
                        }
                        gens.push(Positioned {
                            value: sym.to_string(),
                            line: l,
                            column: c,
                        });
                    }
                }
                "inv" => {
                    for (l, c, item) in items(line, body_col, body) {
                        let mut parts = item.split('~');
                        match (parts.next(), parts.next(), parts.next()) {
                            (Some(x), Some(y), None) if !x.is_empty() && !y.is_empty() => {
                                pairs.push(Positioned {
                                    value: (x.to_string(), y.to_string()),
                                    line: l,
                                    column: c,
                                })
                            }
                            _ => {
                                return Err(syntax(
                                    l,
                                    c,
                                    format!("expected an inverse pair `x~y`, found `{item}`"),
                                ))
                            }
                        }
                    }
                }
                "rel" => rels.extend(items(line, body_col, body)),
                other => {
                    return Err(syntax(
                        line,
                        stmt_col + lead,
                        format!("unknown keyword `{other}` (expected gens, inv or rel)"),
                    ))
                }
            }
        }
    }
    if gens.is_empty() {
        return Err(syntax(1, 1, "missing `gens` statement"));
    }

    let alphabet = build_alphabet(&gens, &pairs)?;
    let mut relators = Vec::new();
    for (line, column, item) in rels {
        let word_at = |s: &str| {
            alphabet.parse_word(s).map_err(|e| match e {
                Error::UndeclaredLetter { symbol, .. } => Error::UndeclaredLetter { symbol, line },
                e => e,
            })
        };
        let word = match item.split_once('=') {
            Some((lhs, rhs)) => {
                if rhs.contains('=') {
                    return Err(syntax(line, column, "more than one `=` in relation"));
                }
                let lhs = word_at(lhs)?;
                let rhs = word_at(rhs)?;
                lhs.concat(&rhs.inverse(&alphabet))
            }
            None => word_at(item)?,
        };
        if word.is_empty() {
            return Err(syntax(line, column, "empty relator"));
        }
        relators.push(word);
    }
    GroupSpec::new(alphabet, relators)
}

fn build_alphabet(
    gens: &[Positioned<String>],
    pairs: &[Positioned<(String, String)>],
) -> Result<OrderedAlphabet> {
    let mut symbols: Vec<String> = Vec::new();
    for g in gens {
        if symbols.contains(&g.value) {
            return Err(syntax(
                g.line,
                g.column,
                format!("letter `{}` declared twice", g.value),
            ));
        }
        symbols.push(g.value.clone());
    }
    // Inverses not listed in `gens` go right after their partner.
    for p in pairs {
        let (x, y) = &p.value;
        let has_x = symbols.contains(x);
        let has_y = symbols.contains(y);
        match (has_x, has_y) {
            (true, true) => {}
            (true, false) => {
                let at = symbols.iter().position(|s| s == x).unwrap();
                symbols.insert(at + 1, y.clone());
            }
            (false, true) => {
                let at = symbols.iter().position(|s| s == y).unwrap();
                symbols.insert(at + 1, x.clone());
            }
            (false, false) => {
                return Err(Error::UndeclaredLetter {
                    symbol: x.clone(),
                    line: p.line,
                })
            }
        }
    }
    let mut inverse_of: Vec<Option<usize>> = vec![None; symbols.len()];
    for p in pairs {
        let (x, y) = &p.value;
        let i = symbols.iter().position(|s| s == x).unwrap();
        let j = symbols.iter().position(|s| s == y).unwrap();
        for (a, b) in [(i, j), (j, i)] {
            match inverse_of[a] {
                Some(prev) if prev != b => {
                    return Err(Error::NotInverseClosed(format!(
                        "letter `{}` is paired with both `{}` and `{}`",
                        symbols[a], symbols[prev], symbols[b]
                    )))
                }
                _ => inverse_of[a] = Some(b),
            }
        }
    }
    let inverse_of = inverse_of
        .into_iter()
        .enumerate()
        .map(|(i, inv)| {
            inv.ok_or_else(|| {
                Error::NotInverseClosed(format!("letter `{}` has no declared inverse", symbols[i]))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OrderedAlphabet::new(symbols, inverse_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commuting_pair_inline() {
        let spec = GroupSpec::parse("gens a,A,b,B; inv a~A, b~B; rel abAB").unwrap();
        assert_eq!(spec.alphabet.len(), 4);
        assert_eq!(spec.relators.len(), 1);
        assert_eq!(spec.mu(), 4);
    }

    #[test]
    fn triangle_with_default_order() {
        let spec = GroupSpec::parse("gens a,b,c\ninv a~A, b~B, c~C\nrel abAB\nrel Cab\n").unwrap();
        let order: Vec<&str> = spec.alphabet.letters().map(|l| spec.alphabet.symbol(l)).collect();
        assert_eq!(order, ["a", "A", "b", "B", "c", "C"]);
        assert_eq!(spec.relators.len(), 2);
        assert_eq!(spec.mu(), 7);
    }

    #[test]
    fn equation_relators_expand_to_words() {
        let spec = GroupSpec::parse("gens a,b\ninv a~A,b~B\nrel aa=b").unwrap();
        assert_eq!(spec.alphabet.render(&spec.relators[0]), "aaB");
    }

    #[test]
    fn undeclared_letter_in_relator() {
        let err = GroupSpec::parse("gens a,A\ninv a~A\nrel ad").unwrap_err();
        assert!(matches!(err, Error::UndeclaredLetter { ref symbol, line: 3 } if symbol == "d"));
    }

    #[test]
    fn missing_inverse_is_rejected() {
        let err = GroupSpec::parse("gens a,A,b\ninv a~A").unwrap_err();
        assert!(matches!(err, Error::NotInverseClosed(_)));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = GroupSpec::parse("gens a\ninv a~A\nfoo bar").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, column: 1, .. }));
        let err = GroupSpec::parse("gens a\ninv a-A").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 5, .. }));
    }

    #[test]
    fn self_inverse_letters() {
        let spec = GroupSpec::parse("gens x,a\ninv x~x, a~A").unwrap();
        let x = spec.alphabet.lookup("x").unwrap();
        assert!(spec.alphabet.is_self_inverse(x));
        assert_eq!(spec.alphabet.len(), 3);
    }

    #[test]
    fn json_form() {
        let spec = GroupSpec::parse(
            r#"{"generators": ["a","b","c"], "inverses": [["a","A"],["b","B"],["c","C"]],
                "relators": [["a","b","A","B"], ["C","a","b"]]}"#,
        )
        .unwrap();
        assert_eq!(spec.alphabet.len(), 6);
        assert_eq!(spec.mu(), 7);
        let bad = GroupSpec::parse(r#"{"generators": ["a"], "inverses": [["a","A"]], "relators": [["d"]]}"#);
        assert!(matches!(bad, Err(Error::UndeclaredLetter { .. })));
    }
}
