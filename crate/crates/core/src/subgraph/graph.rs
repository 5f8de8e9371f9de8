use std::collections::VecDeque;

use serde::Deserialize;

use crate::abelian::{AbelianStructure, Element, Letter, Word};
use crate::error::{Error, Result};
use crate::oracle::BallTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgraphEdge {
    pub from: usize,
    pub letter: Letter,
    pub to: usize,
}

/// A finite connected labelled subgraph of the Cayley graph with a base point.
#[derive(Clone, Debug)]
pub struct Subgraph {
    vertices: Vec<Element>,
    names: Vec<String>,
    edges: Vec<SubgraphEdge>,
    base: usize,
    description: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SubgraphJson {
    Path {
        path: Vec<String>,
    },
    Explicit {
        #[serde(default)]
        base: Option<String>,
        vertices: Vec<String>,
        #[serde(default)]
        edges: Vec<(String, String, String)>,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSubgraph(msg.into())
}

/// The identity may be written as an empty word, `e` or `1` unless those are letters.
fn parse_vertex_word(structure: &AbelianStructure, text: &str) -> Result<Word> {
    let t = text.trim();
    let alphabet = structure.alphabet();
    if t.is_empty() || ((t == "e" || t == "1") && alphabet.lookup(t).is_none()) {
        return Ok(Word::empty());
    }
    alphabet.parse_word(t)
}

fn parse_letter(structure: &AbelianStructure, text: &str) -> Result<Letter> {
    structure
        .alphabet()
        .lookup(text.trim())
        .ok_or_else(|| invalid(format!("`{}` is not a generator", text.trim())))
}

impl Subgraph {
    /// The single vertex `e`.
    pub fn vertex(structure: &AbelianStructure) -> Self {
        Subgraph {
            vertices: vec![structure.identity()],
            names: vec!["e".into()],
            edges: Vec::new(),
            base: 0,
            description: "vertex".into(),
        }
    }

    /// Vertices `e, x1, x1x2, ...` joined by edges labelled `x1, x2, ...`, based at `e`.
    pub fn path(structure: &AbelianStructure, letters: &[Letter]) -> Result<Self> {
        let alphabet = structure.alphabet();
        let mut vertices = vec![structure.identity()];
        let mut names = vec!["e".to_string()];
        let mut edges = Vec::new();
        let mut word = Word::empty();
        for (i, &x) in letters.iter().enumerate() {
            let next = structure.mul_letter(&vertices[i], x);
            word.push(x);
            vertices.push(next);
            names.push(alphabet.render(&word));
            edges.push(SubgraphEdge {
                from: i,
                letter: x,
                to: i + 1,
            });
        }
        let description = if letters.is_empty() {
            "vertex".into()
        } else {
            let syms: Vec<&str> = letters.iter().map(|&l| alphabet.symbol(l)).collect();
            format!("path({})", syms.join(","))
        };
        Self::validated(structure, vertices, names, edges, 0, description)
    }

    pub fn path_from_symbols(structure: &AbelianStructure, symbols: &[String]) -> Result<Self> {
        let letters = symbols
            .iter()
            .map(|s| parse_letter(structure, s))
            .collect::<Result<Vec<_>>>()?;
        Self::path(structure, &letters)
    }

    /// Explicit form: vertices and edge endpoints are words, edge labels single letters.
    pub fn from_words(
        structure: &AbelianStructure,
        vertex_words: &[String],
        edges: &[(String, String, String)],
        base: Option<&str>,
    ) -> Result<Self> {
        let alphabet = structure.alphabet();
        let mut vertices = Vec::with_capacity(vertex_words.len());
        let mut names = Vec::with_capacity(vertex_words.len());
        for w in vertex_words {
            let word = parse_vertex_word(structure, w)?;
            vertices.push(structure.evaluate(&word));
            names.push(if word.is_empty() {
                "e".into()
            } else {
                alphabet.render(&word)
            });
        }
        let find = |text: &str| -> Result<usize> {
            let e = structure.evaluate(&parse_vertex_word(structure, text)?);
            vertices
                .iter()
                .position(|v| *v == e)
                .ok_or_else(|| invalid(format!("`{text}` is not a listed vertex")))
        };
        let mut parsed = Vec::with_capacity(edges.len());
        for (u, x, v) in edges {
            parsed.push(SubgraphEdge {
                from: find(u)?,
                letter: parse_letter(structure, x)?,
                to: find(v)?,
            });
        }
        let base = match base {
            Some(b) => find(b)?,
            None => 0,
        };
        let description = format!("{} vertices, {} edges", vertices.len(), parsed.len());
        Self::validated(structure, vertices, names, parsed, base, description)
    }

    /// Accepts `vertex`, `path: a,b,c`, or JSON (`{"path": [...]}` or the explicit form).
    pub fn parse(text: &str, structure: &AbelianStructure) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return match serde_json::from_str::<SubgraphJson>(t)? {
                SubgraphJson::Path { path } => Self::path_from_symbols(structure, &path),
                SubgraphJson::Explicit {
                    base,
                    vertices,
                    edges,
                } => Self::from_words(structure, &vertices, &edges, base.as_deref()),
            };
        }
        if t == "vertex" {
            return Ok(Self::vertex(structure));
        }
        if let Some(rest) = t.strip_prefix("path") {
            let rest = rest.trim_start().strip_prefix(':').unwrap_or(rest);
            let symbols: Vec<String> = rest
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            return Self::path_from_symbols(structure, &symbols);
        }
        Err(invalid(
            "expected `vertex`, `path: x1,x2,...` or a JSON object",
        ))
    }

    fn validated(
        structure: &AbelianStructure,
        vertices: Vec<Element>,
        names: Vec<String>,
        mut edges: Vec<SubgraphEdge>,
        base: usize,
        description: String,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("no vertices"));
        }
        for i in 0..vertices.len() {
            for j in 0..i {
                if vertices[i] == vertices[j] {
                    return Err(invalid(format!(
                        "vertices `{}` and `{}` are the same element",
                        names[j], names[i]
                    )));
                }
            }
        }
        let alphabet = structure.alphabet();
        for e in &edges {
            if structure.mul_letter(&vertices[e.from], e.letter) != vertices[e.to] {
                return Err(invalid(format!(
                    "edge {} -{}-> {} does not exist in the Cayley graph",
                    names[e.from],
                    alphabet.symbol(e.letter),
                    names[e.to]
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let s = Subgraph {
            vertices,
            names,
            edges,
            base,
            description,
        };
        if s.bfs_order().len() != s.vertices.len() {
            return Err(invalid("not connected"));
        }
        Ok(s)
    }

    /// Vertices in breadth-first order from the base point, ignoring edge direction.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut order = vec![self.base];
        seen[self.base] = true;
        let mut queue = VecDeque::from([self.base]);
        while let Some(u) = queue.pop_front() {
            for e in &self.edges {
                let other = if e.from == u {
                    e.to
                } else if e.to == u {
                    e.from
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    order.push(other);
                    queue.push_back(other);
                }
            }
        }
        order
    }

    pub fn vertices(&self) -> &[Element] {
        &self.vertices
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[SubgraphEdge] {
        &self.edges
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// `v − p` for every vertex `v`, base point first.
    pub fn offsets(&self, structure: &AbelianStructure) -> Vec<Element> {
        let p = &self.vertices[self.base];
        let mut out = vec![structure.identity()];
        for (i, v) in self.vertices.iter().enumerate() {
            if i != self.base {
                out.push(structure.sub(v, p));
            }
        }
        out
    }

    /// Largest word length of `v − u` over vertex pairs.
    pub fn diameter(&self, oracle: &BallTable) -> Result<usize> {
        let structure = oracle.structure();
        // Any two vertices are joined inside S by at most |E| edges.
        let cap = self.edges.len();
        let mut d = 0;
        for i in 0..self.vertices.len() {
            for j in 0..i {
                let diff = structure.sub(&self.vertices[i], &self.vertices[j]);
                d = d.max(oracle.geodesic_length_or_search(&diff, cap)?);
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupSpec;
    use crate::oracle::BallTable;

    fn group(text: &str) -> AbelianStructure {
        AbelianStructure::derive(&GroupSpec::parse(text).unwrap()).unwrap()
    }

    const Z3: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel abAB, acAC, bcBC";
    const TRIANGLE: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel ab=ba, c=ab";

    #[test]
    fn shorthand_forms() {
        let st = group(Z3);
        let s = Subgraph::parse("path: a", &st).unwrap();
        assert_eq!((s.vertices().len(), s.edges().len()), (2, 1));
        let v = Subgraph::parse("vertex", &st).unwrap();
        assert_eq!((v.vertices().len(), v.edges().len()), (1, 0));
        let s = Subgraph::parse("{\"path\": [\"a\", \"b\"]}", &st).unwrap();
        assert_eq!(s.description(), "path(a,b)");
    }

    #[test]
    fn path_abc_in_triangle_group_has_distinct_vertices() {
        let st = group(TRIANGLE);
        let s = Subgraph::parse("path: a,b,c", &st).unwrap();
        assert_eq!(s.vertices().len(), 4);
        let c = st.evaluate(&st.alphabet().parse_word("c").unwrap());
        assert_eq!(s.vertices()[3], st.scale(&c, 2));
    }

    #[test]
    fn explicit_json() {
        let st = group(Z3);
        let text = r#"{"base": "a", "vertices": ["", "a", "ab"], "edges": [["e","a","a"], ["a","b","ab"]]}"#;
        let s = Subgraph::parse(text, &st).unwrap();
        assert_eq!(s.base(), 1);
        assert_eq!(s.offsets(&st).len(), 3);
        // edge endpoints may use any word for the same element
        let text = r#"{"vertices": ["", "a", "ba"], "edges": [["","a","a"], ["a","b","ab"]]}"#;
        assert!(Subgraph::parse(text, &st).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        let st = group(Z3);
        let disconnected = r#"{"vertices": ["", "ab"], "edges": []}"#;
        assert!(matches!(Subgraph::parse(disconnected, &st), Err(Error::InvalidSubgraph(_))));
        let wrong_label = r#"{"vertices": ["", "a"], "edges": [["","b","a"]]}"#;
        assert!(matches!(Subgraph::parse(wrong_label, &st), Err(Error::InvalidSubgraph(_))));
        let duplicate = r#"{"vertices": ["", "aA"], "edges": []}"#;
        assert!(matches!(Subgraph::parse(duplicate, &st), Err(Error::InvalidSubgraph(_))));
        let empty = r#"{"vertices": [], "edges": []}"#;
        assert!(matches!(Subgraph::parse(empty, &st), Err(Error::InvalidSubgraph(_))));
        assert!(Subgraph::parse("path: a,A", &st).is_err());
        assert!(Subgraph::parse("path: q", &st).is_err());
        assert!(Subgraph::parse("star", &st).is_err());
    }

    #[test]
    fn diameters() {
        let st = group(Z3);
        let ball = BallTable::new(&st, 4, 1 << 20).unwrap();
        assert_eq!(Subgraph::vertex(&st).diameter(&ball).unwrap(), 0);
        assert_eq!(Subgraph::parse("path: a,b", &st).unwrap().diameter(&ball).unwrap(), 2);
        assert_eq!(Subgraph::parse("path: a,b,c", &st).unwrap().diameter(&ball).unwrap(), 3);
        let st = group(TRIANGLE);
        let ball = BallTable::new(&st, 4, 1 << 20).unwrap();
        assert_eq!(Subgraph::parse("path: a,b,c", &st).unwrap().diameter(&ball).unwrap(), 2);
    }
}
