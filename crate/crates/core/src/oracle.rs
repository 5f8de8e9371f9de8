//! Brute-force ground truth: breadth-first enumeration of balls in the Cayley graph.
//!
//! The frontier of each level is kept in shortlex order of its normal forms and expanded
//! letter by letter in alphabet order, so the first word to reach an element is its
//! shortlex normal form. Entries store a parent pointer and the last letter; normal forms
//! are read back along the parent chain.

use std::io::Write;

use indexmap::map::Entry;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianStructure, Element, Letter, Word};
use crate::error::{Error, Result};

/// Default cap on the number of stored elements.
pub const DEFAULT_MAX_ELEMENTS: usize = 10_000_000;

/// Environment variable overriding [`DEFAULT_MAX_ELEMENTS`].
pub const MAX_ELEMENTS_ENV: &str = "CAYLEY_GROWTH_MAX_ELEMENTS";

const ROOT: u32 = u32::MAX;

pub fn max_elements_from_env() -> usize {
    std::env::var(MAX_ELEMENTS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_ELEMENTS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallEntry {
    pub distance: u32,
    parent: u32,
    letter: u16,
}

impl BallEntry {
    pub fn parent(&self) -> Option<usize> {
        (self.parent != ROOT).then_some(self.parent as usize)
    }

    /// Last letter of the normal form; `None` for the identity.
    pub fn last_letter(&self) -> Option<Letter> {
        (self.parent != ROOT).then_some(Letter(self.letter))
    }
}

/// Counts of elements by exact distance from the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereSeries {
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct BallTable {
    structure: AbelianStructure,
    radius: usize,
    entries: IndexMap<Element, BallEntry>,
    /// `level_start[j]` is the index of the first entry at distance `j`; one extra sentinel.
    level_start: Vec<usize>,
    max_elements: usize,
}

pub fn enumerate_ball(structure: &AbelianStructure, n: usize) -> Result<BallTable> {
    BallTable::new(structure, n, max_elements_from_env())
}

impl BallTable {
    pub fn new(structure: &AbelianStructure, radius: usize, max_elements: usize) -> Result<Self> {
        let mut entries = IndexMap::new();
        entries.insert(
            structure.identity(),
            BallEntry {
                distance: 0,
                parent: ROOT,
                letter: 0,
            },
        );
        let mut table = BallTable {
            structure: structure.clone(),
            radius: 0,
            entries,
            level_start: vec![0, 1],
            max_elements,
        };
        table.extend_to(radius)?;
        Ok(table)
    }

    /// Grows the table to `radius`. On failure the table is left at its previous radius.
    pub fn extend_to(&mut self, radius: usize) -> Result<()> {
        let (saved_radius, saved_len) = (self.radius, self.entries.len());
        let saved_levels = self.level_start.len();
        while self.radius < radius {
            if let Err(e) = self.grow_one_level() {
                self.entries.truncate(saved_len);
                self.level_start.truncate(saved_levels);
                self.radius = saved_radius;
                return Err(e);
            }
        }
        Ok(())
    }

    fn grow_one_level(&mut self) -> Result<()> {
        let from = self.level_start[self.radius];
        let to = self.level_start[self.radius + 1];
        let next = self.radius as u32 + 1;
        let letters: Vec<Letter> = self.structure.alphabet().letters().collect();
        for idx in from..to {
            let base = self.entries.get_index(idx).unwrap().0.clone();
            for &l in &letters {
                let e = self.structure.mul_letter(&base, l);
                if let Entry::Vacant(v) = self.entries.entry(e) {
                    v.insert(BallEntry {
                        distance: next,
                        parent: idx as u32,
                        letter: l.0,
                    });
                }
            }
            if self.entries.len() > self.max_elements {
                return Err(Error::CapExceeded(format!(
                    "ball of radius {} exceeds {} elements (set {} to raise the cap)",
                    next, self.max_elements, MAX_ELEMENTS_ENV
                )));
            }
        }
        self.radius += 1;
        self.level_start.push(self.entries.len());
        Ok(())
    }

    pub fn structure(&self) -> &AbelianStructure {
        &self.structure
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_elements(&self) -> usize {
        self.max_elements
    }

    /// Entries in breadth-first order: by distance, then shortlex order of normal forms.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, &BallEntry)> {
        self.entries.iter()
    }

    pub fn get_index(&self, idx: usize) -> (&Element, &BallEntry) {
        self.entries.get_index(idx).expect("ball index in range")
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.entries.get_index_of(e)
    }

    /// Entry indices of elements at exactly distance `j`.
    pub fn level(&self, j: usize) -> std::ops::Range<usize> {
        if j > self.radius {
            return 0..0;
        }
        self.level_start[j]..self.level_start[j + 1]
    }

    pub fn geodesic_length(&self, e: &Element) -> Option<usize> {
        self.entries.get(e).map(|en| en.distance as usize)
    }

    /// Exact word length of `e`, searching beyond the ball when `e` is not stored.
    pub fn geodesic_length_or_search(&self, e: &Element, max_len: usize) -> Result<usize> {
        match self.geodesic_length(e) {
            Some(d) => Ok(d),
            None => geodesic_length_search(&self.structure, e, self.radius + 1, max_len),
        }
    }

    pub fn nf_at(&self, mut idx: usize) -> Word {
        let mut rev = Vec::new();
        loop {
            let (_, en) = self.get_index(idx);
            match en.parent() {
                Some(p) => {
                    rev.push(Letter(en.letter));
                    idx = p;
                }
                None => break,
            }
        }
        rev.reverse();
        Word::from(rev)
    }

    pub fn shortlex_nf(&self, e: &Element) -> Result<Word> {
        self.index_of(e)
            .map(|i| self.nf_at(i))
            .ok_or(Error::OutsideBall {
                radius: self.radius,
            })
    }

    pub fn is_shortlex(&self, w: &Word) -> Result<bool> {
        let e = self.structure.evaluate(w);
        match self.index_of(&e) {
            Some(i) => Ok(self.nf_at(i) == *w),
            // Any word of length <= radius lands inside the ball.
            None => Err(Error::OutsideBall {
                radius: self.radius,
            }),
        }
    }

    pub fn sphere_counts(&self) -> SphereSeries {
        SphereSeries {
            counts: (0..=self.radius)
                .map(|j| self.level(j).len() as u64)
                .collect(),
        }
    }

    /// CSV dump: canonical coordinates, distance, normal form.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let rank = self.structure.rank();
        let torsion = self.structure.invariant_factors().len();
        let mut header: Vec<String> = (0..rank).map(|i| format!("free{i}")).collect();
        header.extend((0..torsion).map(|i| format!("torsion{i}")));
        header.push("distance".into());
        header.push("normal_form".into());
        writeln!(out, "{}", header.join(","))?;
        let alphabet = self.structure.alphabet();
        for idx in 0..self.len() {
            let (e, en) = self.get_index(idx);
            let coords: Vec<String> = e.coordinates().map(|x| x.to_string()).collect();
            writeln!(
                out,
                "{},{},{}",
                coords.join(","),
                en.distance,
                alphabet.render(&self.nf_at(idx))
            )?;
        }
        Ok(())
    }
}

/// Word length of `target` by direct search over net exponent vectors, one coordinate per
/// inverse pair, in order of increasing total exponent. Involutions take exponent 0 or 1.
/// Lengths below `min_len` are skipped; fails once `max_len` is passed.
pub fn geodesic_length_search(
    structure: &AbelianStructure,
    target: &Element,
    min_len: usize,
    max_len: usize,
) -> Result<usize> {
    let involution: Vec<bool> = structure
        .columns()
        .iter()
        .map(|c| c.negative.is_none())
        .collect();
    for len in min_len..=max_len {
        if search_shell(structure, target, &involution, 0, len, &structure.identity()) {
            return Ok(len);
        }
    }
    Err(Error::CapExceeded(format!(
        "no word of length <= {max_len} represents the element"
    )))
}

fn search_shell(
    structure: &AbelianStructure,
    target: &Element,
    involution: &[bool],
    col: usize,
    remaining: usize,
    acc: &Element,
) -> bool {
    let cols = structure.columns();
    if col == cols.len() {
        return remaining == 0 && acc == target;
    }
    let step = structure.letter_image(cols[col].positive);
    let max = if involution[col] {
        remaining.min(1)
    } else {
        remaining
    };
    for k in 0..=max {
        let signs: &[i64] = if k == 0 || involution[col] { &[1] } else { &[1, -1] };
        for &s in signs {
            let next = structure.add(acc, &structure.scale(step, s * k as i64));
            if search_shell(structure, target, involution, col + 1, remaining - k, &next) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupSpec;

    fn group(text: &str) -> (GroupSpec, AbelianStructure) {
        let spec = GroupSpec::parse(text).unwrap();
        let st = AbelianStructure::derive(&spec).unwrap();
        (spec, st)
    }

    const Z: &str = "gens a\ninv a~A";
    const Z2: &str = "gens a,b\ninv a~A,b~B\nrel abAB";
    const Z3: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel abAB\nrel acAC\nrel bcBC";
    const TRIANGLE: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel abAB\nrel Cab";
    const LINE_PLANE: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel aaB\nrel acAC";
    const C5: &str = "gens a\ninv a~A\nrel aaaaa";

    #[test]
    fn line_graph() {
        let (_, st) = group(Z);
        let t = BallTable::new(&st, 3, 1000).unwrap();
        assert_eq!(t.len(), 7);
        let t = BallTable::new(&st, 4, 1000).unwrap();
        assert_eq!(t.sphere_counts().counts, [1, 2, 2, 2, 2]);
    }

    #[test]
    fn sphere_counts_known_groups() {
        let (_, st) = group(TRIANGLE);
        let t = BallTable::new(&st, 3, 10_000).unwrap();
        assert_eq!(t.sphere_counts().counts, [1, 6, 12, 18]);
        let (_, st) = group(Z3);
        let t = BallTable::new(&st, 3, 10_000).unwrap();
        assert_eq!(t.sphere_counts().counts, [1, 6, 18, 38]);
        let (_, st) = group(C5);
        let t = BallTable::new(&st, 4, 10_000).unwrap();
        assert_eq!(t.sphere_counts().counts, [1, 2, 2, 0, 0]);
    }

    #[test]
    fn geodesics_and_normal_forms() {
        let (spec, st) = group(TRIANGLE);
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        let t = BallTable::new(&st, 3, 10_000).unwrap();
        assert_eq!(t.geodesic_length(&st.identity()), Some(0));
        assert_eq!(t.geodesic_length(&st.evaluate(&w("ab"))), Some(1));
        assert_eq!(t.shortlex_nf(&st.evaluate(&w("ab"))).unwrap(), w("c"));

        let (spec, st) = group(Z3);
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        let t = BallTable::new(&st, 3, 10_000).unwrap();
        assert_eq!(t.geodesic_length(&st.evaluate(&w("ab"))), Some(2));

        let (spec, st) = group(Z2);
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        let t = BallTable::new(&st, 3, 10_000).unwrap();
        assert_eq!(t.shortlex_nf(&st.evaluate(&w("ba"))).unwrap(), w("ab"));
        assert!(t.is_shortlex(&Word::empty()).unwrap());
        assert!(!t.is_shortlex(&w("ba")).unwrap());
        assert!(t.shortlex_nf(&st.evaluate(&w("aaaa"))).is_err());

        let (spec, st) = group(LINE_PLANE);
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        let t = BallTable::new(&st, 3, 10_000).unwrap();
        assert_eq!(t.shortlex_nf(&st.evaluate(&w("aa"))).unwrap(), w("b"));
        assert!(!t.is_shortlex(&w("aa")).unwrap());
    }

    #[test]
    fn cap_is_an_error_not_a_truncation() {
        let (_, st) = group(Z2);
        let err = BallTable::new(&st, 10, 50).unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
        let mut t = BallTable::new(&st, 3, 50).unwrap();
        assert!(t.extend_to(10).is_err());
        assert_eq!(t.radius(), 3);
        assert_eq!(t.len(), 25);
        assert_eq!(t.level(3).len(), 12);
    }

    /// Every word of length <= radius, in shortlex order; first hit per element must be the nf.
    fn all_words(n_letters: u16, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..n_letters {
                    let mut v = w.clone();
                    v.push(Letter(l));
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn normal_forms_are_minimal_by_exhaustive_search() {
        for text in [Z2, TRIANGLE, LINE_PLANE, C5] {
            let (spec, st) = group(text);
            let radius = if spec.alphabet.len() > 4 { 4 } else { 5 };
            let t = BallTable::new(&st, radius, 1_000_000).unwrap();
            let mut first: std::collections::HashMap<Element, Word> = Default::default();
            for w in all_words(spec.alphabet.len() as u16, radius) {
                first.entry(st.evaluate(&w)).or_insert(w);
            }
            assert_eq!(first.len(), t.len());
            for (e, w) in &first {
                assert_eq!(&t.shortlex_nf(e).unwrap(), w, "in {text}");
            }
        }
    }

    #[test]
    fn triangle_nesting_and_prefix_closure() {
        for text in [Z, Z2, TRIANGLE, LINE_PLANE, C5] {
            let (spec, st) = group(text);
            let small = BallTable::new(&st, 5, 1_000_000).unwrap();
            let big = BallTable::new(&st, 6, 1_000_000).unwrap();
            for (e, en) in small.iter() {
                assert_eq!(big.geodesic_length(e), Some(en.distance as usize));
                for l in spec.alphabet.letters() {
                    if let Some(d) = small.geodesic_length(&st.mul_letter(e, l)) {
                        assert!(d.abs_diff(en.distance as usize) <= 1);
                    }
                }
            }
            let inner = big.iter().filter(|(_, en)| en.distance <= 5).count();
            assert_eq!(inner, small.len());
            for idx in 0..big.len() {
                let nf = big.nf_at(idx);
                for k in 0..nf.len() {
                    let prefix = Word::from(nf.letters()[..k].to_vec());
                    assert!(big.is_shortlex(&prefix).unwrap());
                }
            }
        }
    }

    #[test]
    fn exponent_search_matches_bfs() {
        for text in [Z2, TRIANGLE, LINE_PLANE, C5, "gens x,a\ninv x~x,a~A"] {
            let (_, st) = group(text);
            let t = BallTable::new(&st, 6, 1_000_000).unwrap();
            for (e, en) in t.iter() {
                assert_eq!(
                    geodesic_length_search(&st, e, 0, 6).unwrap(),
                    en.distance as usize
                );
            }
            let small = BallTable::new(&st, 2, 1_000_000).unwrap();
            for (e, en) in t.iter() {
                assert_eq!(
                    small.geodesic_length_or_search(e, 6).unwrap(),
                    en.distance as usize
                );
            }
        }
    }

    #[test]
    fn csv_dump() {
        let (_, st) = group(Z);
        let t = BallTable::new(&st, 1, 100).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "free0,distance,normal_form\n0,0,\n1,1,a\n-1,1,A\n");
    }
}
