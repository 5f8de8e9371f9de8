//! Sorted-word normal forms, minimal relations and the shortlex decision rule.
//!
//! In an abelian group every shortlex word is sorted, so a shortlex word is determined by
//! its exponent vector `(r_1, ..., r_n)` over the ordered alphabet. The set of shortlex
//! exponent vectors is closed under taking smaller vectors, hence a vector is shortlex iff
//! it contains none of the finitely many minimal non-shortlex vectors. Those are the
//! greater sides of the minimal relations found here.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianStructure, Element, Letter, OrderedAlphabet, Word};
use crate::error::{Error, Result};

/// Largest exponent box scanned by [`minimal_relations`].
pub const MAX_RELATION_BOX: u64 = 200_000_000;

/// Exponent vector of the sorted word `a_1^{r_1} ... a_n^{r_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalForm {
    exponents: Vec<u32>,
}

impl NormalForm {
    pub fn zero(n: usize) -> Self {
        NormalForm {
            exponents: vec![0; n],
        }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        NormalForm { exponents }
    }

    /// Exponent counts of a word; the word itself need not be sorted.
    pub fn from_word(n: usize, w: &Word) -> Self {
        let mut exponents = vec![0; n];
        for &l in w.letters() {
            exponents[l.index()] += 1;
        }
        NormalForm { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, l: Letter) -> u32 {
        self.exponents[l.index()]
    }

    pub fn len(&self) -> usize {
        self.exponents.iter().map(|&x| x as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest letter with a positive exponent.
    pub fn last_letter(&self) -> Option<Letter> {
        self.exponents
            .iter()
            .rposition(|&x| x > 0)
            .map(|i| Letter(i as u16))
    }

    pub fn with_added(&self, l: Letter, k: u32) -> Self {
        let mut e = self.exponents.clone();
        e[l.index()] += k;
        NormalForm { exponents: e }
    }

    /// `self ≺ other`: componentwise containment.
    pub fn is_contained_in(&self, other: &[u32]) -> bool {
        self.exponents.iter().zip(other).all(|(a, b)| a <= b)
    }

    pub fn to_word(&self) -> Word {
        let mut v = Vec::with_capacity(self.len());
        for (i, &k) in self.exponents.iter().enumerate() {
            v.extend(std::iter::repeat_n(Letter(i as u16), k as usize));
        }
        Word::from(v)
    }

    /// Shortlex order of the sorted words: by length, then more of an earlier letter first.
    pub fn shortlex_cmp(&self, other: &NormalForm) -> Ordering {
        cmp_exponents(&self.exponents, &other.exponents)
    }

    pub fn render(&self, alphabet: &OrderedAlphabet) -> String {
        if self.is_empty() {
            return "ε".into();
        }
        alphabet.render(&self.to_word())
    }
}

/// A relation `lhs ∼ rhs` between sorted words with `lhs` shortlex-greater.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalRelation {
    pub lhs: NormalForm,
    pub rhs: NormalForm,
}

/// How often a letter may follow a given shortlex prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LetterClass {
    Infinite,
    Finite(u32),
    Never,
}

/// Minimal relations found in the exponent box `[0, bound]^n`, sorted by their left sides.
///
/// Every vector in the box is compared with the shortlex-least vector of the box having the
/// same value. Relations found this way are genuine; a relation whose right side leaves the
/// box can be missed, which a larger bound fixes.
pub fn minimal_relations(structure: &AbelianStructure, bound: u32) -> Result<Vec<MinimalRelation>> {
    let n = structure.alphabet().len();
    let base = bound as u64 + 1;
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(base));
    let total = match total {
        Some(t) if t <= MAX_RELATION_BOX => t as usize,
        _ => {
            return Err(Error::CapExceeded(format!(
                "exponent box ({}+1)^{} exceeds {} vectors",
                bound, n, MAX_RELATION_BOX
            )))
        }
    };
    let images: Vec<&Element> = structure.alphabet().letters().map(|l| structure.letter_image(l)).collect();
    let wrap: Vec<Element> = images
        .iter()
        .map(|img| structure.scale(img, bound as i64))
        .collect();

    // First pass: shortlex-least vector per value; second pass: who is not the least.
    let mut ids: HashMap<Element, u32> = HashMap::new();
    let mut best_by_id: Vec<usize> = Vec::new();
    let mut values: Vec<u32> = Vec::with_capacity(total);
    let mut digits = vec![0u32; n];
    let mut scratch = vec![0u32; n];
    let mut value = structure.identity();
    for idx in 0..total {
        match ids.get(&value) {
            Some(&id) => {
                values.push(id);
                decode_into(best_by_id[id as usize], base, &mut scratch);
                if cmp_exponents(&digits, &scratch) == Ordering::Less {
                    best_by_id[id as usize] = idx;
                }
            }
            None => {
                let id = best_by_id.len() as u32;
                ids.insert(value.clone(), id);
                best_by_id.push(idx);
                values.push(id);
            }
        }
        // Increment the mixed-radix counter; digit 0 is the fastest.
        for i in 0..n {
            if digits[i] < bound {
                digits[i] += 1;
                value = structure.add(&value, images[i]);
                break;
            }
            digits[i] = 0;
            value = structure.sub(&value, &wrap[i]);
        }
    }
    drop(ids);
    let reducible = |idx: usize| best_by_id[values[idx] as usize] != idx;

    let mut strides = vec![1usize; n];
    for i in 1..n {
        strides[i] = strides[i - 1] * base as usize;
    }
    let mut candidates: Vec<NormalForm> = Vec::new();
    for idx in 0..total {
        if !reducible(idx) {
            continue;
        }
        let v = decode(idx, n, base);
        let locally_minimal = (0..n)
            .filter(|&i| v.exponents[i] > 0)
            .all(|i| !reducible(idx - strides[i]));
        if locally_minimal {
            candidates.push(v);
        }
    }
    let mut out: Vec<MinimalRelation> = candidates
        .iter()
        .filter(|v| {
            !candidates
                .iter()
                .any(|o| o != *v && o.is_contained_in(v.exponents()))
        })
        .map(|v| {
            let idx = encode(v, base);
            MinimalRelation {
                lhs: v.clone(),
                rhs: decode(best_by_id[values[idx] as usize], n, base),
            }
        })
        .collect();
    out.sort_by(|a, b| a.lhs.shortlex_cmp(&b.lhs));
    Ok(out)
}

fn decode(idx: usize, n: usize, base: u64) -> NormalForm {
    let mut e = vec![0u32; n];
    decode_into(idx, base, &mut e);
    NormalForm::from_exponents(e)
}

fn decode_into(mut idx: usize, base: u64, out: &mut [u32]) {
    for x in out.iter_mut() {
        *x = (idx as u64 % base) as u32;
        idx = (idx as u64 / base) as usize;
    }
}

/// Shortlex comparison of sorted words given by exponent vectors.
fn cmp_exponents(a: &[u32], b: &[u32]) -> Ordering {
    let la: u64 = a.iter().map(|&x| x as u64).sum();
    let lb: u64 = b.iter().map(|&x| x as u64).sum();
    la.cmp(&lb).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn encode(v: &NormalForm, base: u64) -> usize {
    v.exponents
        .iter()
        .rev()
        .fold(0usize, |acc, &x| acc * base as usize + x as usize)
}

/// Largest prefix-alignment divergence `max_t Σ_i |r_i(t) − s_i(t)|` over the relations,
/// where `r(t)`, `s(t)` count letters in the length-`t` prefixes of the two sorted words.
/// At least 1.
pub fn fellow_traveller_constant(relations: &[MinimalRelation]) -> usize {
    relations
        .iter()
        .map(|rel| {
            let u = rel.lhs.to_word();
            let v = rel.rhs.to_word();
            let n = rel.lhs.exponents().len();
            let mut r = vec![0i64; n];
            let mut s = vec![0i64; n];
            let mut worst = 0;
            for t in 0..u.len().max(v.len()) {
                if let Some(l) = u.letters().get(t) {
                    r[l.index()] += 1;
                }
                if let Some(l) = v.letters().get(t) {
                    s[l.index()] += 1;
                }
                let diff: i64 = r.iter().zip(&s).map(|(a, b)| (a - b).abs()).sum();
                worst = worst.max(diff as usize);
            }
            worst
        })
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Decides shortlex-ness of sorted words by containment of relation left sides.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShortlexRules {
    relations: Vec<MinimalRelation>,
    saturation: u32,
}

impl ShortlexRules {
    pub fn new(relations: Vec<MinimalRelation>) -> Self {
        let saturation = relations
            .iter()
            .flat_map(|r| r.lhs.exponents().iter().copied())
            .max()
            .unwrap_or(0)
            .max(1);
        ShortlexRules {
            relations,
            saturation,
        }
    }

    pub fn relations(&self) -> &[MinimalRelation] {
        &self.relations
    }

    /// Largest exponent of any relation's left side (at least 1). Exponents at or above it
    /// are indistinguishable to the rules.
    pub fn saturation(&self) -> u32 {
        self.saturation
    }

    pub fn is_shortlex(&self, exponents: &[u32]) -> bool {
        !self
            .relations
            .iter()
            .any(|r| r.lhs.is_contained_in(exponents))
    }

    /// Shortlex-ness of an arbitrary word: it must be sorted and its exponents allowed.
    pub fn accepts_word(&self, n: usize, w: &Word) -> bool {
        w.letters().windows(2).all(|p| p[0] <= p[1])
            && self.is_shortlex(NormalForm::from_word(n, w).exponents())
    }

    /// Classifies how often `letter` may follow the shortlex `prefix`.
    pub fn classify_letter(&self, prefix: &NormalForm, letter: Letter) -> LetterClass {
        if prefix.last_letter().is_some_and(|last| letter < last) {
            return LetterClass::Never;
        }
        let mut e = prefix.exponents().to_vec();
        let mut k = 0;
        while k < self.saturation {
            e[letter.index()] += 1;
            if !self.is_shortlex(&e) {
                return if k == 0 {
                    LetterClass::Never
                } else {
                    LetterClass::Finite(k)
                };
            }
            k += 1;
        }
        LetterClass::Infinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupSpec;
    use proptest::prelude::*;

    fn setup(text: &str) -> (GroupSpec, AbelianStructure) {
        let spec = GroupSpec::parse(text).unwrap();
        let st = AbelianStructure::derive(&spec).unwrap();
        (spec, st)
    }

    fn nf(spec: &GroupSpec, w: &str) -> NormalForm {
        NormalForm::from_word(spec.alphabet.len(), &spec.alphabet.parse_word(w).unwrap())
    }

    const Z2: &str = "gens a,b\ninv a~A,b~B\nrel abAB";
    const LINE_PLANE: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel aaB\nrel acAC";

    #[test]
    fn z2_has_only_cancellations() {
        let (spec, st) = setup(Z2);
        let rels = minimal_relations(&st, spec.mu() as u32 + 1).unwrap();
        let lhs: Vec<NormalForm> = rels.iter().map(|r| r.lhs.clone()).collect();
        assert_eq!(lhs, vec![nf(&spec, "aA"), nf(&spec, "bB")]);
        assert!(rels.iter().all(|r| r.rhs.is_empty()));
        assert_eq!(fellow_traveller_constant(&rels), 2);
    }

    /// Oracle: all relations between distinct vectors of a small box, minimal under ≺ on pairs.
    fn brute_force_minimal(st: &AbelianStructure, bound: u32) -> Vec<(NormalForm, NormalForm)> {
        let n = st.alphabet().len();
        let base = bound as u64 + 1;
        let total = base.pow(n as u32) as usize;
        let vs: Vec<NormalForm> = (0..total).map(|i| decode(i, n, base)).collect();
        let vals: Vec<Element> = vs.iter().map(|v| st.evaluate_exponents(v.exponents())).collect();
        let mut rels = Vec::new();
        for i in 0..total {
            for j in 0..total {
                if i != j && vals[i] == vals[j] && vs[i].shortlex_cmp(&vs[j]) == Ordering::Greater {
                    rels.push((vs[i].clone(), vs[j].clone()));
                }
            }
        }
        rels.iter()
            .filter(|(v, w)| {
                !rels.iter().any(|(v2, w2)| {
                    (v2, w2) != (v, w) && v2.is_contained_in(v.exponents()) && w2.is_contained_in(w.exponents())
                })
            })
            .cloned()
            .collect()
    }

    #[test]
    fn line_and_plane_contains_a_squared_to_b() {
        let (spec, st) = setup(LINE_PLANE);
        let rels = minimal_relations(&st, spec.mu() as u32 + 1).unwrap();
        assert!(rels
            .iter()
            .any(|r| r.lhs == nf(&spec, "aa") && r.rhs == nf(&spec, "b")));
        // The pair is minimal among all relations in a small box.
        let brute = brute_force_minimal(&st, 2);
        assert!(brute.contains(&(nf(&spec, "aa"), nf(&spec, "b"))));
        assert!(fellow_traveller_constant(&rels) >= 3);
    }

    #[test]
    fn found_relations_are_minimal_pairs() {
        for text in [Z2, LINE_PLANE, "gens a\ninv a~A\nrel aaaaa", "gens x,a\ninv x~x,a~A"] {
            let (_, st) = setup(text);
            let rels = minimal_relations(&st, 2).unwrap();
            let brute = brute_force_minimal(&st, 2);
            for r in &rels {
                assert_eq!(st.evaluate_exponents(r.lhs.exponents()), st.evaluate_exponents(r.rhs.exponents()));
                assert_eq!(r.lhs.shortlex_cmp(&r.rhs), Ordering::Greater);
                assert!(brute.contains(&(r.lhs.clone(), r.rhs.clone())), "{r:?} not minimal in {text}");
            }
        }
    }

    #[test]
    fn larger_box_adds_no_relations() {
        let triangle = "gens a,b,c\ninv a~A,b~B,c~C\nrel ab=ba, c=ab";
        let root = "gens a,b\ninv a~A,b~B\nrel aa=b, ab=ba";
        for text in [Z2, LINE_PLANE, triangle, root, "gens a\ninv a~A\nrel aaaaa"] {
            let (spec, st) = setup(text);
            let bound = spec.mu() as u32 + 1;
            assert_eq!(
                minimal_relations(&st, bound).unwrap(),
                minimal_relations(&st, bound + 2).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn z2_box_has_no_other_relations_between_positive_words() {
        // Exhaustive: distinct vectors over {a, b} only never coincide in Z².
        let (spec, st) = setup(Z2);
        let brute = brute_force_minimal(&st, 2);
        let (a, b) = (Letter(0), Letter(2));
        let only_ab = |v: &NormalForm| v.exponent(Letter(1)) == 0 && v.exponent(Letter(3)) == 0;
        assert!(!brute.iter().any(|(v, w)| only_ab(v) && only_ab(w)));
        let rels = minimal_relations(&st, spec.mu() as u32 + 1).unwrap();
        assert!(rels.iter().all(|r| r.lhs.exponent(a) + r.lhs.exponent(b) <= 1));
    }

    #[test]
    fn kappa_floor_and_line_and_plane() {
        assert_eq!(fellow_traveller_constant(&[]), 1);
        let (spec, _) = setup(LINE_PLANE);
        let rel = MinimalRelation {
            lhs: nf(&spec, "aa"),
            rhs: nf(&spec, "b"),
        };
        assert_eq!(fellow_traveller_constant(&[rel]), 3);
    }

    #[test]
    fn classification_examples() {
        let (spec, st) = setup(Z2);
        let rules = ShortlexRules::new(minimal_relations(&st, 5).unwrap());
        let a = spec.alphabet.lookup("a").unwrap();
        let big_a = spec.alphabet.lookup("A").unwrap();
        let empty = NormalForm::zero(4);
        assert_eq!(rules.classify_letter(&empty, a), LetterClass::Infinite);
        assert_eq!(rules.classify_letter(&nf(&spec, "aa"), big_a), LetterClass::Never);
        assert_eq!(rules.classify_letter(&nf(&spec, "b"), a), LetterClass::Never);

        let (spec, st) = setup(LINE_PLANE);
        let rules = ShortlexRules::new(minimal_relations(&st, spec.mu() as u32 + 1).unwrap());
        let a = spec.alphabet.lookup("a").unwrap();
        assert_eq!(rules.classify_letter(&NormalForm::zero(6), a), LetterClass::Finite(1));

        let (spec, st) = setup("gens a\ninv a~A\nrel aaaaa");
        let rules = ShortlexRules::new(minimal_relations(&st, spec.mu() as u32 + 1).unwrap());
        assert_eq!(rules.classify_letter(&NormalForm::zero(2), Letter(0)), LetterClass::Finite(2));
        assert_eq!(rules.classify_letter(&NormalForm::zero(2), Letter(1)), LetterClass::Finite(2));
    }

    proptest! {
        #[test]
        fn normal_form_order_matches_word_order(
            a in proptest::collection::vec(0u32..4, 4),
            b in proptest::collection::vec(0u32..4, 4),
        ) {
            let x = NormalForm::from_exponents(a);
            let y = NormalForm::from_exponents(b);
            prop_assert_eq!(x.shortlex_cmp(&y), x.to_word().shortlex_cmp(&y.to_word()));
        }
    }
}
