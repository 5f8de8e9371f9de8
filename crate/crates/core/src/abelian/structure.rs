use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::alphabet::{Letter, OrderedAlphabet, Word};
use super::presentation::GroupSpec;
use super::snf::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// Letter images are bounded so that sums along any word that fits in memory stay in `i64`.
const MAX_IMAGE_COORD: i64 = 1 << 40;

/// A group element in canonical coordinates: a free part in Z^rank and torsion residues.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    free: SmallVec<[i64; 3]>,
    torsion: SmallVec<[i64; 2]>,
}

impl Element {
    pub fn free_part(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_part(&self) -> &[i64] {
        &self.torsion
    }

    pub fn coordinates(&self) -> impl Iterator<Item = i64> + '_ {
        self.free.iter().chain(self.torsion.iter()).copied()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.free.as_slice())?;
        if !self.torsion.is_empty() {
            write!(f, "+t{:?}", self.torsion.as_slice())?;
        }
        Ok(())
    }
}

/// One column of the relation matrix: a generator together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub positive: Letter,
    /// `None` for an involution.
    pub negative: Option<Letter>,
}

/// The abelian group presented by a `GroupSpec`: `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianStructure {
    alphabet: OrderedAlphabet,
    rank: usize,
    invariant_factors: Vec<i64>,
    columns: Vec<Column>,
    letter_column: Vec<(usize, i64)>,
    letter_image: Vec<Element>,
}

/// Generators grouped into inverse pairs, in alphabet order.
pub fn columns(alphabet: &OrderedAlphabet) -> Vec<Column> {
    let mut cols = Vec::new();
    let mut seen = vec![false; alphabet.len()];
    for l in alphabet.letters() {
        if seen[l.index()] {
            continue;
        }
        let inv = alphabet.inverse(l);
        seen[l.index()] = true;
        seen[inv.index()] = true;
        cols.push(Column {
            positive: l,
            negative: (inv != l).then_some(inv),
        });
    }
    cols
}

fn letter_columns(alphabet: &OrderedAlphabet, cols: &[Column]) -> Vec<(usize, i64)> {
    let mut out = vec![(0, 0); alphabet.len()];
    for (j, c) in cols.iter().enumerate() {
        out[c.positive.index()] = (j, 1);
        if let Some(n) = c.negative {
            out[n.index()] = (j, -1);
        }
    }
    out
}

/// Abelianized relators: one row per relator (net exponent per column), then a row `2·e_j`
/// for every involution column.
pub fn relation_matrix(spec: &GroupSpec) -> IntMatrix {
    let cols = columns(&spec.alphabet);
    let lc = letter_columns(&spec.alphabet, &cols);
    let mut rows: Vec<Vec<i64>> = spec
        .relators
        .iter()
        .map(|w| {
            let mut row = vec![0i64; cols.len()];
            for &l in w.letters() {
                let (j, s) = lc[l.index()];
                row[j] += s;
            }
            row
        })
        .collect();
    for (j, c) in cols.iter().enumerate() {
        if c.negative.is_none() {
            let mut row = vec![0i64; cols.len()];
            row[j] = 2;
            rows.push(row);
        }
    }
    IntMatrix::from_rows(cols.len(), &rows)
}

impl AbelianStructure {
    pub fn derive(spec: &GroupSpec) -> Result<Self> {
        let cols = columns(&spec.alphabet);
        let m = relation_matrix(spec);
        let snf = smith_normal_form(&m);
        let invariants = snf.invariants();

        let mut free_idx = Vec::new();
        let mut torsion_idx = Vec::new();
        for (i, d) in invariants.iter().enumerate() {
            if d.is_zero() {
                free_idx.push(i);
            } else if d > &BigInt::one() {
                torsion_idx.push(i);
            }
        }
        let invariant_factors = torsion_idx
            .iter()
            .map(|&i| invariants[i].to_i64().ok_or(Error::Overflow("reading invariant factors")))
            .collect::<Result<Vec<_>>>()?;

        // Column j maps to row j of V in the diagonal basis.
        let mut column_image = Vec::with_capacity(cols.len());
        for j in 0..cols.len() {
            let row = snf.v.row(j);
            let coord = |i: usize, modulus: Option<&BigInt>| -> Result<i64> {
                let x = match modulus {
                    Some(d) => {
                        let r = &row[i] % d;
                        if r.is_negative() {
                            r + d
                        } else {
                            r
                        }
                    }
                    None => row[i].clone(),
                };
                x.to_i64()
                    .filter(|v| v.abs() <= MAX_IMAGE_COORD)
                    .ok_or(Error::Overflow("computing letter images"))
            };
            let free = free_idx
                .iter()
                .map(|&i| coord(i, None))
                .collect::<Result<SmallVec<_>>>()?;
            let torsion = torsion_idx
                .iter()
                .map(|&i| coord(i, Some(&invariants[i])))
                .collect::<Result<SmallVec<_>>>()?;
            column_image.push(Element { free, torsion });
        }

        let letter_column = letter_columns(&spec.alphabet, &cols);
        let mut s = AbelianStructure {
            alphabet: spec.alphabet.clone(),
            rank: free_idx.len(),
            invariant_factors,
            columns: cols,
            letter_column,
            letter_image: Vec::new(),
        };
        s.letter_image = s
            .letter_column
            .iter()
            .map(|&(j, sign)| {
                if sign > 0 {
                    column_image[j].clone()
                } else {
                    s.negate(&column_image[j])
                }
            })
            .collect();
        Ok(s)
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Column index and sign (+1 / -1) of a letter.
    pub fn letter_column(&self, letter: Letter) -> (usize, i64) {
        self.letter_column[letter.index()]
    }

    pub fn letter_image(&self, letter: Letter) -> &Element {
        &self.letter_image[letter.index()]
    }

    pub fn identity(&self) -> Element {
        Element {
            free: SmallVec::from_elem(0, self.rank),
            torsion: SmallVec::from_elem(0, self.invariant_factors.len()),
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        e.coordinates().all(|x| x == 0)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.invariant_factors)
            .map(|((x, y), d)| (x + y).rem_euclid(*d))
            .collect();
        Element { free, torsion }
    }

    pub fn negate(&self, a: &Element) -> Element {
        let free = a.free.iter().map(|x| -x).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| (-x).rem_euclid(*d))
            .collect();
        Element { free, torsion }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.negate(b))
    }

    pub fn mul_letter(&self, a: &Element, letter: Letter) -> Element {
        self.add(a, self.letter_image(letter))
    }

    pub fn scale(&self, a: &Element, k: i64) -> Element {
        let free = a.free.iter().map(|x| x * k).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| (x * k).rem_euclid(*d))
            .collect();
        Element { free, torsion }
    }

    pub fn evaluate(&self, w: &Word) -> Element {
        w.letters()
            .iter()
            .fold(self.identity(), |acc, &l| self.mul_letter(&acc, l))
    }

    /// Value of the sorted word with the given exponent per letter.
    pub fn evaluate_exponents(&self, exponents: &[u32]) -> Element {
        exponents
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .fold(self.identity(), |acc, (i, &k)| {
                self.add(&acc, &self.scale(&self.letter_image[i], k as i64))
            })
    }

    /// Element with the given net exponent per column.
    pub fn evaluate_columns(&self, t: &[i64]) -> Element {
        self.columns
            .iter()
            .zip(t)
            .filter(|(_, &k)| k != 0)
            .fold(self.identity(), |acc, (c, &k)| {
                self.add(&acc, &self.scale(self.letter_image(c.positive), k))
            })
    }

    /// Net exponent per column of a word.
    pub fn column_exponents(&self, w: &Word) -> Vec<i64> {
        let mut t = vec![0i64; self.columns.len()];
        for &l in w.letters() {
            let (j, s) = self.letter_column(l);
            t[j] += s;
        }
        t
    }

    pub fn torsion_summary(&self) -> String {
        if self.invariant_factors.is_empty() {
            "none".into()
        } else {
            format!("{:?}", self.invariant_factors)
        }
    }
}
