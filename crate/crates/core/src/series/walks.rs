use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::gf::{gf_add, gf_sum, RationalGF};
use super::poly::IntPoly;
use crate::acceptor::{Acceptor, StatePathProfile, TransitionMatrix};

/// `z^l / (1 − z)^(k'−1)`: walks from the start state along the tree path, looping freely.
pub fn state_growth(profile: &StatePathProfile) -> RationalGF {
    RationalGF::monomial_over(profile.path_length, profile.loops())
}

/// Row vectors `w_1 A^j` for `j = 0..=n`, computed by repeated vector-matrix products.
pub struct WalkCounter<'a> {
    matrix: &'a TransitionMatrix,
    current: Vec<BigInt>,
    step: usize,
}

impl<'a> WalkCounter<'a> {
    pub fn new(matrix: &'a TransitionMatrix, start: usize) -> Self {
        let mut current = vec![BigInt::zero(); matrix.dim()];
        if start < current.len() {
            current[start] = BigInt::one();
        }
        WalkCounter {
            matrix,
            current,
            step: 0,
        }
    }

    /// Walk counts of the current length, indexed by end state.
    pub fn counts(&self) -> &[BigInt] {
        &self.current
    }

    pub fn length(&self) -> usize {
        self.step
    }

    pub fn advance(&mut self) {
        let mut next = vec![BigInt::zero(); self.current.len()];
        for (s, v) in self.current.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for &(t, m) in self.matrix.row(s) {
                next[t] += v * BigInt::from(m);
            }
        }
        self.current = next;
        self.step += 1;
    }
}

/// Number of `j`-walks from the start state (state 0) to state `k`.
pub fn walk_count(a: &TransitionMatrix, j: usize, k: usize) -> BigInt {
    let mut w = WalkCounter::new(a, 0);
    for _ in 0..j {
        w.advance();
    }
    w.counts()[k].clone()
}

/// `table[j][k]` = number of `j`-walks from the start state to state `k`, for `j <= n`.
pub fn walk_count_table(a: &TransitionMatrix, n: usize) -> Vec<Vec<BigInt>> {
    let mut w = WalkCounter::new(a, 0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(w.counts().to_vec());
    for _ in 0..n {
        w.advance();
        out.push(w.counts().to_vec());
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// One summand `p · z^q / (1 − z)^i` of a tail sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailTerm {
    pub coefficient: BigInt,
    pub exponent: usize,
    pub denom_power: usize,
}

impl TailTerm {
    pub fn to_gf(&self) -> RationalGF {
        RationalGF::new(
            IntPoly::monomial(self.coefficient.clone(), self.exponent),
            self.denom_power,
        )
    }
}

/// Summands of `Σ_{j >= η1} z^η2 · #{j-walks ending at the state} · z^j`.
///
/// With `K = k' − 1` loops and `m = η1 − l > 0` the walk counts are `C(t + K − 1, K − 1)` at
/// `j = l + t`, and splitting the binomial gives
/// `z^(η2 + η1) Σ_{i=1}^{K} C(m + K − 1 − i, K − i) / (1 − z)^i`; the `i = K` term has
/// coefficient 1. For `m <= 0` nothing is cut and the sum is `z^η2` times the state growth.
pub fn tail_terms(eta1: usize, eta2: usize, profile: &StatePathProfile) -> Vec<TailTerm> {
    let l = profile.path_length;
    let k = profile.loops();
    if eta1 <= l {
        return vec![TailTerm {
            coefficient: BigInt::one(),
            exponent: eta2 + l,
            denom_power: k,
        }];
    }
    if k == 0 {
        return Vec::new();
    }
    let m = eta1 - l;
    (1..=k)
        .map(|i| TailTerm {
            coefficient: binomial(m + k - 1 - i, k - i),
            exponent: eta2 + eta1,
            denom_power: i,
        })
        .collect()
}

pub fn tail_series(eta1: usize, eta2: usize, profile: &StatePathProfile) -> RationalGF {
    tail_terms(eta1, eta2, profile)
        .iter()
        .fold(RationalGF::zero(), |acc, t| gf_add(&acc, &t.to_gf()))
}

/// `Σ_k state_growth(σ_k)`, grouping states with the same `(l, k')`.
pub fn vertex_growth(acceptor: &Acceptor) -> RationalGF {
    let mut groups: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for k in 0..acceptor.num_states() {
        let p = acceptor.path_profile(k);
        *groups.entry((p.path_length, p.loops())).or_default() += 1;
    }
    let parts: Vec<RationalGF> = groups
        .into_iter()
        .map(|((l, loops), count)| {
            RationalGF::new(IntPoly::monomial(BigInt::from(count), l), loops)
        })
        .collect();
    gf_sum(&parts)
}
