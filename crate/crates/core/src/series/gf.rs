use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;

/// `numerator / (1 − z)^denom_power`, kept canonical: `(1 − z)` never divides a nonzero numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalGF {
    numerator: IntPoly,
    denom_power: usize,
}

/// Coefficients `c_0 .. c_N` of a power series.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffSeq {
    pub values: Vec<BigInt>,
}

impl RationalGF {
    pub fn new(numerator: IntPoly, denom_power: usize) -> Self {
        let mut gf = RationalGF {
            numerator,
            denom_power,
        };
        gf.canonicalize();
        gf
    }

    pub fn zero() -> Self {
        Self::new(IntPoly::zero(), 0)
    }

    pub fn polynomial(p: IntPoly) -> Self {
        Self::new(p, 0)
    }

    /// `z^l / (1 − z)^k`
    pub fn monomial_over(l: usize, k: usize) -> Self {
        Self::new(IntPoly::monomial(BigInt::one(), l), k)
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.denom_power = 0;
            return;
        }
        while self.denom_power > 0 {
            match self.numerator.div_one_minus_z() {
                Some(q) => {
                    self.numerator = q;
                    self.denom_power -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.numerator
    }

    pub fn denom_power(&self) -> usize {
        self.denom_power
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Numerator over `(1 − z)^k` for `k >= denom_power`.
    fn numerator_over(&self, k: usize) -> IntPoly {
        &self.numerator * &IntPoly::one_minus_z_pow(k - self.denom_power)
    }

    /// First `n + 1` coefficients, using `[z^j] 1/(1 − z)^k = C(j + k − 1, k − 1)`.
    pub fn expand(&self, n: usize) -> CoeffSeq {
        let k = self.denom_power;
        // binom[j] = C(j + k − 1, k − 1), built incrementally.
        let mut binom = Vec::with_capacity(n + 1);
        let mut b = BigInt::one();
        for j in 0..=n {
            if k == 0 {
                binom.push(if j == 0 { BigInt::one() } else { BigInt::zero() });
                continue;
            }
            if j > 0 {
                b = b * BigInt::from(j + k - 1) / BigInt::from(j);
            }
            binom.push(b.clone());
        }
        let mut values = vec![BigInt::zero(); n + 1];
        for (i, c) in self.numerator.coeffs().iter().enumerate() {
            if i > n || c.is_zero() {
                continue;
            }
            for j in i..=n {
                values[j] += c * &binom[j - i];
            }
        }
        CoeffSeq { values }
    }

    pub fn shift(&self, k: usize) -> Self {
        Self::new(self.numerator.shift(k), self.denom_power)
    }

    pub fn to_latex(&self) -> String {
        let num = self.numerator.to_latex();
        match self.denom_power {
            0 => num,
            1 => format!("\\frac{{{num}}}{{1 - z}}"),
            k => format!("\\frac{{{num}}}{{(1 - z)^{{{k}}}}}"),
        }
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.denom_power {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({})/(1 - z)", self.numerator),
            k => write!(f, "({})/(1 - z)^{k}", self.numerator),
        }
    }
}

pub fn gf_add(a: &RationalGF, b: &RationalGF) -> RationalGF {
    let k = a.denom_power.max(b.denom_power);
    RationalGF::new(&a.numerator_over(k) + &b.numerator_over(k), k)
}

pub fn gf_sub(a: &RationalGF, b: &RationalGF) -> RationalGF {
    let k = a.denom_power.max(b.denom_power);
    RationalGF::new(&a.numerator_over(k) - &b.numerator_over(k), k)
}

pub fn gf_mul(a: &RationalGF, b: &RationalGF) -> RationalGF {
    RationalGF::new(&a.numerator * &b.numerator, a.denom_power + b.denom_power)
}

pub fn gf_scale(a: &RationalGF, p: &IntPoly) -> RationalGF {
    RationalGF::new(&a.numerator * p, a.denom_power)
}

pub fn gf_sum<'a>(items: impl IntoIterator<Item = &'a RationalGF>) -> RationalGF {
    items
        .into_iter()
        .fold(RationalGF::zero(), |acc, g| gf_add(&acc, g))
}

/// Ball series `B = C / (1 − z)`.
pub fn b_from_c(c: &RationalGF) -> RationalGF {
    RationalGF::new(c.numerator.clone(), c.denom_power + 1)
}

/// Sphere series `C = (1 − z) B`.
pub fn c_from_b(b: &RationalGF) -> RationalGF {
    gf_scale(b, &IntPoly::one_minus_z_pow(1))
}

impl CoeffSeq {
    pub fn from_u64(values: &[u64]) -> Self {
        CoeffSeq {
            values: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the first differing coefficient on the common prefix.
    pub fn first_difference(&self, other: &CoeffSeq) -> Option<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a != b)
    }

    pub fn truncated(&self, n: usize) -> CoeffSeq {
        CoeffSeq {
            values: self.values.iter().take(n + 1).cloned().collect(),
        }
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::new(self.values.clone())
    }
}

impl fmt::Display for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}
