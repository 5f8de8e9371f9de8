use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::count::{count_table, MorphismCountTable};
use super::graph::Subgraph;
use crate::acceptor::Acceptor;
use crate::context::GroupContext;
use crate::error::{Error, Result};
use crate::oracle::BallTable;
use crate::series::{gf_add, tail_series, CoeffSeq, IntPoly, RationalGF, WalkCounter};

/// Default length of the stable window checked after the brute-force range.
pub const DEFAULT_VERIFY_WINDOW: usize = 3;

/// `δ_k` for every state: `None` for states without a loop on their path, which no
/// morphism beyond the brute-force range can end in.
pub fn delta_offsets(
    s: &Subgraph,
    acceptor: &Acceptor,
    oracle: &BallTable,
    diameter: usize,
) -> Result<Vec<Option<usize>>> {
    let structure = oracle.structure();
    let offsets = s.offsets(structure);
    let min_len = acceptor.gamma() * acceptor.alphabet().len() + 1;
    let cap = min_len + diameter + oracle.radius();
    let mut out = Vec::with_capacity(acceptor.num_states());
    for k in 0..acceptor.num_states() {
        if acceptor.path_profile(k).loops() == 0 {
            out.push(None);
            continue;
        }
        let witness = acceptor
            .pumped_word(k, min_len)
            .expect("looped states have pumped words");
        let g = structure.evaluate(&witness);
        let len = oracle.geodesic_length_or_search(&g, cap)?;
        if len != witness.len() {
            return Err(Error::Inconsistent(format!(
                "accepted word `{}` of length {} is not geodesic (length {len})",
                acceptor.alphabet().render(&witness),
                witness.len()
            )));
        }
        let mut far = len;
        for o in &offsets[1..] {
            far = far.max(oracle.geodesic_length_or_search(&structure.add(&g, o), cap)?);
        }
        let delta = far - len;
        if delta > diameter {
            return Err(Error::Inconsistent(format!(
                "offset {delta} of state {} exceeds the diameter {diameter}",
                k + 1
            )));
        }
        out.push(Some(delta));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactGrowth {
    pub gf: RationalGF,
    pub gamma: usize,
    pub gamma_threshold: usize,
    /// False when γ was forced at or below `d·κ + μ`.
    pub gamma_in_regime: bool,
    pub diameter: usize,
    pub brute_force_radius: usize,
    pub window: usize,
    pub states: usize,
    pub looped_states: usize,
    /// Number of states with each offset value.
    pub delta_histogram: BTreeMap<usize, usize>,
    pub coefficients: CoeffSeq,
}

/// Closed form assembled from brute-force counts up to `N0 = γ|Σ| + d` and per-state tails,
/// then checked against counts and walk numbers on `(N0, N0 + window]`.
pub fn growth_exact(
    ctx: &GroupContext,
    s: &Subgraph,
    oracle: &mut BallTable,
    gamma: Option<usize>,
    window: usize,
) -> Result<ExactGrowth> {
    let diameter = s.diameter(oracle)?;
    let threshold = ctx.gamma_threshold(diameter);
    let gamma = gamma.unwrap_or_else(|| ctx.default_gamma(diameter));
    let acceptor = ctx.acceptor(gamma)?;
    let n0 = gamma * acceptor.alphabet().len() + diameter;
    let radius = n0 + window;
    oracle.extend_to(radius)?;
    let table = count_table(s, radius, oracle, Some(&acceptor))?;
    let deltas = delta_offsets(s, &acceptor, oracle, diameter)?;

    let head = IntPoly::new(table.c[..=n0].iter().map(|&c| BigInt::from(c)).collect());
    let mut gf = RationalGF::polynomial(head);
    let mut groups: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    let mut profiles = BTreeMap::new();
    for (k, delta) in deltas.iter().enumerate() {
        if let Some(d) = *delta {
            let p = acceptor.path_profile(k);
            let key = (p.path_length, p.loop_count_plus_one, d);
            *groups.entry(key).or_insert(0) += 1;
            profiles.entry(key).or_insert(p);
        }
    }
    for (key, count) in &groups {
        let tail = tail_series(n0 + 1 - key.2, key.2, &profiles[key]);
        let scaled = RationalGF::new(tail.numerator().scale(&BigInt::from(*count)), tail.denom_power());
        gf = gf_add(&gf, &scaled);
    }

    check_window(&acceptor, &table, &deltas, n0, window)?;
    let coefficients = gf.expand(radius);
    let counted = table.c_series();
    if let Some(i) = coefficients.first_difference(&counted) {
        return Err(Error::Inconsistent(format!(
            "closed form gives c_{i} = {} but {} morphisms were counted",
            coefficients.values[i], counted.values[i]
        )));
    }
    check_shape(&gf, ctx.rank())?;

    let mut delta_histogram = BTreeMap::new();
    for d in deltas.iter().flatten() {
        *delta_histogram.entry(*d).or_insert(0) += 1;
    }
    Ok(ExactGrowth {
        gf,
        gamma,
        gamma_threshold: threshold,
        gamma_in_regime: gamma > threshold,
        diameter,
        brute_force_radius: n0,
        window,
        states: acceptor.num_states(),
        looped_states: deltas.iter().flatten().count(),
        delta_histogram,
        coefficients,
    })
}

/// `c_j(σ_k, S) = #walks of length j − δ_k ending at σ_k` for `j` in `(n0, n0 + window]`.
fn check_window(
    acceptor: &Acceptor,
    table: &MorphismCountTable,
    deltas: &[Option<usize>],
    n0: usize,
    window: usize,
) -> Result<()> {
    let matrix = acceptor.transition_matrix();
    let mut walks = WalkCounter::new(&matrix, acceptor.start());
    let max_delta = deltas.iter().flatten().copied().max().unwrap_or(0);
    let first = (n0 + 1).saturating_sub(max_delta);
    let mut rows: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    while walks.length() <= n0 + window {
        if walks.length() >= first {
            rows.insert(walks.length(), walks.counts().to_vec());
        }
        walks.advance();
    }
    for j in n0 + 1..=n0 + window {
        for (k, delta) in deltas.iter().enumerate() {
            let expected = match delta {
                Some(d) => rows[&(j - d)][k].clone(),
                None => BigInt::zero(),
            };
            let got = BigInt::from(table.state_count(j, k));
            if got != expected {
                return Err(Error::Inconsistent(format!(
                    "state {}: {got} morphisms at radius {j}, expected {expected} from walks",
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

/// The shape guaranteed for abelian groups: denominator `(1 − z)^rank`, numerator nonzero at 1.
pub fn check_shape(gf: &RationalGF, rank: usize) -> Result<()> {
    if gf.denom_power() != rank {
        return Err(Error::Inconsistent(format!(
            "denominator (1 - z)^{} does not match rank {rank}",
            gf.denom_power()
        )));
    }
    if !gf.numerator().eval_at_one().is_positive() {
        return Err(Error::Inconsistent(format!(
            "numerator {} is not positive at z = 1",
            gf.numerator()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    Fitted {
        gf: RationalGF,
        /// First index from which `(1 − z)^r C(z)` vanishes.
        onset: usize,
        radius: usize,
        coefficients: CoeffSeq,
    },
    Inconclusive {
        radius: usize,
        reason: String,
        coefficients: CoeffSeq,
    },
}

impl FitOutcome {
    pub fn gf(&self) -> Option<&RationalGF> {
        match self {
            FitOutcome::Fitted { gf, .. } => Some(gf),
            FitOutcome::Inconclusive { .. } => None,
        }
    }

    pub fn coefficients(&self) -> &CoeffSeq {
        match self {
            FitOutcome::Fitted { coefficients, .. } | FitOutcome::Inconclusive { coefficients, .. } => {
                coefficients
            }
        }
    }
}

pub fn default_fit_window(rank: usize) -> usize {
    2 * rank + 4
}

/// Fits `P(z) / (1 − z)^r` to brute-force counts, doubling the radius until the numerator's
/// trailing coefficients vanish on `window` consecutive indices or `max_n` is reached.
pub fn growth_fit(
    rank: usize,
    s: &Subgraph,
    oracle: &mut BallTable,
    window: usize,
    max_n: usize,
) -> Result<FitOutcome> {
    let mut n = (2 * window + rank).max(8).min(max_n);
    loop {
        if let Err(e) = oracle.extend_to(n) {
            if !e.is_resource_error() {
                return Err(e);
            }
            let have = oracle.radius();
            return Ok(FitOutcome::Inconclusive {
                radius: have,
                reason: e.to_string(),
                coefficients: count_table(s, have, oracle, None)?.c_series(),
            });
        }
        let counts = count_table(s, n, oracle, None)?.c_series();
        let q = (&counts.to_poly() * &IntPoly::one_minus_z_pow(rank)).truncate(n);
        let onset = q.degree().map_or(0, |d| d + 1);
        if n + 1 - onset >= window {
            let gf = RationalGF::new(q, rank);
            if let Some(i) = gf.expand(n).first_difference(&counts) {
                return Err(Error::Inconsistent(format!(
                    "fitted series disagrees with the counts at index {i}"
                )));
            }
            return Ok(FitOutcome::Fitted {
                gf,
                onset,
                radius: n,
                coefficients: counts,
            });
        }
        if n >= max_n {
            return Ok(FitOutcome::Inconclusive {
                radius: n,
                reason: format!("numerator did not stabilize by radius {n}"),
                coefficients: counts,
            });
        }
        n = (2 * n).min(max_n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(text: &str) -> GroupContext {
        GroupContext::parse(text).unwrap()
    }

    const TRIANGLE: &str = "gens a,b,c\ninv a~A,b~B,c~C\nrel ab=ba, c=ab";

    #[test]
    fn vertex_offsets_are_zero() {
        let c = ctx(TRIANGLE);
        let s = Subgraph::vertex(c.structure());
        let acc = c.acceptor(c.default_gamma(0)).unwrap();
        let oracle = c.oracle(acc.gamma() * 6 + 2).unwrap();
        let deltas = delta_offsets(&s, &acc, &oracle, 0).unwrap();
        assert!(deltas.iter().flatten().all(|&d| d == 0));
        assert!(deltas.iter().any(Option::is_some));
    }

    #[test]
    fn exact_triangle_group() {
        let c = ctx(TRIANGLE);
        let mut oracle = c.oracle(0).unwrap();
        let s = Subgraph::vertex(c.structure());
        let r = growth_exact(&c, &s, &mut oracle, None, DEFAULT_VERIFY_WINDOW).unwrap();
        assert_eq!(r.gf, RationalGF::new(IntPoly::from_i64(&[1, 4, 1]), 2));
        assert!(r.gamma_in_regime);
        let s = Subgraph::parse("path: a,b,c", c.structure()).unwrap();
        let r = growth_exact(&c, &s, &mut oracle, None, DEFAULT_VERIFY_WINDOW).unwrap();
        assert_eq!(r.gf, RationalGF::new(IntPoly::from_i64(&[0, 1, 5]), 2));
    }

    #[test]
    fn fit_triangle_group_and_finite_group() {
        let c = ctx(TRIANGLE);
        let mut oracle = c.oracle(0).unwrap();
        let s = Subgraph::parse("path: a", c.structure()).unwrap();
        let fit = growth_fit(2, &s, &mut oracle, default_fit_window(2), 200).unwrap();
        assert_eq!(fit.gf(), Some(&RationalGF::new(IntPoly::from_i64(&[0, 4, 2]), 2)));

        let c5 = ctx("gens a\ninv a~A\nrel aaaaa");
        let mut oracle = c5.oracle(0).unwrap();
        let s = Subgraph::vertex(c5.structure());
        let fit = growth_fit(0, &s, &mut oracle, default_fit_window(0), 50).unwrap();
        assert_eq!(fit.gf(), Some(&RationalGF::polynomial(IntPoly::from_i64(&[1, 2, 2]))));
    }

    #[test]
    fn fit_reports_inconclusive_instead_of_guessing() {
        let c = ctx(TRIANGLE);
        let mut oracle = c.oracle(0).unwrap();
        let s = Subgraph::vertex(c.structure());
        // rank-1 ansatz for a rank-2 group never stabilizes
        let fit = growth_fit(1, &s, &mut oracle, 6, 40).unwrap();
        assert!(matches!(fit, FitOutcome::Inconclusive { .. }));
    }
}
