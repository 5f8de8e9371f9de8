//! Morphism counts. A morphism from a connected `S` is fixed by the image `g` of the base
//! point and sends `v` to `g + (v − p)`, so `b_n` counts the `g` whose translate of `S` lies
//! in the ball of radius `n`.

use std::collections::BTreeMap;

use super::graph::Subgraph;
use crate::acceptor::{Acceptor, Target};
use crate::error::{Error, Result};
use crate::oracle::BallTable;
use crate::series::CoeffSeq;

/// Per radius `n <= radius`: `b_n`, `c_n` and `c_n` split by the final state of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCountTable {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub by_state: Vec<BTreeMap<usize, u64>>,
}

impl MorphismCountTable {
    pub fn radius(&self) -> usize {
        self.c.len() - 1
    }

    pub fn c_series(&self) -> CoeffSeq {
        CoeffSeq::from_u64(&self.c)
    }

    pub fn state_count(&self, n: usize, k: usize) -> u64 {
        self.by_state[n].get(&k).copied().unwrap_or(0)
    }
}

fn require_radius(oracle: &BallTable, need: usize) -> Result<()> {
    if oracle.radius() < need {
        return Err(Error::RadiusTooSmall {
            have: oracle.radius(),
            need,
        });
    }
    Ok(())
}

/// `m(g) = max_v |g + (v − p)|` for every `g` of the ball with `m(g) <= n`, by ball index.
fn morphism_radii(s: &Subgraph, n: usize, oracle: &BallTable) -> Vec<(usize, usize)> {
    let structure = oracle.structure();
    let offsets = s.offsets(structure);
    let end = oracle.level(n).end;
    let mut out = Vec::new();
    'g: for idx in 0..end {
        let (g, entry) = oracle.get_index(idx);
        let mut m = entry.distance as usize;
        for o in &offsets[1..] {
            match oracle.geodesic_length(&structure.add(g, o)) {
                Some(d) if d <= n => m = m.max(d),
                _ => continue 'g,
            }
        }
        out.push((idx, m));
    }
    out
}

/// Final acceptor state of every stored normal form, by ball index.
pub fn final_states(oracle: &BallTable, acceptor: &Acceptor) -> Result<Vec<usize>> {
    let mut states = Vec::with_capacity(oracle.len());
    for idx in 0..oracle.len() {
        let (_, entry) = oracle.get_index(idx);
        let s = match (entry.parent(), entry.last_letter()) {
            (Some(p), Some(x)) => match acceptor.step(states[p], x) {
                Target::State(t) => t,
                Target::Failure => {
                    let nf = oracle.nf_at(idx);
                    return Err(Error::Inconsistent(format!(
                        "acceptor rejects the shortlex normal form `{}`",
                        acceptor.alphabet().render(&nf)
                    )));
                }
            },
            _ => acceptor.start(),
        };
        states.push(s);
    }
    Ok(states)
}

/// Counts up to radius `n`; `acceptor` adds the split by final state.
pub fn count_table(
    s: &Subgraph,
    n: usize,
    oracle: &BallTable,
    acceptor: Option<&Acceptor>,
) -> Result<MorphismCountTable> {
    require_radius(oracle, n)?;
    let finals = acceptor.map(|a| final_states(oracle, a)).transpose()?;
    let mut c = vec![0u64; n + 1];
    let mut by_state = vec![BTreeMap::new(); n + 1];
    for (idx, m) in morphism_radii(s, n, oracle) {
        c[m] += 1;
        if let Some(f) = &finals {
            *by_state[m].entry(f[idx]).or_insert(0) += 1;
        }
    }
    let b = c
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    Ok(MorphismCountTable { b, c, by_state })
}

/// `b_n(S)`: morphisms from `S` into the ball of radius `n`.
pub fn count_morphisms(s: &Subgraph, n: usize, oracle: &BallTable) -> Result<u64> {
    Ok(count_table(s, n, oracle, None)?.b[n])
}

/// `c_0 .. c_n` with `c_n = b_n − b_(n−1)`.
pub fn c_series(s: &Subgraph, n: usize, oracle: &BallTable) -> Result<CoeffSeq> {
    Ok(count_table(s, n, oracle, None)?.c_series())
}

/// `c_n(σ_k, S)` for every state `σ_k` that occurs.
pub fn count_by_final_state(
    s: &Subgraph,
    n: usize,
    oracle: &BallTable,
    acceptor: &Acceptor,
) -> Result<BTreeMap<usize, u64>> {
    Ok(count_table(s, n, oracle, Some(acceptor))?.by_state.swap_remove(n))
}

/// Label- and incidence-preserving maps `S → Γ_n` found by backtracking over all ball
/// elements for each vertex, without using translations.
pub fn count_morphisms_backtracking(s: &Subgraph, n: usize, oracle: &BallTable) -> Result<u64> {
    require_radius(oracle, n)?;
    let structure = oracle.structure();
    let order = s.bfs_order();
    let candidates: Vec<_> = (0..oracle.level(n).end)
        .map(|i| oracle.get_index(i).0.clone())
        .collect();
    let mut image: Vec<Option<usize>> = vec![None; s.vertices().len()];

    fn go(
        depth: usize,
        order: &[usize],
        s: &Subgraph,
        candidates: &[crate::abelian::Element],
        image: &mut Vec<Option<usize>>,
        structure: &crate::abelian::AbelianStructure,
    ) -> u64 {
        if depth == order.len() {
            return 1;
        }
        let v = order[depth];
        let mut total = 0;
        for (ci, cand) in candidates.iter().enumerate() {
            let img = |i: usize| {
                if i == v {
                    Some(cand)
                } else {
                    image[i].map(|t| &candidates[t])
                }
            };
            let consistent = s.edges().iter().all(|e| match (img(e.from), img(e.to)) {
                (Some(u), Some(w)) => structure.mul_letter(u, e.letter) == *w,
                _ => true,
            });
            if consistent {
                image[v] = Some(ci);
                total += go(depth + 1, order, s, candidates, image, structure);
                image[v] = None;
            }
        }
        total
    }

    Ok(go(0, &order, s, &candidates, &mut image, structure))
}
