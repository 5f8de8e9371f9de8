//! Invariant checks shared by the command-line `verify` command and the acceptance tests.

use num_bigint::BigInt;
use serde::Serialize;

use crate::abelian::Letter;
use crate::acceptor::{Acceptor, Target};
use crate::context::GroupContext;
use crate::error::Result;
use crate::oracle::BallTable;
use crate::series::{state_growth, walk_count_table};
use crate::subgraph::{
    count_morphisms, count_morphisms_backtracking, verify_main_theorem, GrowthOptions,
    MethodRegistry, Subgraph,
};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Compares acceptance with shortlex-ness for every word of length `<= max_len`.
///
/// A word `wx` is the normal form of its element exactly when `w` is a normal form and the
/// ball table records `w`'s element as the parent of `wx`'s, reached by `x`. Once a prefix
/// fails, every extension fails, so only the acceptor is run below it.
pub fn check_language(acceptor: &Acceptor, oracle: &BallTable, max_len: usize) -> Result<CheckResult> {
    oracle_radius_at_least(oracle, max_len)?;
    let letters: Vec<Letter> = acceptor.alphabet().letters().collect();
    let mut stats = LanguageStats::default();
    walk_words(acceptor, oracle, &letters, max_len, Some(0), Target::State(acceptor.start()), 0, &mut Vec::new(), &mut stats);
    let name = format!("language (words of length <= {max_len})");
    let detail = match &stats.first_mismatch {
        None => format!("{} words, {} accepted, 0 mismatches", stats.words, stats.accepted),
        Some(w) => format!("{} mismatches; first: `{}`", stats.mismatches, render(acceptor, w)),
    };
    Ok(CheckResult::new(name, stats.mismatches == 0, detail))
}

#[derive(Default)]
struct LanguageStats {
    words: u64,
    accepted: u64,
    mismatches: u64,
    first_mismatch: Option<Vec<Letter>>,
}

#[allow(clippy::too_many_arguments)]
fn walk_words(
    acceptor: &Acceptor,
    oracle: &BallTable,
    letters: &[Letter],
    max_len: usize,
    node: Option<usize>,
    state: Target,
    depth: usize,
    word: &mut Vec<Letter>,
    stats: &mut LanguageStats,
) {
    stats.words += 1;
    let accepted = matches!(state, Target::State(_));
    stats.accepted += accepted as u64;
    if accepted != node.is_some() {
        stats.mismatches += 1;
        if stats.first_mismatch.is_none() {
            stats.first_mismatch = Some(word.clone());
        }
    }
    if depth == max_len {
        return;
    }
    let structure = oracle.structure();
    for &x in letters {
        let next_node = node.and_then(|i| {
            let g = structure.mul_letter(oracle.get_index(i).0, x);
            let j = oracle.index_of(&g)?;
            let entry = oracle.get_index(j).1;
            (entry.parent() == Some(i) && entry.last_letter() == Some(x)).then_some(j)
        });
        let next_state = match state {
            Target::State(s) => acceptor.step(s, x),
            Target::Failure => Target::Failure,
        };
        word.push(x);
        walk_words(acceptor, oracle, letters, max_len, next_node, next_state, depth + 1, word, stats);
        word.pop();
    }
}

fn render(acceptor: &Acceptor, w: &[Letter]) -> String {
    acceptor.alphabet().render(&w.to_vec().into())
}

fn oracle_radius_at_least(oracle: &BallTable, n: usize) -> Result<()> {
    if oracle.radius() < n {
        return Err(crate::Error::RadiusTooSmall {
            have: oracle.radius(),
            need: n,
        });
    }
    Ok(())
}

/// Walks of each length summed over end states equal the sphere sizes.
pub fn check_partition(acceptor: &Acceptor, oracle: &BallTable, n: usize) -> Result<CheckResult> {
    oracle_radius_at_least(oracle, n)?;
    let table = walk_count_table(&acceptor.transition_matrix(), n);
    let spheres = oracle.sphere_counts().counts;
    for (j, row) in table.iter().enumerate() {
        let total: BigInt = row.iter().sum();
        if total != BigInt::from(spheres[j]) {
            return Ok(CheckResult::new(
                "partition",
                false,
                format!("length {j}: {total} walks but {} elements", spheres[j]),
            ));
        }
    }
    Ok(CheckResult::new(
        "partition",
        true,
        format!("walk totals equal sphere sizes for j <= {n}"),
    ))
}

/// Every state's closed form `z^l / (1 − z)^(k'−1)` expands to its walk counts.
pub fn check_state_growth(acceptor: &Acceptor, n: usize) -> CheckResult {
    let table = walk_count_table(&acceptor.transition_matrix(), n);
    for k in 0..acceptor.num_states() {
        let expanded = state_growth(&acceptor.path_profile(k)).expand(n);
        for (j, row) in table.iter().enumerate() {
            if expanded.values[j] != row[k] {
                return CheckResult::new(
                    "state closed forms",
                    false,
                    format!(
                        "state {}: closed form gives {} walks of length {j}, matrix gives {}",
                        k + 1,
                        expanded.values[j],
                        row[k]
                    ),
                );
            }
        }
    }
    CheckResult::new(
        "state closed forms",
        true,
        format!("{} states, lengths <= {n}", acceptor.num_states()),
    )
}

/// Backtracking enumeration of morphisms equals translation counting.
pub fn check_morphism_definition(s: &Subgraph, oracle: &BallTable, n: usize) -> Result<CheckResult> {
    for m in 0..=n {
        let direct = count_morphisms_backtracking(s, m, oracle)?;
        let translated = count_morphisms(s, m, oracle)?;
        if direct != translated {
            return Ok(CheckResult::new(
                format!("morphisms of {}", s.description()),
                false,
                format!("radius {m}: {direct} by backtracking, {translated} by translation"),
            ));
        }
    }
    Ok(CheckResult::new(
        format!("morphisms of {}", s.description()),
        true,
        format!("backtracking equals translation counting for n <= {n}"),
    ))
}

/// The vertex, a one-edge path per inverse pair, and the path through all of them.
pub fn standard_subgraphs(ctx: &GroupContext) -> Result<Vec<Subgraph>> {
    let structure = ctx.structure();
    let positives: Vec<Letter> = structure.columns().iter().map(|c| c.positive).collect();
    let mut out = vec![Subgraph::vertex(structure)];
    let mut paths: Vec<Vec<Letter>> = positives.iter().map(|&x| vec![x]).collect();
    if positives.len() > 1 {
        paths.push(positives.clone());
    }
    // A path that revisits an element is not a subgraph; such paths are skipped.
    out.extend(paths.iter().filter_map(|p| Subgraph::path(structure, p).ok()));
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub gamma: Option<usize>,
    pub word_length: Option<usize>,
    pub growth: GrowthOptions,
    /// Test hook: redirect one transition of the acceptor before checking it.
    pub corrupt_acceptor: bool,
}

/// Longest word length with at most a few million words over `letters` letters, capped at 10.
pub fn default_word_length(letters: usize) -> usize {
    let mut len = 0;
    let mut total = 1u64;
    let mut power = 1u64;
    while len < 10 {
        power = power.saturating_mul(letters as u64);
        if total.saturating_add(power) > 5_000_000 {
            break;
        }
        total += power;
        len += 1;
    }
    len.max(1)
}

/// Turns the failure arrow of the shallowest state that has one into an arrow back to the
/// start state, so that some non-normal form becomes accepted.
pub fn corrupt(acceptor: &mut Acceptor) {
    let letters: Vec<Letter> = acceptor.alphabet().letters().collect();
    let target = (0..acceptor.num_states())
        .flat_map(|s| letters.iter().map(move |&x| (s, x)))
        .filter(|&(s, x)| acceptor.step(s, x) == Target::Failure)
        .min_by_key(|&(s, _)| acceptor.state(s).depth);
    if let Some((s, x)) = target {
        acceptor.corrupt_transition(s, x, Target::State(acceptor.start()));
    }
}

/// Runs every check on the configured group and its standard subgraphs, stopping after the
/// first failure.
pub fn run_suite(ctx: &GroupContext, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let subgraphs = standard_subgraphs(ctx)?;
    let mut oracle = ctx.oracle(0)?;
    let diameter = subgraphs
        .iter()
        .map(|s| s.diameter(&oracle))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let gamma = opts.gamma.unwrap_or_else(|| ctx.default_gamma(diameter));
    let mut acceptor = ctx.acceptor(gamma)?;
    if opts.corrupt_acceptor {
        corrupt(&mut acceptor);
    }
    let word_length = opts
        .word_length
        .unwrap_or_else(|| default_word_length(acceptor.alphabet().len()));
    oracle.extend_to(word_length.max(30))?;

    let mut results = Vec::new();
    let push = |r: CheckResult, results: &mut Vec<CheckResult>| {
        let ok = r.passed;
        results.push(r);
        ok
    };
    if !push(check_language(&acceptor, &oracle, word_length)?, &mut results)
        || !push(check_partition(&acceptor, &oracle, 30)?, &mut results)
        || !push(check_state_growth(&acceptor, 40), &mut results)
    {
        return Ok(results);
    }
    for s in &subgraphs {
        if !push(check_morphism_definition(s, &oracle, 4)?, &mut results) {
            return Ok(results);
        }
    }
    let registry = MethodRegistry::standard();
    let growth = GrowthOptions {
        gamma: opts.gamma.or(opts.growth.gamma),
        ..opts.growth.clone()
    };
    for s in &subgraphs {
        let report = verify_main_theorem(ctx, s, &mut oracle, &growth, &registry)?;
        let gf = report
            .method("exact")
            .and_then(|m| m.closed_form.as_ref())
            .or_else(|| report.method("fit").and_then(|m| m.closed_form.as_ref()))
            .map(|g| g.to_string())
            .unwrap_or_default();
        let detail = match &report.verdict {
            crate::subgraph::Verdict::Pass => format!(
                "C(z) = {gf}, methods agree on c_0..c_{}",
                report.agreement_range.unwrap_or(0)
            ),
            other => format!("{other:?}"),
        };
        if !push(
            CheckResult::new(format!("growth of {}", s.description()), report.passed(), detail),
            &mut results,
        ) {
            return Ok(results);
        }
    }
    Ok(results)
}
