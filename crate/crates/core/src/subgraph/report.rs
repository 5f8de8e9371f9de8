use std::fmt::Write;

use serde::Serialize;

use super::graph::Subgraph;
use super::growth::check_shape;
use super::method::{GrowthJob, GrowthOptions, MethodRegistry, MethodResult, MethodStatus};
use crate::context::{GroupContext, StructureSummary};
use crate::error::Result;
use crate::oracle::BallTable;
use crate::series::CoeffSeq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail {
        reason: String,
        first_difference: Option<usize>,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub group: StructureSummary,
    pub subgraph: String,
    pub diameter: usize,
    pub methods: Vec<MethodResult>,
    /// Coefficients `c_0 ..= c_N` on which the methods were compared.
    pub agreement_range: Option<usize>,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn method(&self, name: &str) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.method == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let g = &self.group;
        let mut out = String::new();
        let torsion = if g.torsion.is_empty() {
            "none".to_string()
        } else {
            format!("{:?}", g.torsion)
        };
        let _ = writeln!(out, "group: rank {}, torsion {torsion}, mu {}, kappa {}", g.rank, g.mu, g.kappa);
        let _ = writeln!(out, "subgraph: {} (diameter {})", self.subgraph, self.diameter);
        for m in &self.methods {
            let _ = write!(out, "[{}] ", m.method);
            match &m.status {
                MethodStatus::Ok => {}
                MethodStatus::Inconclusive { reason } => {
                    let _ = write!(out, "inconclusive ({reason}) ");
                }
                MethodStatus::Failed { reason } => {
                    let _ = write!(out, "FAILED ({reason}) ");
                }
            }
            if let Some(gf) = &m.closed_form {
                let _ = write!(out, "C(z) = {gf}");
            }
            let _ = writeln!(out);
            if !m.coefficients.is_empty() {
                let _ = writeln!(out, "    coefficients {}", preview(&m.coefficients, 12));
            }
        }
        if let Some(n) = self.agreement_range {
            let _ = writeln!(out, "compared on c_0..c_{n}");
        }
        let _ = match &self.verdict {
            Verdict::Pass => writeln!(out, "verdict: pass"),
            Verdict::Fail {
                reason,
                first_difference,
            } => match first_difference {
                Some(i) => writeln!(out, "verdict: FAIL at c_{i}: {reason}"),
                None => writeln!(out, "verdict: FAIL: {reason}"),
            },
            Verdict::Inconclusive { reason } => writeln!(out, "verdict: inconclusive: {reason}"),
        };
        out
    }

    /// Closed forms only, one per line.
    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        for m in &self.methods {
            if let Some(gf) = &m.closed_form {
                let _ = writeln!(out, "% {}\nC(S, z) = {}", m.method, gf.to_latex());
            }
        }
        out
    }
}

fn preview(seq: &CoeffSeq, n: usize) -> String {
    if seq.len() <= n {
        return seq.to_string();
    }
    let head = seq.truncated(n - 1).to_string();
    format!("{}, ... ({} terms)", &head[..head.len() - 1], seq.len())
}

/// Runs the selected methods and cross-checks whatever they produced. Raw counts run last,
/// out to the reach of the other methods when there are any.
pub fn run_growth(
    ctx: &GroupContext,
    s: &Subgraph,
    oracle: &mut BallTable,
    options: &GrowthOptions,
    registry: &MethodRegistry,
    selector: &str,
) -> Result<GrowthReport> {
    let methods = registry.resolve(selector)?;
    let diameter = s.diameter(oracle)?;
    let (raw, closed): (Vec<_>, Vec<_>) = methods.into_iter().partition(|m| m.name() == "oracle");
    let mut results = Vec::new();
    for m in closed {
        let mut job = GrowthJob {
            ctx,
            subgraph: s,
            oracle,
            options: options.clone(),
        };
        results.push(registry.run(m, &mut job)?);
    }
    let max_n = if results.is_empty() {
        options.max_n
    } else {
        reach(&results)
    };
    for m in raw {
        let mut job = GrowthJob {
            ctx,
            subgraph: s,
            oracle,
            options: GrowthOptions {
                max_n,
                ..options.clone()
            },
        };
        results.push(registry.run(m, &mut job)?);
    }
    Ok(assemble(ctx, s, diameter, results))
}

/// Radius covering every computed coefficient and three times the fitted onset.
fn reach(results: &[MethodResult]) -> usize {
    let mut n = results
        .iter()
        .map(|r| r.coefficients.len())
        .max()
        .unwrap_or(1)
        .saturating_sub(1);
    for r in results {
        if let Some(onset) = r.details.get("onset").and_then(|v| v.as_u64()) {
            n = n.max(3 * onset as usize);
        }
    }
    n
}

/// Runs `exact`, `fit` and raw counts, and checks every closed form against the counts
/// and the expected shape.
pub fn verify_main_theorem(
    ctx: &GroupContext,
    s: &Subgraph,
    oracle: &mut BallTable,
    options: &GrowthOptions,
    registry: &MethodRegistry,
) -> Result<GrowthReport> {
    run_growth(ctx, s, oracle, options, registry, "exact,fit,oracle")
}

fn assemble(ctx: &GroupContext, s: &Subgraph, diameter: usize, methods: Vec<MethodResult>) -> GrowthReport {
    let (agreement_range, verdict) = judge(ctx.rank(), &methods);
    GrowthReport {
        group: ctx.summary(),
        subgraph: s.description().to_string(),
        diameter,
        methods,
        agreement_range,
        verdict,
    }
}

fn judge(rank: usize, methods: &[MethodResult]) -> (Option<usize>, Verdict) {
    for m in methods {
        if let MethodStatus::Failed { reason } = &m.status {
            return (
                None,
                Verdict::Fail {
                    reason: format!("{}: {reason}", m.method),
                    first_difference: None,
                },
            );
        }
    }
    for m in methods {
        if let Some(gf) = &m.closed_form {
            if let Err(e) = check_shape(gf, rank) {
                return (
                    None,
                    Verdict::Fail {
                        reason: format!("{}: {e}", m.method),
                        first_difference: None,
                    },
                );
            }
        }
    }
    // Reference: the longest raw coefficient list; closed forms are expanded to its length.
    let Some(reference) = methods.iter().map(|m| &m.coefficients).max_by_key(|c| c.len()) else {
        return (None, Verdict::Inconclusive { reason: "no method ran".into() });
    };
    if reference.is_empty() {
        return (None, Verdict::Inconclusive { reason: "no coefficients".into() });
    }
    let n = reference.len() - 1;
    for m in methods {
        let seqs = [
            Some(m.coefficients.clone()),
            m.closed_form.as_ref().map(|gf| gf.expand(n)),
        ];
        for seq in seqs.into_iter().flatten() {
            if let Some(i) = seq.first_difference(reference) {
                return (
                    Some(n),
                    Verdict::Fail {
                        reason: format!(
                            "{} gives {} where counts give {}",
                            m.method, seq.values[i], reference.values[i]
                        ),
                        first_difference: Some(i),
                    },
                );
            }
        }
    }
    if let Some(m) = methods.iter().find(|m| matches!(m.status, MethodStatus::Inconclusive { .. })) {
        let MethodStatus::Inconclusive { reason } = &m.status else { unreachable!() };
        return (
            Some(n),
            Verdict::Inconclusive {
                reason: format!("{}: {reason}", m.method),
            },
        );
    }
    (Some(n), Verdict::Pass)
}
