//! Growth computations behind a common trait, looked up by name at run time.

use serde::Serialize;

use super::count::count_table;
use super::graph::Subgraph;
use super::growth::{default_fit_window, growth_exact, growth_fit, FitOutcome, DEFAULT_VERIFY_WINDOW};
use crate::context::GroupContext;
use crate::error::{Error, Result};
use crate::oracle::BallTable;
use crate::series::{CoeffSeq, RationalGF};

#[derive(Clone, Debug)]
pub struct GrowthOptions {
    /// Acceptor γ for the exact method; the smallest admissible value when `None`.
    pub gamma: Option<usize>,
    /// Largest radius for fitting and for raw counts.
    pub max_n: usize,
    pub fit_window: Option<usize>,
    pub verify_window: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            gamma: None,
            max_n: 256,
            fit_window: None,
            verify_window: DEFAULT_VERIFY_WINDOW,
        }
    }
}

pub struct GrowthJob<'a> {
    pub ctx: &'a GroupContext,
    pub subgraph: &'a Subgraph,
    pub oracle: &'a mut BallTable,
    pub options: GrowthOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum MethodStatus {
    Ok,
    Inconclusive { reason: String },
    Failed { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodResult {
    pub method: String,
    pub status: MethodStatus,
    pub closed_form: Option<RationalGF>,
    pub coefficients: CoeffSeq,
    pub details: serde_json::Value,
}

pub trait GrowthMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, job: &mut GrowthJob<'_>) -> Result<MethodResult>;
}

struct ExactMethod;
struct FitMethod;
struct OracleMethod;

impl GrowthMethod for ExactMethod {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn summary(&self) -> &'static str {
        "acceptor tails plus brute-force head"
    }

    fn run(&self, job: &mut GrowthJob<'_>) -> Result<MethodResult> {
        let r = growth_exact(
            job.ctx,
            job.subgraph,
            job.oracle,
            job.options.gamma,
            job.options.verify_window,
        )?;
        Ok(MethodResult {
            method: self.name().into(),
            status: MethodStatus::Ok,
            closed_form: Some(r.gf.clone()),
            coefficients: r.coefficients.clone(),
            details: serde_json::json!({
                "gamma": r.gamma,
                "gamma_threshold": r.gamma_threshold,
                "gamma_in_regime": r.gamma_in_regime,
                "brute_force_radius": r.brute_force_radius,
                "window": r.window,
                "states": r.states,
                "looped_states": r.looped_states,
                "delta_histogram": r.delta_histogram,
            }),
        })
    }
}

impl GrowthMethod for FitMethod {
    fn name(&self) -> &'static str {
        "fit"
    }

    fn summary(&self) -> &'static str {
        "numerator over (1 - z)^rank fitted to counts"
    }

    fn run(&self, job: &mut GrowthJob<'_>) -> Result<MethodResult> {
        let rank = job.ctx.rank();
        let window = job.options.fit_window.unwrap_or(default_fit_window(rank));
        let fit = growth_fit(rank, job.subgraph, job.oracle, window, job.options.max_n)?;
        let (status, details) = match &fit {
            FitOutcome::Fitted { onset, radius, .. } => (
                MethodStatus::Ok,
                serde_json::json!({ "window": window, "onset": onset, "radius": radius }),
            ),
            FitOutcome::Inconclusive { radius, reason, .. } => (
                MethodStatus::Inconclusive {
                    reason: reason.clone(),
                },
                serde_json::json!({ "window": window, "radius": radius }),
            ),
        };
        Ok(MethodResult {
            method: self.name().into(),
            status,
            closed_form: fit.gf().cloned(),
            coefficients: fit.coefficients().clone(),
            details,
        })
    }
}

impl GrowthMethod for OracleMethod {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn summary(&self) -> &'static str {
        "raw morphism counts, no closed form"
    }

    fn run(&self, job: &mut GrowthJob<'_>) -> Result<MethodResult> {
        let want = job.options.max_n;
        let status = match job.oracle.extend_to(want) {
            Ok(()) => MethodStatus::Ok,
            Err(e) if e.is_resource_error() => MethodStatus::Inconclusive {
                reason: e.to_string(),
            },
            Err(e) => return Err(e),
        };
        let radius = job.oracle.radius().min(want);
        let counts = count_table(job.subgraph, radius, job.oracle, None)?;
        Ok(MethodResult {
            method: self.name().into(),
            status,
            closed_form: None,
            coefficients: counts.c_series(),
            details: serde_json::json!({ "radius": radius, "b": counts.b }),
        })
    }
}

pub struct MethodRegistry {
    methods: Vec<Box<dyn GrowthMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        MethodRegistry {
            methods: Vec::new(),
        }
    }

    /// `exact`, `fit` and `oracle`.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ExactMethod));
        r.register(Box::new(FitMethod));
        r.register(Box::new(OracleMethod));
        r
    }

    /// Replaces any method already registered under the same name.
    pub fn register(&mut self, method: Box<dyn GrowthMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn GrowthMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownMethod(name.into()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    /// Resolves `all` to every registered method.
    pub fn resolve(&self, selector: &str) -> Result<Vec<&dyn GrowthMethod>> {
        if selector == "all" {
            return Ok(self.methods.iter().map(|m| m.as_ref()).collect());
        }
        selector
            .split(',')
            .map(|name| self.get(name.trim()))
            .collect()
    }

    /// Runs a method; internal-consistency failures become a failed result instead of an error.
    pub fn run(&self, method: &dyn GrowthMethod, job: &mut GrowthJob<'_>) -> Result<MethodResult> {
        match method.run(job) {
            Ok(r) => Ok(r),
            Err(Error::Inconsistent(reason)) => Ok(MethodResult {
                method: method.name().into(),
                status: MethodStatus::Failed { reason },
                closed_form: None,
                coefficients: CoeffSeq::default(),
                details: serde_json::Value::Null,
            }),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_name() {
        let r = MethodRegistry::standard();
        assert_eq!(r.names(), ["exact", "fit", "oracle"]);
        assert_eq!(r.get("fit").unwrap().name(), "fit");
        assert!(matches!(r.get("guess"), Err(Error::UnknownMethod(_))));
        assert_eq!(r.resolve("all").unwrap().len(), 3);
        assert_eq!(r.resolve("oracle,exact").unwrap()[1].name(), "exact");
    }

    #[test]
    fn oracle_method_lists_coefficients_only() {
        let ctx = GroupContext::parse("gens a\ninv a~A").unwrap();
        let s = Subgraph::vertex(ctx.structure());
        let mut oracle = ctx.oracle(0).unwrap();
        let mut job = GrowthJob {
            ctx: &ctx,
            subgraph: &s,
            oracle: &mut oracle,
            options: GrowthOptions {
                max_n: 3,
                ..GrowthOptions::default()
            },
        };
        let r = MethodRegistry::standard();
        let res = r.run(r.get("oracle").unwrap(), &mut job).unwrap();
        assert!(res.closed_form.is_none());
        assert_eq!(res.coefficients, CoeffSeq::from_u64(&[1, 2, 2, 2]));
    }
}
