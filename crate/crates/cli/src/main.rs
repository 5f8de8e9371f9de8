use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cayley_growth::acceptor::{export_dot, export_json};
use cayley_growth::context::GroupContext;
use cayley_growth::subgraph::{run_growth, GrowthOptions, MethodRegistry, Subgraph, Verdict};
use cayley_growth::verify::{run_suite, SuiteOptions};
use cayley_growth::Error;

#[derive(Parser)]
#[command(name = "cayley-growth", version, about = "Word acceptors and subgraph growth functions of abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, torsion, μ, κ and the default γ of a presentation.
    Structure {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export the γ-canonical shortlex word acceptor.
    Acceptor {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        gamma: Option<usize>,
        /// Draw the failure state and the arrows into it.
        #[arg(long)]
        failure: bool,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Growth function C(S, z) of a subgraph.
    Growth {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        subgraph: SubgraphArg,
        /// exact, fit, oracle, a comma-separated list, or all.
        #[arg(long, default_value = "fit")]
        method: String,
        #[arg(long)]
        gamma: Option<usize>,
        /// Largest radius for fitting and raw counts.
        #[arg(long, default_value_t = 256)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the invariant suite on a group and its standard subgraphs.
    Verify {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long, default_value_t = 256)]
        max_n: usize,
        /// Longest word in the exhaustive language check.
        #[arg(long)]
        word_length: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, hide = true)]
        corrupt_acceptor: bool,
    },
}

#[derive(Args)]
struct GroupArg {
    /// Presentation file (text or JSON).
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct SubgraphArg {
    /// Subgraph file: `vertex`, `path: a,b`, or JSON.
    #[arg(long, conflicts_with = "path")]
    subgraph: Option<String>,
    /// Path shorthand, e.g. `a,b,c`.
    #[arg(long)]
    path: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
    Dot,
}

fn load_group(arg: &GroupArg) -> Result<GroupContext, Error> {
    GroupContext::parse(&fs::read_to_string(&arg.group)?)
}

fn load_subgraph(arg: &SubgraphArg, ctx: &GroupContext) -> Result<Subgraph, Error> {
    let text = match (&arg.subgraph, &arg.path) {
        (Some(file), _) => fs::read_to_string(file)?,
        (None, Some(p)) => format!("path: {p}"),
        (None, None) => "vertex".into(),
    };
    Subgraph::parse(&text, ctx.structure())
}

fn unsupported(format: Format, command: &str) -> Error {
    let name = match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Latex => "latex",
        Format::Dot => "dot",
    };
    Error::InvalidPresentation(format!("format `{name}` is not available for `{command}`"))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Structure { group, format } => {
            let ctx = load_group(&group)?;
            let s = ctx.summary();
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&s)?),
                Format::Text => {
                    let torsion = if s.torsion.is_empty() {
                        "none".to_string()
                    } else {
                        format!("{:?}", s.torsion)
                    };
                    println!("rank {}, torsion {torsion}", s.rank);
                    println!("generators {}", s.generators);
                    println!("mu {}", s.mu);
                    println!("kappa {}", s.kappa);
                    println!("default gamma {}", s.default_gamma);
                    println!("minimal relations {}", s.minimal_relations.len());
                    for (l, r) in &s.minimal_relations {
                        println!("  {l} = {}", if r.is_empty() { "e" } else { r });
                    }
                }
                f => return Err(unsupported(f, "structure")),
            }
            Ok(0)
        }
        Command::Acceptor {
            group,
            gamma,
            failure,
            format,
        } => {
            let ctx = load_group(&group)?;
            let acc = ctx.acceptor(gamma.unwrap_or_else(|| ctx.default_gamma(0)))?;
            match format {
                Format::Dot => print!("{}", export_dot(&acc, failure)),
                Format::Json => println!("{}", export_json(&acc)),
                f => return Err(unsupported(f, "acceptor")),
            }
            Ok(0)
        }
        Command::Growth {
            group,
            subgraph,
            method,
            gamma,
            max_n,
            format,
        } => {
            let ctx = load_group(&group)?;
            let s = load_subgraph(&subgraph, &ctx)?;
            let options = GrowthOptions {
                gamma,
                max_n,
                ..GrowthOptions::default()
            };
            let mut oracle = ctx.oracle(0)?;
            let report = run_growth(&ctx, &s, &mut oracle, &options, &MethodRegistry::standard(), &method)?;
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
                Format::Latex => print!("{}", report.to_latex()),
                f => return Err(unsupported(f, "growth")),
            }
            Ok(match report.verdict {
                Verdict::Pass => 0,
                Verdict::Fail { .. } => 1,
                Verdict::Inconclusive { .. } => 3,
            })
        }
        Command::Verify {
            group,
            gamma,
            max_n,
            word_length,
            format,
            corrupt_acceptor,
        } => {
            let ctx = load_group(&group)?;
            let opts = SuiteOptions {
                gamma,
                word_length,
                growth: GrowthOptions {
                    max_n,
                    ..GrowthOptions::default()
                },
                corrupt_acceptor,
            };
            let results = run_suite(&ctx, &opts)?;
            let ok = results.iter().all(|r| r.passed);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&results)?),
                Format::Text => {
                    for r in &results {
                        let tag = if r.passed { "PASS" } else { "FAIL" };
                        println!("{tag} {}: {}", r.name, r.detail);
                    }
                    if let Some(r) = results.iter().find(|r| !r.passed) {
                        println!("verification failed: {}", r.name);
                    }
                }
                f => return Err(unsupported(f, "verify")),
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() {
                2
            } else if e.is_resource_error() {
                3
            } else {
                1
            })
        }
    }
}
