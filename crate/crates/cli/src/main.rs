//! `shapql`: Shapley values, minimal supports, consistency and probabilistic query
//! evaluation for `.kbq` knowledge bases, plus the reduction pipelines of the hardness lab.
//!
//! Every command prints one JSON record per line (or a table with `--table`). Exit codes:
//! 0 success, 2 bad input, 3 undecided entailment, 4 size limit.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};


#[derive(Debug, Parser)]
#[command(name = "shapql", version, about = "Shapley values for ontology-mediated query entailment")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SHAPQL_THREADS")]
    threads: Option<usize>,
    /// Print a human-readable table instead of JSON lines.
    #[arg(long, global = true)]
    table: bool,
    /// Include wall-clock timing in the output.
    #[arg(long, global = true)]
    timing: bool,
    /// Chase depth bound; entailments beyond it are reported as undecided (exit 3).
    #[arg(long, global = true)]
    chase_depth: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shapley values of the endogenous players.
    Shapley(ShapleyArgs),
    /// Minimal supports, in canonical order.
    Supports(SupportsArgs),
    /// Probability that the query holds over a tuple-independent ABox.
    Pqe(PqeArgs),
    /// Consistency of the whole KB.
    Consistency(KbArgs),
    /// Reduction pipelines.
    #[command(subcommand)]
    Lab(LabCommand),
}

#[derive(Debug, Args)]
struct KbArgs {
    /// Knowledge base in `.kbq` format.
    #[arg(long)]
    kb: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Permutation,
    Supports,
    Sample,
    ClosedForm,
}

#[derive(Debug, Args)]
struct ShapleyArgs {
    /// Knowledge base in `.kbq` format.
    #[arg(long)]
    kb: PathBuf,
    /// Query file: `q :- ...` lines, `reach(r, s, t).` or `axiom C sub D.`
    #[arg(long)]
    query: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    /// Restrict output to one player, written as in the KB (e.g. `r(a, b)` or `A sub B`).
    #[arg(long)]
    player: Option<String>,
    /// Additive error for `--method sample`, as `p/q`.
    #[arg(long, default_value = "1/20")]
    eps: String,
    /// Failure probability for `--method sample`, as `p/q`.
    #[arg(long, default_value = "1/20")]
    delta: String,
    /// Sampler seed; runs with equal seeds are identical.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative instead of additive error, with the exact-zero relevance pre-check.
    #[arg(long)]
    multiplicative: bool,
    /// Also print each value as a decimal.
    #[arg(long)]
    decimal: bool,
}

#[derive(Debug, Args)]
struct SupportsArgs {
    /// Knowledge base in `.kbq` format.
    #[arg(long)]
    kb: PathBuf,
    /// Query file.
    #[arg(long)]
    query: PathBuf,
    /// Largest support size to enumerate.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Half,
    HalfOne,
    SingleProper,
    Any,
}

#[derive(Debug, Args)]
struct PqeArgs {
    /// `.kbq` file; facts carry `@ p/q` probabilities (default 1).
    #[arg(long)]
    kb: PathBuf,
    /// Query file.
    #[arg(long)]
    query: PathBuf,
    /// Allowed probability values; a violating input exits with code 2.
    #[arg(long, value_enum, default_value = "any")]
    regime: RegimeArg,
    /// Also evaluate the bottom-free transformation and report its decomposition.
    #[arg(long)]
    qstar: bool,
    #[arg(long)]
    decimal: bool,
}

#[derive(Debug, Subcommand)]
enum LabCommand {
    /// Count s-t connecting edge subsets via Shapley values and by brute force.
    StCount {
        /// Graph file: `s <v>` and `t <v>` header lines, then `v w` edges.
        #[arg(long)]
        graph: PathBuf,
    },
    /// Count independent sets of a bipartite graph via Shapley values and by brute force.
    IsCount(FixtureArgs),
    /// Check the coalition bijection of the bipartite encoding.
    VerifyBijection(FixtureArgs),
    /// Per-edge values of the five reachability encodings.
    GameIso {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Debug, Args)]
struct FixtureArgs {
    /// Path fixture: `path a0 ... ak.`, `q :- ...` and `.kbq` blocks.
    #[arg(long)]
    fixture: PathBuf,
    /// Bipartite graph: `X: ...` and `Y: ...` lines, then `x y` edges.
    #[arg(long)]
    graph: PathBuf,
    /// Interface index χ for (a_χ, a_χ+1); default: the first unsplittable one.
    #[arg(long)]
    interface: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(records) => {
            for rec in records {
                if cli.table {
                    print!("{}", output::render_table(&rec));
                } else {
                    println!("{}", output::render_json(&rec));
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
