//! `btlab`: generate hard knapsack instances, verify them, play the
//! Solver/Adversary game, measure BT widths and print bound tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "btlab", version, about = "Backtracking lower bounds for simple knapsack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal gamma, growth base and log2 exponent of the width bound.
    Optimize {
        #[arg(long)]
        json: bool,
        /// Also check the base against the golden ratio.
        #[arg(long)]
        check: bool,
    },
    /// Check adversary parameters and print the derived quantities.
    Params(ParamArgs),
    /// Play the game, complete every designated subset and certify it.
    Generate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Output directory for instance files and `report.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Brute-force check that a selector is the unique subset summing to N.
    Verify {
        path: PathBuf,
        /// Comma-separated item indices; defaults to `provenance.designated`.
        #[arg(long)]
        designated: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Play the game and print the picks; optionally refute a capped solver.
    Game {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Refute `width_capped(B)` on the completed game.
        #[arg(long, value_name = "B")]
        refute: Option<usize>,
        /// Where to write the refutation instance.
        #[arg(long, requires = "refute")]
        out: Option<PathBuf>,
    },
    /// Build the computation tree of a reference algorithm on an instance.
    Width {
        path: PathBuf,
        /// greedy, full_backtrack or width_capped.
        #[arg(long, default_value = "full_backtrack")]
        algorithm: String,
        #[arg(long)]
        cap: Option<usize>,
        /// Item order: listed (file order), ascending or descending.
        #[arg(long, default_value = "listed")]
        order: String,
        #[arg(long, default_value_t = btlab::bt::DEFAULT_MAX_NODES)]
        max_nodes: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Bound table as CSV.
    Table {
        /// A `beta,gamma` pair; repeatable. Fractions like `1/2` are accepted.
        #[arg(long = "point", value_name = "BETA,GAMMA")]
        points: Vec<String>,
        /// Comma-separated sizes crossed with every point.
        #[arg(long = "n", value_name = "LIST")]
        sizes: Option<String>,
        /// Append the optimal point `(1 - gamma*, gamma*)`.
        #[arg(long)]
        optimal: bool,
    },
}

#[derive(Debug, Clone, Args)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "1/2")]
    beta: String,
    #[arg(long, default_value = "1/4")]
    gamma: String,
    /// Defaults to the midpoint of `(1/(1-beta), 1/gamma)`.
    #[arg(long)]
    alpha: Option<String>,
    /// Capacity, or `auto` for `10*n*3^n`.
    #[arg(long = "N", default_value = "auto")]
    capacity: String,
    /// Completion slack, or `auto` for `3^n`.
    #[arg(long = "U", default_value = "auto")]
    slack: String,
}

#[derive(Debug, Clone, Args)]
struct SolverArgs {
    /// smallest or random.
    #[arg(long, default_value = "smallest")]
    solver: String,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Args)]
struct BudgetArgs {
    /// Largest item count for exhaustive enumeration.
    #[arg(long, default_value_t = btlab::knapsack::DEFAULT_ENUMERATION_CAP)]
    enum_cap: usize,
    /// Largest sum set, in elements.
    #[arg(long, default_value_t = btlab::knapsack::DEFAULT_SUM_BUDGET)]
    sum_budget: u128,
    /// Largest total number of subsets enumerated by one run.
    #[arg(long, default_value_t = 1u128 << 34)]
    work_budget: u128,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_only = !e.use_stderr();
            let _ = e.print();
            return if usage_only { ExitCode::SUCCESS } else { ExitCode::from(commands::EXIT_INPUT) };
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
