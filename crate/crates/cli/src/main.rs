mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_CODES: &str = "\
Exit codes:
  0  success (optimal or infeasible)
  1  other failure
  2  parse or usage error
  3  objective is not concave
  4  not a vertex cover, or kappa out of range
  5  feasible region is unbounded
  6  budget exceeded
  7  verification mismatch";

#[derive(Parser)]
#[command(name = "iqp", version, about = "Exact solver for integer quadratic programs", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Batch,
    Sequential,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HullMode {
    Superset,
    Brute,
    Concave,
}

#[derive(Args, Clone, Debug)]
pub struct Budget {
    /// Distinct subproblems allowed before giving up.
    #[arg(long, default_value_t = iqp_core::solver::DEFAULT_MAX_NODES)]
    max_nodes: u64,
    /// Children allowed at a single subproblem.
    #[arg(long, default_value_t = iqp_core::solver::DEFAULT_MAX_CHILDREN)]
    max_children: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Disable the lattice filter on generated children.
    #[arg(long)]
    no_parity_filter: bool,
    /// Points the brute-force oracle may enumerate.
    #[arg(long, default_value_t = iqp_core::oracle::DEFAULT_BOX_BUDGET)]
    oracle_budget: u64,
}

#[derive(Args, Clone, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Entries of Q, c and the random rows lie in [-L, L].
    #[arg(long = "L", default_value_t = 3)]
    l: i64,
    /// Random rows beyond the box.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// The box is [-box, box]^n.
    #[arg(long = "box", default_value_t = 3)]
    box_width: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print a report.
    Solve {
        path: String,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Batch)]
        algorithm: AlgorithmArg,
        #[command(flatten)]
        budget: Budget,
        /// Include wall time in the report, which makes it nondeterministic.
        #[arg(long)]
        time: bool,
    },
    /// Cross-check both solvers and the oracle on instance files or
    /// directories of them, and on generated instances.
    Verify {
        paths: Vec<String>,
        /// Generated instances to check, with seeds starting at --seed.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print a reproducible random instance.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Write to this file instead of standard output.
        #[arg(long, short)]
        output: Option<String>,
    },
    /// Integer hull vertices, or concave minimization over a polytope.
    Hull {
        path: String,
        #[arg(long, value_enum, default_value_t = HullMode::Superset)]
        mode: HullMode,
        /// Cells the superset search may visit.
        #[arg(long, default_value_t = iqp_core::hull::DEFAULT_MAX_CELLS)]
        max_cells: u64,
        #[arg(long, default_value_t = iqp_core::oracle::DEFAULT_BOX_BUDGET)]
        oracle_budget: u64,
    },
    /// Densest k-subgraph through its vertex-cover reduction.
    Reduce {
        /// Graph file: header "p <n> <m>" and one "u v" line per edge.
        path: String,
        /// Comma-separated vertex cover; a minimum cover is used if omitted.
        #[arg(long, value_delimiter = ',')]
        cover: Option<Vec<usize>>,
        #[arg(long)]
        kappa: usize,
        /// Also write the reduced instance to this file.
        #[arg(long)]
        emit: Option<String>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Time both solvers on generated instances.
    Bench {
        /// Number of instances, with seeds starting at --seed.
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        budget: Budget,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Solve {
            path,
            algorithm,
            budget,
            time,
        } => commands::solve(&path, algorithm, &budget, time),
        Command::Verify {
            paths,
            trials,
            gen,
            budget,
        } => commands::verify(&paths, trials, &gen, &budget),
        Command::Gen { gen, output } => commands::gen(&gen, output.as_deref()),
        Command::Hull {
            path,
            mode,
            max_cells,
            oracle_budget,
        } => commands::hull(&path, mode, max_cells, oracle_budget),
        Command::Reduce {
            path,
            cover,
            kappa,
            emit,
            budget,
        } => commands::reduce(&path, cover, kappa, emit.as_deref(), &budget),
        Command::Bench { count, gen, budget } => commands::bench(count, &gen, &budget),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
