//! `groupgeom`: solve equation systems over finite groups and audit the
//! invariance of their solution sets.
//!
//! Exit codes: 0 completed, 1 input error, 2 internal consistency
//! violation, 3 budget exceeded. An oracle disagreement is a bug in the
//! engine, never a mathematical result, so `analyze` and `gcheck` refuse
//! to exit cleanly on one.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use groupgeom::radical::DEFAULT_EXTENSION_BUDGET;
use groupgeom::Error;

use output::Format;

pub(crate) const EXIT_OK: u8 = 0;
pub(crate) const EXIT_INPUT: u8 = 1;
pub(crate) const EXIT_INCONSISTENT: u8 = 2;
pub(crate) const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "groupgeom",
    version,
    about = "Equation solving and radical analysis over finite groups",
    arg_required_else_help = true
)]
struct Cli {
    /// Worker threads for the parallel sweeps; 0 keeps the library default.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    jobs: usize,

    /// Report format; `structured` is line-oriented key=value.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

/// Where the group comes from: a builder descriptor or a table file.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub(crate) struct GroupArgs {
    /// Builder descriptor: cyclic(k), dihedral(k), quaternion8,
    /// symmetric(k), direct_product(a, b), unitriangular(3, p).
    #[arg(long, value_name = "SPEC")]
    pub group: Option<String>,

    /// Multiplication-table file: `order N`, N rows of N indices,
    /// optional trailing `names` line.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct SystemArgs {
    /// Number of variables (a `--system` file carries its own).
    #[arg(long, default_value_t = 1, conflicts_with = "system", value_name = "N")]
    pub vars: usize,

    /// Equation `w` or `lhs = rhs`, e.g. `[x1,x2]` or `x1^2 = x2^3`;
    /// repeatable. No equations means the whole space.
    #[arg(long = "eq", value_name = "EQUATION")]
    pub eq: Vec<String>,

    /// Equation-system file: `vars N`, optional `coefficients`, then
    /// `eq <word>` or `eq <lhs> = <rhs>` lines.
    #[arg(long, value_name = "FILE", conflicts_with = "eq")]
    pub system: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct SolveArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Read `--eq` words in a coefficient context, with constants `g<i>`
    /// from the group. System files decide via their `coefficients` line.
    #[arg(long)]
    pub coefficients: bool,
}

#[derive(Args)]
pub(crate) struct ClosureArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Tuple arity.
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub vars: usize,
    /// Tuple of element indices, comma-separated, e.g. `2,5`; repeatable.
    #[arg(long = "point", value_name = "TUPLE", required = true)]
    pub point: Vec<String>,
}

#[derive(Args)]
pub(crate) struct DecomposeArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub sys: SystemArgs,
}

#[derive(Args)]
pub(crate) struct AnalyzeArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Image-length bound for the sampled endomorphism sweep.
    #[arg(long, default_value_t = 4, value_name = "LEN")]
    pub maxlen: usize,
    /// Extension-test budget for the exact oracle.
    #[arg(long, default_value_t = DEFAULT_EXTENSION_BUDGET, value_name = "N")]
    pub budget: u64,
}

#[derive(Args)]
pub(crate) struct IdentitiesArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Length bound for the swept words.
    #[arg(long, default_value_t = 4, value_name = "LEN")]
    pub maxlen: usize,
}

#[derive(Args)]
pub(crate) struct GcheckArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Accepted for symmetry; gcheck always reads equations with
    /// coefficients.
    #[arg(long)]
    pub coefficients: bool,
    /// Run the relative-freeness check over the direct power `G^k`.
    #[arg(long, default_value_t = 1, value_name = "K")]
    pub target_power: usize,
    /// Word-length bound for the sampled identities.
    #[arg(long, default_value_t = 4, value_name = "LEN")]
    pub maxlen: usize,
    /// Extension-test budget for the exact oracle.
    #[arg(long, default_value_t = DEFAULT_EXTENSION_BUDGET, value_name = "N")]
    pub budget: u64,
}

#[derive(Args)]
pub(crate) struct ScanArgs {
    /// Builder descriptor; repeatable, one per catalog entry.
    #[arg(long = "group", value_name = "SPEC")]
    pub group: Vec<String>,
    /// Number of variables for every catalog entry.
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub vars: usize,
    /// Random subsets to close per group, on top of all singletons.
    #[arg(long, default_value_t = 0, value_name = "N")]
    pub samples: usize,
    /// Seed for the random subsets; recorded in the report.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Extension-test budget for the exact oracle, per set.
    #[arg(long, default_value_t = DEFAULT_EXTENSION_BUDGET, value_name = "N")]
    pub budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a system and print its solution set.
    Solve(SolveArgs),
    /// Close a set of tuples and report whether it was already algebraic.
    Closure(ClosureArgs),
    /// Run the subgroup-decomposition criterion on a solution set.
    Decompose(DecomposeArgs),
    /// Cross-validate decomposition, both endomorphism oracles, and the
    /// characteristic check on one system.
    Analyze(AnalyzeArgs),
    /// Compare radical membership against common identities of the
    /// covering family, word by word.
    Identities(IdentitiesArgs),
    /// Coefficient-system checks: the verbal criterion over G and
    /// relative freeness of the coordinate group.
    Gcheck(GcheckArgs),
    /// Enumerate closed sets per catalog group and tabulate both oracles.
    Scan(ScanArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    if cli.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
        if let Err(err) = pool {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_INPUT);
        }
    }

    let result = match &cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Closure(args) => commands::closure(args),
        Command::Decompose(args) => commands::decompose(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Identities(args) => commands::identities(args),
        Command::Gcheck(args) => commands::gcheck(args),
        Command::Scan(args) => commands::scan(args),
    };

    match result {
        Ok(outcome) => {
            print!("{}", outcome.report.render(cli.format));
            ExitCode::from(outcome.exit)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Input problems exit 1, internal violations 2, blown budgets 3.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_INCONSISTENT,
        _ => EXIT_INPUT,
    }
}
