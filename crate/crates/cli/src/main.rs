mod commands;
mod render;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use segrelat::{Budget, Partition};

#[derive(Parser, Debug)]
#[command(
    name = "segrelat",
    version,
    about = "Invariants of Segre powers of Boolean and subspace lattices"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Enumeration budget override (`N` or `tuples=N,elements=N,chains=N`);
    /// takes precedence over SEGRELAT_BUDGET.
    #[arg(long, global = true)]
    budget: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of w_n^(t) with t as rows and n as columns.
    Wtable {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        tmax: usize,
        #[arg(long, value_enum, default_value_t = WRouteArg::Recurrence)]
        route: WRouteArg,
    },
    /// W_n^(t)(q), or the rank-selected polynomial when a rank set is given.
    Wq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_parser = parse_rank_list)]
        rank_set: Option<RankList>,
        #[arg(long, value_enum, default_value_t = QRouteArg::Recurrence)]
        route: QRouteArg,
    },
    /// Characteristic of the top homology, or of a rank selection.
    Beta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::S)]
        basis: BasisArg,
        #[arg(long, value_parser = parse_rank_list)]
        rank_set: Option<RankList>,
        #[arg(long, value_enum, default_value_t = RankRouteArg::Recurrence)]
        route: RankRouteArg,
    },
    /// Image of a Schur function under Φ_t, flagging negative coefficients.
    Phi {
        #[arg(long)]
        schur: Partition,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = BasisArg::S)]
        basis: BasisArg,
    },
    /// Principal specialization compared with the matching Betti polynomial.
    Ps {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_parser = parse_rank_list)]
        rank_set: Option<RankList>,
    },
    /// Explicit poset constructions and checks.
    Poset {
        #[command(subcommand)]
        action: PosetAction,
    },
    /// Cross-check every pair of independent routes.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Small)]
        suite: Suite,
    },
}

#[derive(Subcommand, Debug)]
enum PosetAction {
    /// Print the poset in the exchange format.
    Build(PosetSource),
    /// Check the EL property on every interval.
    VerifyEl(PosetSource),
    /// Möbius number of the poset, an interval, or a rank selection.
    Mobius {
        #[command(flatten)]
        source: PosetSource,
        #[arg(long, value_parser = parse_rank_list)]
        rank_set: Option<RankList>,
        #[arg(long, requires = "upper")]
        lower: Option<String>,
        #[arg(long, requires = "lower")]
        upper: Option<String>,
    },
    /// Count maximal chains by label word and descent set.
    Census(PosetSource),
}

#[derive(Args, Debug, Clone)]
pub struct PosetSource {
    /// Named fixture.
    #[arg(long, group = "src")]
    fixture: Option<String>,
    /// Boolean lattice B_n.
    #[arg(long, group = "src")]
    boolean: Option<usize>,
    /// Subspace lattice of F_q^n (needs --q).
    #[arg(long, group = "src", requires = "q")]
    subspace: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    /// Poset file in the exchange format.
    #[arg(long, group = "src")]
    file: Option<PathBuf>,
    /// Take the t-fold Segre power of the source.
    #[arg(long, default_value_t = 1)]
    segre: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum WRouteArg {
    Recurrence,
    Brute,
    Dimension,
    Genfun,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum QRouteArg {
    Recurrence,
    Brute,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RankRouteArg {
    Syt,
    Recurrence,
    InclusionExclusion,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "S", alias = "s")]
    S,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Small,
    Full,
}

/// Rank set elements as typed; validated against `n` once it is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankList(pub Vec<usize>);

fn parse_rank_list(s: &str) -> Result<RankList, String> {
    let s = s.trim();
    if s == "none" {
        return Ok(RankList(vec![]));
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad rank `{x}`; use e.g. 1,3 or none"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RankList)
}

#[derive(Debug)]
pub enum CliError {
    Lib(segrelat::Error),
    Usage(String),
    Verification(String),
    Io(std::io::Error),
}

impl From<segrelat::Error> for CliError {
    fn from(e: segrelat::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(segrelat::Error::BudgetExceeded { .. }) => 2,
            CliError::Verification(_) => 3,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Text to emit, and whether the run should end with a verification failure.
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Outcome {
            text,
            failure: None,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let mut budget = Budget::from_env()?;
    if let Some(spec) = &cli.budget {
        budget = budget.with_overrides(spec)?;
    }
    let fmt = cli.format;
    match cli.command {
        Command::Wtable { nmax, tmax, route } => commands::wtable(nmax, tmax, route, fmt, &budget),
        Command::Wq {
            n,
            t,
            rank_set,
            route,
        } => commands::wq(n, t, rank_set, route, fmt, &budget),
        Command::Beta {
            n,
            t,
            basis,
            rank_set,
            route,
        } => commands::beta(n, t, basis, rank_set, route, fmt),
        Command::Phi { schur, t, basis } => commands::phi(&schur, t, basis, fmt),
        Command::Ps { n, t, rank_set } => commands::ps(n, t, rank_set, fmt, &budget),
        Command::Poset { action } => match action {
            PosetAction::Build(src) => commands::poset_build(&src, &budget),
            PosetAction::VerifyEl(src) => commands::poset_verify_el(&src, fmt, &budget),
            PosetAction::Mobius {
                source,
                rank_set,
                lower,
                upper,
            } => {
                let bounds = lower.zip(upper);
                commands::poset_mobius(&source, rank_set, bounds, fmt, &budget)
            }
            PosetAction::Census(src) => commands::poset_census(&src, fmt, &budget),
        },
        Command::Verify { suite } => verify::run(suite, fmt, &budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.output.clone();
    match run(cli) {
        Ok(outcome) => {
            let written = match &output {
                Some(path) => std::fs::write(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: i/o error: {e}");
                return ExitCode::from(1);
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("error: verification failed: {msg}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
