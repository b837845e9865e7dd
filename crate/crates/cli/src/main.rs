mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrpgc::bench::FoldVariant;
use lrpgc::check::ContextFamily;
use lrpgc::reduce::RuleName;
use lrpgc::syntax::Path;

/// Evaluator, transformation engine and space checker for a call-by-need
/// calculus with garbage collection.
#[derive(Parser, Debug)]
#[command(name = "lrpgc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct EvalOpts {
    /// Step budget; evaluation stops with status FuelExhausted once it is spent.
    #[arg(long, env = "LRPGC_FUEL", default_value_t = lrpgc::bench::DEFAULT_FUEL)]
    pub fuel: u64,
    /// Count each closed Peano numeral as size 1.
    #[arg(long)]
    pub peano_unit: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate to WHNF and print the summary line.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        opts: EvalOpts,
        /// Also print the final expression.
        #[arg(long)]
        show: bool,
    },
    /// Print a header and the summary line.
    Measure {
        file: PathBuf,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Print one line per step, then the summary line.
    Trace {
        file: PathBuf,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// List rule instances, for one rule or for all of them.
    Redexes {
        file: PathBuf,
        #[arg(long)]
        rule: Option<RuleName>,
    },
    /// Apply a transformation and print the resulting program.
    Transform(TransformArgs),
    /// Check space behavior of transformations in families of contexts.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Run the experiment programs.
    Bench {
        #[command(subcommand)]
        what: BenchCommand,
    },
    /// Print the translation into machine expressions.
    Psi { file: PathBuf },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("where").required(true).args(["pos", "all"]))]
pub struct TransformArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub rule: RuleName,
    /// Position of the redex, as dot-separated child indices.
    #[arg(long)]
    pub pos: Option<Path>,
    /// Which instance at the position, when several match.
    #[arg(long, default_value_t = 0, requires = "pos")]
    pub nth: usize,
    /// Apply at every instance, one result per line.
    #[arg(long)]
    pub all: bool,
    /// Permit rules that rely on typing.
    #[arg(long)]
    pub assume_typed: bool,
    /// Variable to insert for seqInsert.
    #[arg(long)]
    pub var: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ContextOpts {
    /// Context families, by name or letter (a, b, c).
    #[arg(long = "family", value_delimiter = ',', default_values_t = [ContextFamily::Reduction, ContextFamily::ListDriver])]
    pub families: Vec<ContextFamily>,
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    /// Sizes for parameterized families.
    #[arg(long, value_delimiter = ',', default_values_t = [5u64, 10, 20])]
    pub ns: Vec<u64>,
    #[command(flatten)]
    pub eval: EvalOpts,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Compare a program with its transformed version, or with a second file.
    Pair {
        file: PathBuf,
        #[arg(long, conflicts_with = "against", requires = "pos")]
        rule: Option<RuleName>,
        #[arg(long)]
        pos: Option<Path>,
        #[arg(long, default_value_t = 0)]
        nth: usize,
        #[arg(long, required_unless_present = "rule")]
        against: Option<PathBuf>,
        #[arg(long)]
        assume_typed: bool,
        #[command(flatten)]
        ctx: ContextOpts,
    },
    /// One verdict per row of the improvement and safety table.
    Table {
        #[command(flatten)]
        ctx: ContextOpts,
    },
    /// The copy bound on a seeded sample of copy instances.
    CpBound {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, env = "LRPGC_FUEL", default_value_t = lrpgc::bench::DEFAULT_FUEL)]
        fuel: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InlineChoice {
    Plain,
    Inlined,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendCtx {
    Last,
    SeqDominated,
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// rln and spmax of the fold programs.
    Fold {
        #[arg(long, value_delimiter = ',', default_values_t = FoldVariant::ALL)]
        variant: Vec<FoldVariant>,
        #[arg(long, value_delimiter = ',', default_values_t = (1..=10).map(|i| 100 * i))]
        k: Vec<u64>,
        #[arg(long, value_enum, default_value_t = InlineChoice::Both)]
        inline: InlineChoice,
        #[arg(long, env = "LRPGC_FUEL", default_value_t = lrpgc::bench::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// spmax before and after sharing a list.
    Cse {
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 20, 30])]
        n: Vec<u64>,
        #[arg(long, env = "LRPGC_FUEL", default_value_t = lrpgc::bench::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// spmax difference of the two append nestings.
    Append {
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 5, 10])]
        n: Vec<u64>,
        #[arg(long = "context", value_enum, value_delimiter = ',', default_values_t = [AppendCtx::Last, AppendCtx::SeqDominated])]
        contexts: Vec<AppendCtx>,
        #[arg(long, env = "LRPGC_FUEL", default_value_t = lrpgc::bench::DEFAULT_FUEL)]
        fuel: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version go to stdout; every other parse failure is a user error
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut out = String::new();
    let result = run::run(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("lrpgc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
