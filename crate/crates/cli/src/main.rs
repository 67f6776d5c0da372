use std::path::PathBuf;
use std::process::ExitCode;

use bfoml_core::gen::{GenFragment, Weights};
use bfoml_core::Semantics;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod fuzz;

/// Satisfiability, model checking and translation for bundled first-order
/// modal logic.
#[derive(Parser)]
#[command(name = "bfoml", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability with a tableau (exit 10 SAT, 20 UNSAT, 1 error).
    Sat(SatArgs),
    /// Evaluate a formula in a model (exit 0 true, 3 false, 1 error).
    Check(CheckArgs),
    /// Print the negation normal form.
    Nnf(FormulaInput),
    /// Print the clean equivalent.
    Clean(FormulaInput),
    /// Print measures and the fragment of a formula.
    Info(FormulaInput),
    /// Translate a prenex FO(R) sentence into a modal formula.
    Translate(TranslateArgs),
    /// Search for a small model by bounded enumeration (exit 10 found, 20 none, 1 error).
    Oracle(OracleArgs),
    /// Cross-check the decision procedures on random formulas (exit 0 iff no failures).
    Fuzz(FuzzArgs),
}

#[derive(Args)]
pub struct FormulaInput {
    /// Formula text.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SemanticsArg {
    Increasing,
    Constant,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Increasing => Semantics::Increasing,
            SemanticsArg::Constant => Semantics::Constant,
        }
    }
}

#[derive(Args)]
pub struct SatArgs {
    #[command(flatten)]
    pub input: FormulaInput,
    #[arg(long, value_enum, default_value = "increasing")]
    pub semantics: SemanticsArg,
    /// Write the model of a SAT formula as JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Write the explored tableau as text (`-` for standard error).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write a JSON run report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Node budget of the tableau.
    #[arg(long, env = "BFOML_BUDGET")]
    pub budget: Option<usize>,
}

#[derive(Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: FormulaInput,
    /// Model JSON file.
    #[arg(long)]
    pub model: PathBuf,
    /// Evaluation world; defaults to the first world of the model.
    #[arg(long)]
    pub world: Option<String>,
    /// Assign an element to a free variable, as `x=e`. Repeatable.
    #[arg(long = "assign", value_name = "VAR=ELEMENT")]
    pub assign: Vec<String>,
}

#[derive(Args)]
pub struct TranslateArgs {
    /// Sentence text.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub sentence: Option<String>,
    /// Read the sentence from a file instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// FO model JSON satisfying the sentence; prints the witness Kripke model.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Write the witness Kripke model here instead of standard output.
    #[arg(long, requires = "witness")]
    pub witness_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: FormulaInput,
    #[arg(long, value_enum, default_value = "increasing")]
    pub semantics: SemanticsArg,
    #[arg(long, default_value_t = 4)]
    pub max_worlds: usize,
    #[arg(long, default_value_t = 3)]
    pub max_domain: usize,
    /// Write the model found as JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Bound on clauses generated per model size.
    #[arg(long, env = "BFOML_BUDGET")]
    pub budget: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FragmentArg {
    /// `E x []` and `A x <>` only.
    Eb,
    /// All four bundles.
    Full,
}

impl From<FragmentArg> for GenFragment {
    fn from(f: FragmentArg) -> Self {
        match f {
            FragmentArg::Eb => GenFragment::ExistsBox,
            FragmentArg::Full => GenFragment::Full,
        }
    }
}

#[derive(Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,
    #[arg(long, value_enum, default_value = "full")]
    pub fragment: FragmentArg,
    /// Grammar weights as `literal,and,or,bundle`.
    #[arg(long, value_parser = parse_weights)]
    pub weights: Option<Weights>,
    #[arg(long, default_value_t = 4)]
    pub max_worlds: usize,
    #[arg(long, default_value_t = 3)]
    pub max_domain: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Node budget of each tableau run.
    #[arg(long, env = "BFOML_BUDGET")]
    pub budget: Option<usize>,
}

fn parse_weights(text: &str) -> Result<Weights, String> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [literal, and, or, bundle] if literal > 0 => Ok(Weights {
            literal,
            and,
            or,
            bundle,
        }),
        [_, _, _, _] => Err("the literal weight must be positive".into()),
        _ => Err("expected four weights: literal,and,or,bundle".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sat(args) => commands::sat(args),
        Command::Check(args) => commands::check(args),
        Command::Nnf(input) => commands::nnf(input),
        Command::Clean(input) => commands::clean(input),
        Command::Info(input) => commands::info(input),
        Command::Translate(args) => commands::translate(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Fuzz(args) => fuzz::run(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
