use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ldcalc::cli::{run_file, Command, Overrides};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Typecheck,
    CheckProof,
    CompileProof,
    Normalize,
    DecideEq,
    ModelCheck,
    Interpret,
    EvalEq,
    IsModel,
    Consequence,
    KripkeForce,
    KripkeValid,
    KripkeToLd,
    SyncatCompose,
    HomSearch,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Typecheck => Command::Typecheck,
            Cmd::CheckProof => Command::CheckProof,
            Cmd::CompileProof => Command::CompileProof,
            Cmd::Normalize => Command::Normalize,
            Cmd::DecideEq => Command::DecideEq,
            Cmd::ModelCheck => Command::ModelCheck,
            Cmd::Interpret => Command::Interpret,
            Cmd::EvalEq => Command::EvalEq,
            Cmd::IsModel => Command::IsModel,
            Cmd::Consequence => Command::Consequence,
            Cmd::KripkeForce => Command::KripkeForce,
            Cmd::KripkeValid => Command::KripkeValid,
            Cmd::KripkeToLd => Command::KripkeToLd,
            Cmd::SyncatCompose => Command::SyncatCompose,
            Cmd::HomSearch => Command::HomSearch,
        }
    }
}

/// Typed lambda calculus, natural deduction and their categorical models.
///
/// Exit codes: 0 pass, 1 fail, 2 negative only up to a bound, 3 bad input.
#[derive(Parser, Debug)]
#[command(name = "ldcalc", version)]
struct Args {
    command: Cmd,
    /// Workspace file.
    file: String,
    /// Axiom-application depth for decide-eq.
    #[arg(long)]
    depth: Option<usize>,
    /// Search depth for hom-search.
    #[arg(long)]
    search_depth: Option<usize>,
    /// Rewrite step budget.
    #[arg(long)]
    budget: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let o = Overrides { depth: args.depth, search_depth: args.search_depth, budget: args.budget };
    // `hom-search --depth N` reads naturally, so --depth doubles as the search depth there.
    let o = match args.command {
        Cmd::HomSearch => Overrides { search_depth: o.search_depth.or(o.depth), ..o },
        _ => o,
    };
    match run_file(args.command.into(), &args.file, o) {
        Ok(report) => {
            print!("{report}");
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
