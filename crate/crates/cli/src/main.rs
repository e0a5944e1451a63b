use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbifold::commands::{self, Output};
use orbifold::exit;
use orbifold::problem::Mode;
use orbifold::report::Format;
use orbifold_core::Strategy;

/// Exact PBW checker for quantum Drinfeld orbifold algebras.
#[derive(Parser)]
#[command(name = "orbifold", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the problem defines a PBW deformation.
    Check {
        file: PathBuf,
        /// Checker path(s) to run; defaults to the file's option, else both.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Like `check`, listing every violation.
    Report {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the normal form of an expression.
    Reduce {
        file: PathBuf,
        /// Expression, e.g. "v2*v1 + 1/2*t.g1".
        #[arg(short, long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summarize the group: elements, table, classes, q-compatibility.
    GroupInfo {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn read(path: &Path) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output {
        code: exit::INVALID,
        stdout: String::new(),
        stderr: format!("error: cannot read {}: {e}\n", path.display()),
    })
}

fn dispatch(cmd: Command) -> Result<Output, Output> {
    Ok(match cmd {
        Command::Check { file, mode, format } => {
            commands::check(&read(&file)?, mode, format, false)
        }
        Command::Report { file, mode, format } => {
            commands::check(&read(&file)?, mode, format, true)
        }
        Command::Reduce {
            file,
            expr,
            strategy,
            seed,
        } => {
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::Leftmost,
                StrategyArg::Rightmost => Strategy::Rightmost,
                StrategyArg::Random => Strategy::Random(seed),
            };
            commands::reduce(&read(&file)?, &expr, strategy)
        }
        Command::GroupInfo { file, format } => commands::group_info(&read(&file)?, format),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INVALID } else { 0 });
        }
    };
    let out = dispatch(cli.command).unwrap_or_else(|e| e);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
