//! Command implementations behind the `metatrust` binary.

pub mod args;
pub mod commands;
pub mod error;

pub use args::{Cli, Command, DEFAULT_SEED};
pub use error::{CliError, CliResult, ExitKind};

pub fn run(cli: &Cli) -> CliResult<()> {
    use commands::*;
    match &cli.command {
        Command::Ingest(a) => cmd_ingest(a),
        Command::Diff(a) => cmd_diff(a, cli.seed),
        Command::Train(a) => cmd_train(a, cli.seed),
        Command::Score(a) => cmd_score(a),
        Command::Evaluate(a) => cmd_evaluate(a, cli.seed),
        Command::Bench(a) => cmd_bench(a, cli.seed),
        Command::Mutate(a) => cmd_mutate(a, cli.seed),
    }
}
