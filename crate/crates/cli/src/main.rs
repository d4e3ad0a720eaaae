use std::process::ExitCode;

use clap::Parser;
use dd_discord_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            // Usage errors are configuration errors; keep 2 for numerical failures.
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (command, args) = cli.command.split();
    let stdout = std::io::stdout();
    match execute(command, args, &mut stdout.lock()) {
        Ok(written) => {
            for path in written.files {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
