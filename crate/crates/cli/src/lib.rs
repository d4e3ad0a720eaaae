//! Command-line front end for the `dd_discord` library: configuration
//! handling, parallel dataset assembly and deterministic CSV output.

pub mod config;
pub mod emit;
pub mod error;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{resolve, Command, RunArgs, RunConfig, Side};
pub use error::CliError;
pub use run::{compute, Dataset};

pub const THREADS_ENV: &str = "DD_DISCORD_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "dd-discord",
    version,
    about = "Discord and decoherence under periodic dynamical decoupling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Controlled decoherence function Γ(τ) and its factor
    Decoherence(RunArgs),
    /// Correlation dynamics of a Bell-diagonal state
    Trajectory(RunArgs),
    /// Regime labels over an (s, c) grid
    PhaseDiagram(RunArgs),
    /// Minimum decoherence factor against s, one block per pulse interval
    Boundary(RunArgs),
    /// Regime and transition time for a single (s, c)
    Transition(RunArgs),
}

impl Sub {
    pub fn split(&self) -> (Command, &RunArgs) {
        match self {
            Sub::Decoherence(a) => (Command::Decoherence, a),
            Sub::Trajectory(a) => (Command::Trajectory, a),
            Sub::PhaseDiagram(a) => (Command::PhaseDiagram, a),
            Sub::Boundary(a) => (Command::Boundary, a),
            Sub::Transition(a) => (Command::Transition, a),
        }
    }
}

/// Worker count: the flag wins over the environment; `None` lets rayon decide.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        if n == 0 {
            return Err(CliError::config("threads", "must be >= 1"));
        }
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config(
                THREADS_ENV,
                format!("expected a positive integer, got `{v}`"),
            )),
        },
        _ => Ok(None),
    }
}

/// Computes the dataset on a dedicated pool of `threads` workers.
pub fn compute_with_threads(cfg: &RunConfig, threads: Option<usize>) -> Result<Dataset, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config("threads", e.to_string()))?;
    pool.install(|| compute(cfg))
}

/// Files written by [`execute`]; empty when streaming to standard output.
#[derive(Debug, Default)]
pub struct Written {
    pub files: Vec<PathBuf>,
}

/// Resolves, computes and emits. CSV goes to `out` when the output is `-`.
pub fn execute(
    command: Command,
    args: &RunArgs,
    out: &mut dyn std::io::Write,
) -> Result<Written, CliError> {
    let cfg = resolve(command, args)?;
    let threads = thread_count(args.threads)?;
    let data = compute_with_threads(&cfg, threads)?;
    let csv = data.table.to_csv();
    if cfg.output == "-" {
        out.write_all(&csv)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))?;
        return Ok(Written::default());
    }
    let path = PathBuf::from(&cfg.output);
    let mut written = Written::default();
    if let Some(free) = &data.companion {
        let p = emit::companion_path(&path);
        emit::write_atomic(&p, &free.to_csv())?;
        written.files.push(p);
    }
    let side = emit::sidecar_path(&path);
    emit::write_atomic(&side, &emit::sidecar_json(&cfg, &data.table.columns))?;
    emit::write_atomic(&path, &csv)?;
    written.files.push(side);
    written.files.push(path);
    Ok(written)
}
