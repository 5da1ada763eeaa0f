mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use blockcirc::Error as LibError;

/// Spectral laboratory for symmetric block circulant random matrix
/// ensembles: sample generation, eigenvalue statistics, closed-form limiting
/// densities, and pairing combinatorics, with CSV outputs and JSON run
/// manifests.
#[derive(Parser, Debug)]
#[command(name = "blockcirc", version, max_term_width = 100)]
struct Cli {
    /// Re-run the configuration embedded in a previously written manifest;
    /// replaces the subcommand.
    #[arg(long, global = true, value_name = "MANIFEST.json")]
    config: Option<std::path::PathBuf>,

    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory (default: $BLOCKCIRC_OUT or the current directory).
    #[arg(short = 'o', long, global = true)]
    out_dir: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Option<config::Command>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: could not configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    #[cfg(not(feature = "parallel"))]
    if cli.threads.is_some() {
        eprintln!("note: built without the parallel feature; --threads ignored");
    }

    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os("BLOCKCIRC_OUT").map(Into::into))
        .unwrap_or_else(|| ".".into());

    let run = match (cli.config, cli.command) {
        (Some(path), None) => config::RunConfig::from_manifest(&path),
        (None, Some(cmd)) => Ok(config::RunConfig::from_command(cmd)),
        (Some(_), Some(_)) => Err(anyhow::anyhow!(
            "--config replaces the subcommand; give one or the other"
        )),
        (None, None) => Err(anyhow::anyhow!(
            "missing subcommand (try --help)"
        )),
    };

    let run = match run {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    match commands::dispatch(&run, &out_dir) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Exit code contract: 0 success, 2 usage/config error, 3 numerical
/// invariant violation, 1 everything else (I/O, ...).
fn exit_code_for(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(lib) = cause.downcast_ref::<LibError>() {
            return match lib {
                LibError::Config(_) | LibError::IndexOutOfRange { .. } => 2,
                LibError::InvariantViolation(_) | LibError::NoConvergence { .. } => 3,
            };
        }
        if cause.downcast_ref::<config::UsageError>().is_some() {
            return 2;
        }
    }
    1
}
