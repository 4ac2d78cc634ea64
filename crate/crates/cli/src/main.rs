mod args;
mod commands;
mod config;
mod error;
mod figures;
mod output;
mod plot;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};
use error::{CliError, CliResult};

/// `PROBE_THREADS` caps the rayon pool; 0 or unset lets rayon decide.
fn init_threads() -> CliResult<()> {
    let n = match std::env::var("PROBE_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("PROBE_THREADS must be a non-negative integer, got `{v}`")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))
}

fn run() -> CliResult<()> {
    let cmd = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let argv = config::splice(&cmd, std::env::args_os().collect())?;
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            std::process::exit(e.exit_code());
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::usage(e.to_string()))?;
    init_threads()?;
    match &cli.command {
        Command::Qfi(a) => commands::cmd_qfi(a),
        Command::Overlap(a) => commands::cmd_overlap(a),
        Command::Bound(a) => commands::cmd_bound(a),
        Command::Sweep(a) => commands::cmd_sweep(a, &cli.outdir, &cli.scenario),
        Command::Figure(a) => {
            let table = figures::build(a.id)?;
            let (csv, svg) = table.save(&cli.outdir, &cli.scenario)?;
            println!("wrote {}", csv.display());
            println!("wrote {}", svg.display());
            Ok(())
        }
        Command::ListFigures => {
            for (id, what) in figures::FIGURES {
                println!("{id:>3}  {what}");
            }
            println!();
            println!("not reproduced:");
            for (id, why) in figures::NOT_REPRODUCED {
                println!("{id:>3}  {why}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("probe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
