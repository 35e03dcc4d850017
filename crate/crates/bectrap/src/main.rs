use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bectrap::commands::{self, SnapshotFormat};

/// Wavepacket dynamics in weakly anharmonic traps: GP evolution, averaged
/// resonance model, and phase-space analysis.
#[derive(Parser)]
#[command(name = "bectrap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SnapshotFormatArg {
    Csv,
    Binary,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scenario and store observables plus snapshots.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "binary")]
        snapshot_format: SnapshotFormatArg,
    },
    /// Localization metric over a (u, beta) grid; resumable.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker count (default: available cores).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        resume: bool,
    },
    /// Averaged Hamiltonian, fixed points, separatrix and F for one scenario.
    Classical {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// F(u, beta) table and the level contour.
    Fcontour {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        level: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Husimi field of a stored (or the initial) state with overlay numbers.
    Husimi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Driven classical orbits and their slow components.
    Trajectories {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: Cli) -> bectrap::Result<()> {
    match cli.command {
        Command::Evolve {
            config,
            out,
            snapshot_format,
        } => {
            let format = match snapshot_format {
                SnapshotFormatArg::Csv => SnapshotFormat::Csv,
                SnapshotFormatArg::Binary => SnapshotFormat::Binary,
            };
            commands::cmd_evolve(&config, &out, format)
        }
        Command::Sweep {
            config,
            out,
            workers,
            resume,
        } => {
            let report = commands::cmd_sweep(
                &config,
                &out,
                workers.unwrap_or_else(default_workers),
                resume,
            )?;
            eprintln!(
                "sweep: {} computed, {} skipped, {} failed",
                report.computed,
                report.skipped,
                report.failed.len()
            );
            Ok(())
        }
        Command::Classical { config, out, seed } => commands::cmd_classical(&config, &out, seed),
        Command::Fcontour {
            config,
            out,
            level,
            seed,
            workers,
        } => commands::cmd_fcontour(
            &config,
            &out,
            level,
            seed,
            workers.unwrap_or_else(default_workers),
        ),
        Command::Husimi { config, out } => commands::cmd_husimi(&config, &out),
        Command::Trajectories { config, out } => commands::cmd_trajectories(&config, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
